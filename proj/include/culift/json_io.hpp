#pragma once

#include "culift/determinant.hpp"
#include "culift/fd_lift.hpp"
#include "culift/graph_lift.hpp"
#include "culift/unitary_field.hpp"

#include <json.hpp>

#include <variant>

namespace culift::io {

using nlohmann::json;

// rationals serialize as "p/q" strings, infinity as "inf"
json rat_json(const Rat& r);
Rat rat_from(const json& j, const std::string& where);
json extnat_json(const ExtNat& v);
ExtNat extnat_from(const json& j, const std::string& where);

json to_json(const StepLsc& f);
StepLsc step_from_json(const json& j);

json to_json(const MetricGraph& g);
GraphPtr graph_from_json(const json& j);

json to_json(const GraphLsc& f);
GraphLsc graphlsc_from_json(const json& j, GraphPtr g);

json to_json(const DiagonalUnitary& u);
DiagonalUnitary unitary_from_json(const json& j);

json to_json(const UnitaryField& u);
UnitaryField field_from_json(const json& j);

struct AnyValuation {
    std::variant<FinDimValuation, GraphValuation, CuZValuation> v;
};

json to_json(const FinDimValuation& a);
json to_json(const GraphValuation& a);
json to_json(const CuZValuation& a);
json to_json(const AnyValuation& a);
AnyValuation valuation_from_json(const json& j);

json to_json(const WindingClass& w);
json to_json(const ObstructionCertificate& c);
json to_json(const Report& r);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

} // namespace culift::io
