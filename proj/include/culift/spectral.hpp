#pragma once

#include "culift/cu_morphism.hpp"
#include "culift/fd_lift.hpp"
#include "culift/unitary_field.hpp"

namespace culift {

/// The concrete direction: eigenvalue counting. For a diagonal unitary the
/// valuation counts angles in each open dyadic arc, per block.
FinDimValuation cu_of_unitary(const DiagonalUnitary& u, int n);

/// For a field the counts are functions on the graph, piecewise constant
/// between track-crossing events and lower semicontinuous at them.
GraphValuation cu_of_unitary(const UnitaryField& u, int n);

/// Bottleneck matching distance between diagonal unitaries: min over
/// bijections of the max arc distance, exact; the max over blocks.
Rat matching_distance(const DiagonalUnitary& u, const DiagonalUnitary& v);

/// Interval bottleneck (no wraparound) between multisets of reals; the
/// self-adjoint side of the exp/log transfer.
Rat line_bottleneck(const std::vector<Rat>& A, const std::vector<Rat>& B);

/// Continuous-logarithm lifts: the representatives of u's angles in the
/// unit window above the gap. Errors when some angle equals the gap.
std::vector<std::vector<Rat>> log_transfer(const DiagonalUnitary& u, const Angle& gap);

/// Comparison of the counting valuations of two fields on Lambda_n,
/// evaluated against the fields themselves (exact at every resolution).
bool compare_fields_on_lambda(const UnitaryField& u, const UnitaryField& v, int n);

/// Pointwise witness set for a family of fields: one representative per
/// region between grid-crossing events plus the event points and vertices.
std::vector<GraphPoint> field_witness_points(const std::vector<const UnitaryField*>& fields, int n);

} // namespace culift
