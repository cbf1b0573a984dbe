#pragma once

#include "culift/cu_morphism.hpp"
#include "culift/matching.hpp"
#include "culift/unitary_field.hpp"

#include <map>

namespace culift {

/// Hall-condition failure: carries a deficient set of source angles whose
/// neighbourhood under the threshold is strictly smaller.
struct hall_error : validation_error {
    std::vector<Angle> deficient;
    hall_error(const std::string& msg, std::vector<Angle> omega)
        : validation_error(msg), deficient(std::move(omega)) {}
};

/// A bottleneck-bounded bijection between two angle multisets, stored on
/// the sorted multisets as an index map.
struct Matching {
    int piece_a = -1, piece_b = -1;
    std::vector<Angle> from; // sorted
    std::vector<Angle> to;   // sorted
    std::vector<int> sigma;  // from[i] -> to[sigma[i]]
    Rat bottleneck;
};

/// Perfect matching within the strict threshold, lexicographically
/// canonical (sorted sources take the smallest feasible target). Throws
/// hall_error with a certifying deficient set when none exists.
Matching marriage_match(const std::vector<Angle>& xa, const std::vector<Angle>& xb,
                        const Rat& threshold);

struct LiftResult {
    UnitaryField field;
    ClosedCover cover;
    std::vector<std::vector<Angle>> piece_multisets;
    std::vector<Matching> matchings; // every matching used by the assembly
};

/// Collar depth per piece: a sixteenth of the piece measure, capped by a
/// quarter of the shortest germ reach at its boundary.
std::vector<Rat> delta_schedule(const ClosedCover& cover);

/// Step 4: the piecewise assembly. Pieces carry their fill-up multisets;
/// matchings are looked up per unordered piece pair. The returned field is
/// constant on each delta-shrunken piece and interpolates linearly across
/// connectors, every track staying within arc distance 2/2^n of its piece
/// value.
UnitaryField assemble(GraphPtr g, const ClosedCover& cover,
                      const std::vector<std::vector<Angle>>& piece_multisets,
                      const std::map<std::pair<int, int>, Matching>& matchings, int n);

/// The whole existence run: cut along the valuation's generators, fill up
/// each piece, match across singular points, assemble, then certify
/// compare-on-Lambda_{n-2} against the input. Errors are tagged with the
/// failing step.
LiftResult lift_graph(const GraphValuation& alpha, int n);

} // namespace culift
