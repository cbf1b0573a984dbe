#pragma once

#include "culift/circle.hpp"
#include "culift/graph_space.hpp"

#include <vector>

namespace culift {

/// A diagonal unitary element of M_d(C(X)): d angle tracks, each a
/// continuous piecewise-linear function X -> R/Z. Per edge a track stores a
/// real-valued rational lift at its breakpoints (linear in between); the
/// angle is the lift mod 1. Across vertices only the angle is continuous:
/// lifts may jump by integers edge to edge.
struct UnitaryField {
    struct TrackEdge {
        std::vector<Rat> cuts;  // 0 = cuts[0] < ... < cuts[m] = length
        std::vector<Rat> lifts; // lift value at each cut, linear between
    };

    GraphPtr graph;
    int d = 0;
    std::vector<std::vector<TrackEdge>> tracks; // [track][edge]
    std::vector<std::vector<Angle>> vertex_angles; // [track][vertex]

    static UnitaryField constant(GraphPtr g, const std::vector<Angle>& angles);

    /// Continuity within edges is structural; at vertices every incident
    /// edge end must agree with the stored vertex angle mod 1.
    void validate() const;

    Rat track_lift(int t, int e, const Rat& coord) const;
    Angle track_angle(int t, const GraphPoint& p) const;
    std::vector<Angle> spectrum_at(const GraphPoint& p) const;

    /// Parameters on an edge where a track's angle sits on the dyadic grid
    /// k/2^n (the spectral counting events for resolution n).
    std::vector<Rat> grid_crossings(int t, int e, int n) const;
};

} // namespace culift
