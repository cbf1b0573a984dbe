#include "culift/unitary_field.hpp"

#include <algorithm>

namespace culift {

UnitaryField UnitaryField::constant(GraphPtr g, const std::vector<Angle>& angles) {
    UnitaryField u;
    u.graph = g;
    u.d = int(angles.size());
    u.tracks.resize(angles.size());
    u.vertex_angles.resize(angles.size());
    for (size_t t = 0; t < angles.size(); ++t) {
        u.tracks[t].resize(g->edges.size());
        for (size_t e = 0; e < g->edges.size(); ++e) {
            u.tracks[t][e].cuts = {Rat(0), g->edges[e].length};
            u.tracks[t][e].lifts = {angles[t].value(), angles[t].value()};
        }
        u.vertex_angles[t].assign(size_t(g->num_vertices), angles[t]);
    }
    return u;
}

void UnitaryField::validate() const {
    if (int(tracks.size()) != d || int(vertex_angles.size()) != d)
        throw validation_error("field: track count differs from the dimension");
    for (int t = 0; t < d; ++t) {
        if (tracks[t].size() != graph->edges.size())
            throw validation_error("field: per-edge data missing on track " + std::to_string(t));
        for (size_t e = 0; e < tracks[t].size(); ++e) {
            const auto& te = tracks[t][e];
            if (te.cuts.size() < 2 || te.cuts.size() != te.lifts.size() ||
                te.cuts.front() != Rat(0) || te.cuts.back() != graph->edges[e].length)
                throw validation_error("field: bad breakpoints on track " + std::to_string(t) +
                                       ", edge " + std::to_string(e));
            for (size_t i = 0; i + 1 < te.cuts.size(); ++i)
                if (!(te.cuts[i] < te.cuts[i + 1]))
                    throw validation_error("field: breakpoints not increasing");
        }
        for (int v = 0; v < graph->num_vertices; ++v)
            for (auto [e, end] : graph->incident(v)) {
                Rat lift = end == 0 ? tracks[t][e].lifts.front() : tracks[t][e].lifts.back();
                if (Angle(lift) != vertex_angles[t][v])
                    throw validation_error("field: track " + std::to_string(t) +
                                           " discontinuous at vertex " + std::to_string(v));
            }
    }
}

Rat UnitaryField::track_lift(int t, int e, const Rat& coord) const {
    const auto& te = tracks[t][e];
    for (size_t i = 0; i + 1 < te.cuts.size(); ++i) {
        if (coord == te.cuts[i]) return te.lifts[i];
        if (te.cuts[i] < coord && coord < te.cuts[i + 1]) {
            Rat w = (coord - te.cuts[i]) / (te.cuts[i + 1] - te.cuts[i]);
            return te.lifts[i] + (te.lifts[i + 1] - te.lifts[i]) * w;
        }
    }
    if (coord == te.cuts.back()) return te.lifts.back();
    throw internal_error("track_lift: coordinate outside the edge");
}

Angle UnitaryField::track_angle(int t, const GraphPoint& p) const {
    if (p.at_vertex) {
        auto inc = graph->incident(p.vertex);
        if (inc.empty()) return vertex_angles[t][p.vertex];
        auto [e, end] = inc[0];
        return Angle(end == 0 ? tracks[t][e].lifts.front() : tracks[t][e].lifts.back());
    }
    return Angle(track_lift(t, p.edge, p.coord));
}

std::vector<Angle> UnitaryField::spectrum_at(const GraphPoint& p) const {
    std::vector<Angle> out;
    out.reserve(size_t(d));
    for (int t = 0; t < d; ++t) out.push_back(track_angle(t, p));
    return out;
}

std::vector<Rat> UnitaryField::grid_crossings(int t, int e, int n) const {
    const auto& te = tracks[t][e];
    long long c = 1ll << n;
    std::vector<Rat> out;
    for (size_t i = 0; i + 1 < te.cuts.size(); ++i) {
        Rat t0 = te.cuts[i], t1 = te.cuts[i + 1];
        Rat l0 = te.lifts[i], l1 = te.lifts[i + 1];
        if (l0 == l1) {
            // constant segment: on-grid throughout or never; no events inside
            continue;
        }
        Rat lo = l0 < l1 ? l0 : l1;
        Rat hi = l0 < l1 ? l1 : l0;
        // grid values k/c with lo <= k/c <= hi
        long long kmin = (lo * Rat(c)).floor();
        while (Rat(kmin, c) < lo) ++kmin;
        for (long long k = kmin; Rat(k, c) <= hi; ++k) {
            Rat target(k, c);
            Rat param = t0 + (target - l0) / (l1 - l0) * (t1 - t0);
            if (Rat(0) <= param && param <= graph->edges[e].length) out.push_back(param);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace culift
