#include "culift/spectral.hpp"

#include <algorithm>

namespace culift {

FinDimValuation cu_of_unitary(const DiagonalUnitary& u, int n) {
    return FinDimValuation::from_multisets(n, u.blocks);
}

GraphValuation cu_of_unitary(const UnitaryField& u, int n) {
    u.validate();
    GraphPtr g = u.graph;
    int c = 1 << n;
    GraphValuation a(g, n, u.d);

    // events: every parameter where some track sits on the resolution-n grid
    std::vector<std::vector<Rat>> events(g->edges.size());
    for (size_t e = 0; e < g->edges.size(); ++e) {
        std::vector<Rat> ev;
        for (int t = 0; t < u.d; ++t) {
            auto cr = u.grid_crossings(t, int(e), n);
            ev.insert(ev.end(), cr.begin(), cr.end());
        }
        for (int t = 0; t < u.d; ++t) // breakpoints of the tracks themselves
            for (const Rat& q : u.tracks[t][e].cuts) ev.push_back(q);
        std::sort(ev.begin(), ev.end());
        ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
        std::vector<Rat> kept;
        for (const Rat& q : ev)
            if (Rat(0) < q && q < g->edges[e].length) kept.push_back(q);
        events[e] = kept;
    }

    // spectra are sampled once per cell (interval midpoints, event points,
    // vertices); each arc count is then a prefix-sum lookup
    std::vector<std::vector<ArcCounter>> mid_counts(g->edges.size());
    std::vector<std::vector<ArcCounter>> event_counts(g->edges.size());
    std::vector<std::vector<Rat>> cuts(g->edges.size());
    for (size_t e = 0; e < g->edges.size(); ++e) {
        cuts[e].push_back(Rat(0));
        for (const Rat& q : events[e]) cuts[e].push_back(q);
        cuts[e].push_back(g->edges[e].length);
        for (size_t i = 0; i + 1 < cuts[e].size(); ++i) {
            GraphPoint mid = GraphPoint::on_edge(int(e), (cuts[e][i] + cuts[e][i + 1]) / Rat(2));
            mid_counts[e].emplace_back(u.spectrum_at(mid), n);
        }
        for (size_t i = 1; i + 1 < cuts[e].size(); ++i)
            event_counts[e].emplace_back(u.spectrum_at(GraphPoint::on_edge(int(e), cuts[e][i])), n);
    }
    std::vector<ArcCounter> vertex_counts;
    for (int v = 0; v < g->num_vertices; ++v)
        vertex_counts.emplace_back(u.spectrum_at(GraphPoint::on_vertex(v)), n);

    for (int len = 1; len <= c; ++len)
        for (int s = 0; s < c; ++s) {
            GraphLsc f(g);
            for (size_t e = 0; e < g->edges.size(); ++e) {
                auto& ef = f.edges[e];
                ef.cuts = cuts[e];
                ef.iv.clear();
                ef.bv.clear();
                for (const auto& cnt : mid_counts[e]) ef.iv.push_back(ExtNat(cnt.arc(s, len)));
                for (const auto& cnt : event_counts[e]) ef.bv.push_back(ExtNat(cnt.arc(s, len)));
            }
            for (int v = 0; v < g->num_vertices; ++v)
                f.vertex_values[v] = ExtNat(vertex_counts[size_t(v)].arc(s, len));
            a.set_value(s, len, std::move(f));
        }
    a.validate();
    return a;
}

Rat matching_distance(const DiagonalUnitary& u, const DiagonalUnitary& v) {
    if (u.dims() != v.dims())
        throw validation_error("matching distance: block dimensions differ");
    Rat best(0);
    for (size_t b = 0; b < u.blocks.size(); ++b) {
        Rat r = multiset_bottleneck(u.blocks[b], v.blocks[b]);
        if (r > best) best = r;
    }
    return best;
}

Rat line_bottleneck(const std::vector<Rat>& A, const std::vector<Rat>& B) {
    if (A.size() != B.size())
        throw validation_error("line bottleneck: multiset sizes differ");
    // sorted assignment is optimal for the interval metric
    std::vector<Rat> a = A, b = B;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    Rat best(0);
    for (size_t i = 0; i < a.size(); ++i) {
        Rat d = (a[i] - b[i]).abs();
        if (d > best) best = d;
    }
    return best;
}

std::vector<std::vector<Rat>> log_transfer(const DiagonalUnitary& u, const Angle& gap) {
    std::vector<std::vector<Rat>> out;
    for (const auto& block : u.blocks) {
        std::vector<Rat> lifts;
        for (const Angle& a : block) {
            if (a == gap)
                throw validation_error("log transfer: spectrum touches the gap at " + a.str());
            // representative in the unit window (gap, gap + 1)
            Rat v = a.value();
            if (v < gap.value() || v == gap.value()) v += Rat(1);
            lifts.push_back(v);
        }
        out.push_back(std::move(lifts));
    }
    return out;
}

std::vector<GraphPoint> field_witness_points(const std::vector<const UnitaryField*>& fields, int n) {
    if (fields.empty()) return {};
    GraphPtr g = fields.front()->graph;
    std::vector<GraphPoint> out;
    for (size_t e = 0; e < g->edges.size(); ++e) {
        std::vector<Rat> ev = {Rat(0), g->edges[e].length};
        for (const UnitaryField* u : fields)
            for (int t = 0; t < u->d; ++t) {
                auto cr = u->grid_crossings(t, int(e), n);
                ev.insert(ev.end(), cr.begin(), cr.end());
                for (const Rat& q : u->tracks[t][e].cuts) ev.push_back(q);
            }
        std::sort(ev.begin(), ev.end());
        ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
        for (size_t i = 0; i + 1 < ev.size(); ++i) {
            out.push_back(GraphPoint::on_edge(int(e), (ev[i] + ev[i + 1]) / Rat(2)));
            if (i > 0) out.push_back(GraphPoint::on_edge(int(e), ev[i]));
        }
    }
    for (int v = 0; v < g->num_vertices; ++v) out.push_back(GraphPoint::on_vertex(v));
    return out;
}

bool compare_fields_on_lambda(const UnitaryField& u, const UnitaryField& v, int n) {
    if (u.graph->edges.size() != v.graph->edges.size() ||
        u.graph->num_vertices != v.graph->num_vertices)
        throw validation_error("field comparison: graphs differ");
    if (u.d != v.d) return false;
    auto pts = field_witness_points({&u, &v}, n);
    for (const auto& p : pts) {
        auto su = u.spectrum_at(p);
        auto sv = v.spectrum_at(p);
        if (!multisets_compare(su, sv, n)) return false;
    }
    return true;
}

} // namespace culift
