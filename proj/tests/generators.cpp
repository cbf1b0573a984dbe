#include "generators.hpp"

namespace culift::gen {

std::vector<Angle> random_halfgrid_multiset(Rng& rng, int n, int d) {
    long long half = 2ll << n; // 2^(n+1) positions
    std::uniform_int_distribution<long long> pick(0, half - 1);
    std::vector<Angle> out;
    out.reserve(size_t(d));
    for (int i = 0; i < d; ++i) out.push_back(Angle(Rat(pick(rng), half)));
    return out;
}

std::vector<Angle> random_fine_multiset(Rng& rng, int grid_exp, int d) {
    long long grid = 1ll << grid_exp;
    std::uniform_int_distribution<long long> pick(0, grid - 1);
    std::vector<Angle> out;
    out.reserve(size_t(d));
    for (int i = 0; i < d; ++i) out.push_back(Angle(Rat(pick(rng), grid)));
    return out;
}

FinDimValuation random_valuation(Rng& rng, int n, const std::vector<int>& dims) {
    std::vector<std::vector<Angle>> blocks;
    blocks.reserve(dims.size());
    for (int d : dims) blocks.push_back(random_halfgrid_multiset(rng, n, d));
    return FinDimValuation::from_multisets(n, blocks);
}

GraphPtr interval_graph() {
    auto g = std::make_shared<MetricGraph>();
    g->num_vertices = 2;
    g->edges.push_back({0, 1, Rat(1)});
    g->validate();
    return g;
}

GraphPtr circle_graph() {
    auto g = std::make_shared<MetricGraph>();
    g->num_vertices = 1;
    g->edges.push_back({0, 0, Rat(1)});
    g->validate();
    return g;
}

GraphPtr theta_graph() {
    auto g = std::make_shared<MetricGraph>();
    g->num_vertices = 2;
    g->edges.push_back({0, 1, Rat(1)});
    g->edges.push_back({0, 1, Rat(1)});
    g->edges.push_back({0, 1, Rat(1)});
    g->validate();
    return g;
}

GraphPtr star_graph() {
    auto g = std::make_shared<MetricGraph>();
    g->num_vertices = 6;
    for (int i = 1; i <= 4; ++i) g->edges.push_back({0, i, Rat(1, 2)});
    g->validate();
    return g;
}

GraphPtr figure_eight_graph() {
    auto g = std::make_shared<MetricGraph>();
    g->num_vertices = 1;
    g->edges.push_back({0, 0, Rat(1)});
    g->edges.push_back({0, 0, Rat(2, 3)});
    g->validate();
    return g;
}

GraphPtr triangle_pendant_graph() {
    auto g = std::make_shared<MetricGraph>();
    g->num_vertices = 4;
    g->edges.push_back({0, 1, Rat(1, 2)});
    g->edges.push_back({1, 2, Rat(1, 2)});
    g->edges.push_back({2, 0, Rat(1, 2)});
    g->edges.push_back({0, 3, Rat(1, 4)});
    g->validate();
    return g;
}

UnitaryField random_field(Rng& rng, GraphPtr g, int d, int n) {
    // per track: a base angle plus small per-vertex jitter; edges interpolate
    // linearly with one interior kink, every excursion under a quarter cell
    long long cells = 1ll << n;
    long long fine = 4 * cells; // jitter grid 1/2^(n+2)
    std::uniform_int_distribution<long long> base_pick(0, 2 * cells - 1);
    std::uniform_int_distribution<long long> jitter_pick(-1, 1);
    std::uniform_int_distribution<int> kink_pick(0, 3);

    UnitaryField u;
    u.graph = g;
    u.d = d;
    u.tracks.assign(size_t(d), {});
    u.vertex_angles.assign(size_t(d), {});
    for (int t = 0; t < d; ++t) {
        Rat base(base_pick(rng), 2 * cells);
        std::vector<Rat> vlift(size_t(g->num_vertices));
        for (int v = 0; v < g->num_vertices; ++v)
            vlift[v] = base + Rat(jitter_pick(rng), fine);
        u.vertex_angles[t].resize(size_t(g->num_vertices));
        for (int v = 0; v < g->num_vertices; ++v) u.vertex_angles[t][v] = Angle(vlift[v]);
        u.tracks[t].resize(g->edges.size());
        for (size_t e = 0; e < g->edges.size(); ++e) {
            Rat len = g->edges[e].length;
            Rat l0 = vlift[g->edges[e].a];
            Rat l1 = vlift[g->edges[e].b];
            auto& te = u.tracks[t][e];
            if (kink_pick(rng) == 0) {
                te.cuts = {Rat(0), len};
                te.lifts = {l0, l1};
            } else {
                Rat mid = len * Rat(1 + kink_pick(rng), 5);
                Rat lm = base + Rat(jitter_pick(rng), fine);
                te.cuts = {Rat(0), mid, len};
                te.lifts = {l0, lm, l1};
            }
        }
    }
    u.validate();
    return u;
}

UnitaryField wild_field(Rng& rng, GraphPtr g, int d, int n) {
    long long cells = 1ll << n;
    long long fine = 8 * cells;
    std::uniform_int_distribution<long long> base_pick(0, fine - 1);
    std::uniform_int_distribution<long long> jit(-4, 4); // up to half a cell
    UnitaryField u;
    u.graph = g;
    u.d = d;
    u.tracks.assign(size_t(d), {});
    u.vertex_angles.assign(size_t(d), {});
    for (int t = 0; t < d; ++t) {
        Rat base(base_pick(rng), fine);
        std::vector<Rat> vlift(size_t(g->num_vertices));
        for (int v = 0; v < g->num_vertices; ++v) vlift[size_t(v)] = base + Rat(jit(rng), fine);
        u.vertex_angles[t].resize(size_t(g->num_vertices));
        for (int v = 0; v < g->num_vertices; ++v) u.vertex_angles[t][size_t(v)] = Angle(vlift[size_t(v)]);
        u.tracks[t].resize(g->edges.size());
        for (size_t e = 0; e < g->edges.size(); ++e) {
            Rat len = g->edges[e].length;
            auto& te = u.tracks[t][e];
            te.cuts = {Rat(0)};
            te.lifts = {vlift[size_t(g->edges[e].a)]};
            int kinks = int(rng() % 3);
            for (int k = 1; k <= kinks; ++k) {
                te.cuts.push_back(len * Rat(k, kinks + 1));
                te.lifts.push_back(base + Rat(jit(rng), fine));
            }
            te.cuts.push_back(len);
            te.lifts.push_back(vlift[size_t(g->edges[e].b)]);
        }
    }
    u.validate();
    return u;
}

} // namespace culift::gen
