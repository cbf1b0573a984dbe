#include "culift/graph_lift.hpp"
#include "culift/spectral.hpp"

#include <algorithm>
#include <deque>

namespace culift {

Matching marriage_match(const std::vector<Angle>& xa0, const std::vector<Angle>& xb0,
                        const Rat& threshold) {
    if (xa0.size() != xb0.size())
        throw validation_error("marriage: multiset sizes differ");
    Matching m;
    m.from = xa0;
    m.to = xb0;
    std::sort(m.from.begin(), m.from.end());
    std::sort(m.to.begin(), m.to.end());
    size_t d = m.from.size();
    if (d == 0) return m;
    std::vector<std::vector<bool>> adj(d, std::vector<bool>(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j)
            adj[i][j] = arc_dist(m.from[i], m.to[j]) < threshold;
    auto r = max_bipartite(adj);
    if (!r.perfect) {
        std::vector<Angle> omega;
        for (int i : r.deficient_left) omega.push_back(m.from[i]);
        throw hall_error("marriage: Hall condition fails for a set of " +
                             std::to_string(omega.size()) + " angles at threshold " +
                             threshold.str(),
                         std::move(omega));
    }
    m.sigma = lex_min_perfect(adj);
    m.bottleneck = Rat(0);
    for (size_t i = 0; i < d; ++i) {
        Rat dd = arc_dist(m.from[i], m.to[m.sigma[i]]);
        if (dd > m.bottleneck) m.bottleneck = dd;
    }
    return m;
}

namespace {

/// Signed shortest displacement a -> b on the circle, in (-1/2, 1/2];
/// antipodal ties break counterclockwise.
Rat signed_short(const Angle& a, const Angle& b) {
    Rat d = (b.value() - a.value()).frac(); // in [0,1)
    if (d <= Rat(1, 2)) return d;
    return d - Rat(1);
}

struct GermRole {
    // resolved connector data for one germ at one singular point
    int piece;
    Rat delta;                  // collar depth into the piece
    // per track: real displacement profile relative to the piece value,
    // positions measured from the singular point into the piece:
    // at 0 (the point itself), at delta/2 (mid, q-paths only), at delta.
    std::vector<Rat> at_point;
    std::vector<Rat> at_mid;
    bool has_mid = false;
};

struct SingularPlan {
    GraphPoint point;
    std::vector<SingularPoint::Germ> germs; // canonical order, [0] = pivot
    std::vector<GermRole> roles;            // aligned with germs
};

} // namespace

std::vector<Rat> delta_schedule(const ClosedCover& cover) {
    size_t P = cover.pieces.size();
    std::vector<Rat> delta(P, Rat(0));
    for (size_t p = 0; p < P; ++p) delta[p] = cover.pieces[p].interior.measure() / Rat(16);
    for (const auto& sp : cover.singular)
        for (const auto& grm : sp.germs) {
            Rat cap = grm.reach / Rat(4);
            if (cap < delta[grm.piece]) delta[grm.piece] = cap;
        }
    return delta;
}

UnitaryField assemble(GraphPtr g, const ClosedCover& cover,
                      const std::vector<std::vector<Angle>>& piece_multisets,
                      const std::map<std::pair<int, int>, Matching>& matchings, int n) {
    if (cover.pieces.size() != piece_multisets.size())
        throw validation_error("assemble: one multiset per piece required");
    if (piece_multisets.empty()) throw validation_error("assemble: empty cover");
    size_t d = piece_multisets[0].size();
    for (const auto& ms : piece_multisets)
        if (ms.size() != d) throw validation_error("assemble: piece dimensions differ");
    Rat bound(2, 1ll << n);

    std::vector<std::vector<Angle>> sorted_ms = piece_multisets;
    for (auto& ms : sorted_ms) std::sort(ms.begin(), ms.end());

    // gauge: per piece, the diagonal order as indices into the sorted multiset
    size_t P = cover.pieces.size();
    auto lookup = [&](int a, int b) -> const Matching& {
        auto it = matchings.find({std::min(a, b), std::max(a, b)});
        if (it == matchings.end())
            throw validation_error("assemble: missing matching for pieces " +
                                   std::to_string(a) + "," + std::to_string(b));
        return it->second;
    };
    // apply sigma in the right direction
    auto sigma_of = [&](int a, int b, int idx) -> int {
        const Matching& m = lookup(a, b);
        if (a <= b) return m.sigma[idx];
        // inverse
        for (size_t i = 0; i < m.sigma.size(); ++i)
            if (m.sigma[i] == idx) return int(i);
        throw internal_error("assemble: matching not invertible");
    };

    // constraints from singular points: (pivot piece, other piece)
    std::vector<SingularPlan> plans;
    for (const auto& sp : cover.singular) {
        SingularPlan pl;
        pl.point = sp.point;
        pl.germs = sp.germs;
        std::sort(pl.germs.begin(), pl.germs.end(),
                  [](const SingularPoint::Germ& a, const SingularPoint::Germ& b) {
                      if (a.edge != b.edge) return a.edge < b.edge;
                      return a.increasing < b.increasing;
                  });
        plans.push_back(std::move(pl));
    }

    // constraint adjacency: for each piece, the constraints it appears in
    struct Constraint { int a, b; };
    std::vector<Constraint> cons;
    for (const auto& pl : plans)
        for (size_t gi = 1; gi < pl.germs.size(); ++gi)
            cons.push_back({pl.germs[0].piece, pl.germs[gi].piece});
    std::vector<std::vector<int>> cons_at(P);
    for (size_t ci = 0; ci < cons.size(); ++ci) {
        cons_at[cons[ci].a].push_back(int(ci));
        cons_at[cons[ci].b].push_back(int(ci));
    }

    std::vector<std::vector<int>> order(P);
    // first candidate: the identity gauge on the sorted multisets, valid
    // whenever sorted positions never drift a full matching bound apart
    bool identity_ok = true;
    for (const auto& cn : cons) {
        for (size_t t = 0; t < d && identity_ok; ++t)
            if (!(arc_dist(sorted_ms[cn.a][t], sorted_ms[cn.b][t]) < bound)) identity_ok = false;
        if (!identity_ok) break;
    }
    if (identity_ok) {
        for (size_t p = 0; p < P; ++p) {
            order[p].resize(d);
            for (size_t i = 0; i < d; ++i) order[p][i] = int(i);
        }
    } else {
        // propagate the marriage matchings along a spanning structure and
        // check every cycle-closing constraint trackwise; different roots
        // give different spanning trees, so all of them are tried before
        // the closure is declared infeasible
        std::string failure;
        auto try_root = [&](size_t root, std::vector<std::vector<int>>& ord) {
            std::vector<bool> fixed(P, false);
            std::deque<int> queue;
            for (size_t start = 0; start < P; ++start) {
                size_t p = (root + start) % P;
                if (fixed[p]) continue;
                ord[p].assign(d, 0);
                for (size_t i = 0; i < d; ++i) ord[p][i] = int(i);
                fixed[p] = true;
                queue.push_back(int(p));
                while (!queue.empty()) {
                    int cur = queue.front();
                    queue.pop_front();
                    for (int ci : cons_at[cur]) {
                        int other = cons[ci].a == cur ? cons[ci].b : cons[ci].a;
                        if (other == cur) continue;
                        if (!fixed[other]) {
                            ord[other].resize(d);
                            for (size_t t = 0; t < d; ++t)
                                ord[other][t] = sigma_of(cur, other, ord[cur][t]);
                            fixed[other] = true;
                            queue.push_back(other);
                        } else {
                            for (size_t t = 0; t < d; ++t) {
                                const Angle& x = sorted_ms[cur][ord[cur][t]];
                                const Angle& y = sorted_ms[other][ord[other][t]];
                                if (!(arc_dist(x, y) < bound)) {
                                    failure = "assemble: cycle closure between pieces " +
                                              std::to_string(cur) + " and " +
                                              std::to_string(other) +
                                              " forces a transition of " + arc_dist(x, y).str() +
                                              " >= 2/2^n = " + bound.str();
                                    return false;
                                }
                            }
                        }
                    }
                }
            }
            return true;
        };
        bool closed = false;
        for (size_t root = 0; root < P && !closed; ++root) {
            std::vector<std::vector<int>> cand(P);
            if (try_root(root, cand)) {
                order = std::move(cand);
                closed = true;
            }
        }
        if (!closed) throw validation_error(failure);
    }

    // piece angle per track
    auto track_value = [&](int piece, size_t t) -> const Angle& {
        return sorted_ms[piece][order[piece][t]];
    };

    // delta schedule: diameter/16 capped by a quarter of the shortest germ reach
    std::vector<Rat> delta = delta_schedule(cover);
    for (size_t p = 0; p < P; ++p)
        if (!cover.pieces[p].boundary_points.empty() && !(delta[p] > Rat(0)))
            throw validation_error("assemble: connector region too short at piece " +
                                   std::to_string(p));

    // resolve connector roles
    for (auto& pl : plans) {
        int pivot = pl.germs[0].piece;
        int second = pl.germs.size() >= 2 ? pl.germs[1].piece : pivot;
        std::vector<Rat> disp_ab(d, Rat(0));
        if (pl.germs.size() >= 2)
            for (size_t t = 0; t < d; ++t)
                disp_ab[t] = signed_short(track_value(pivot, t), track_value(second, t));
        for (size_t gi = 0; gi < pl.germs.size(); ++gi) {
            const auto& grm = pl.germs[gi];
            GermRole role;
            role.piece = grm.piece;
            role.delta = delta[grm.piece];
            role.at_point.resize(d);
            role.at_mid.assign(d, Rat(0));
            for (size_t t = 0; t < d; ++t) {
                Rat a_to_b_half = disp_ab[t] / Rat(2);
                if (gi == 0) {
                    role.at_point[t] = a_to_b_half; // pivot side: a -> u(x)
                } else if (gi == 1) {
                    role.at_point[t] = a_to_b_half - disp_ab[t]; // = -disp/2 relative to b
                } else {
                    Rat disp_ac = signed_short(track_value(pivot, t), track_value(grm.piece, t));
                    role.at_point[t] = a_to_b_half - disp_ac;
                    role.at_mid[t] = -disp_ac; // back at the pivot value
                    role.has_mid = true;
                }
            }
            if (pl.germs.size() == 1) role.at_point.assign(d, Rat(0)); // sink: constant through
            pl.roles.push_back(std::move(role));
        }
    }

    // per-edge singular structure
    std::vector<std::vector<int>> interior_sing(g->edges.size()); // plan indices, sorted by coord
    std::vector<int> vertex_plan(size_t(g->num_vertices), -1);
    for (size_t pi = 0; pi < plans.size(); ++pi) {
        const auto& pt = plans[pi].point;
        if (pt.at_vertex) vertex_plan[pt.vertex] = int(pi);
        else interior_sing[pt.edge].push_back(int(pi));
    }
    for (auto& v : interior_sing)
        std::sort(v.begin(), v.end(), [&](int a, int b) {
            return plans[a].point.coord < plans[b].point.coord;
        });

    auto find_germ = [&](const SingularPlan& pl, int edge, bool increasing) -> int {
        for (size_t gi = 0; gi < pl.germs.size(); ++gi)
            if (pl.germs[gi].edge == edge && pl.germs[gi].increasing == increasing)
                return int(gi);
        throw internal_error("assemble: germ not found at singular point");
    };
    auto zone_piece = [&](int e, const Rat& lo, const Rat& hi) -> int {
        GraphPoint mid = GraphPoint::on_edge(e, (lo + hi) / Rat(2));
        for (size_t p = 0; p < P; ++p)
            if (cover.pieces[p].interior.contains(mid)) return int(p);
        throw internal_error("assemble: zone belongs to no piece");
    };

    UnitaryField u;
    u.graph = g;
    u.d = int(d);
    u.tracks.assign(d, std::vector<UnitaryField::TrackEdge>(g->edges.size()));
    u.vertex_angles.assign(d, std::vector<Angle>(size_t(g->num_vertices), Angle()));

    for (size_t e = 0; e < g->edges.size(); ++e) {
        Rat len = g->edges[e].length;
        // zone boundaries: 0, interior singular coords, len
        std::vector<Rat> zb = {Rat(0)};
        for (int pi : interior_sing[e]) zb.push_back(plans[pi].point.coord);
        zb.push_back(len);
        int zones = int(zb.size()) - 1;
        std::vector<int> zp(zones);
        for (int z = 0; z < zones; ++z) zp[z] = zone_piece(int(e), zb[z], zb[z + 1]);

        for (size_t t = 0; t < d; ++t) {
            std::vector<Rat> cuts, lifts;
            Rat base = track_value(zp[0], t).value(); // lift anchor of zone 0
            // left edge end
            int va = g->edges[e].a;
            cuts.push_back(Rat(0));
            if (vertex_plan[va] >= 0) {
                const auto& pl = plans[vertex_plan[va]];
                int gi = find_germ(pl, int(e), true);
                const auto& role = pl.roles[gi];
                lifts.push_back(base + role.at_point[t]);
                if (role.has_mid && role.delta > Rat(0)) {
                    cuts.push_back(role.delta / Rat(2));
                    lifts.push_back(base + role.at_mid[t]);
                }
                if (role.delta > Rat(0)) {
                    cuts.push_back(role.delta);
                    lifts.push_back(base);
                }
            } else {
                lifts.push_back(base);
            }
            // interior singular points
            for (int zi = 0; zi < zones - 1; ++zi) {
                // boundary between zone zi and zone zi+1 at zb[zi+1]
                const auto& pl = plans[interior_sing[e][zi]];
                Rat x = pl.point.coord;
                int gl = find_germ(pl, int(e), false); // germ into zone zi (decreasing)
                int gr = find_germ(pl, int(e), true);  // germ into zone zi+1
                const auto& rl = pl.roles[gl];
                const auto& rr = pl.roles[gr];
                // left collar: piece value at x - delta, connector value at x
                if (rl.delta > Rat(0)) {
                    cuts.push_back(x - rl.delta);
                    lifts.push_back(base);
                    if (rl.has_mid) {
                        cuts.push_back(x - rl.delta / Rat(2));
                        lifts.push_back(base + rl.at_mid[t]);
                    }
                }
                Rat lift_at_x = base + rl.at_point[t];
                cuts.push_back(x);
                lifts.push_back(lift_at_x);
                // right zone base continues the lift
                base = lift_at_x - rr.at_point[t];
                if (rr.delta > Rat(0)) {
                    if (rr.has_mid) {
                        cuts.push_back(x + rr.delta / Rat(2));
                        lifts.push_back(base + rr.at_mid[t]);
                    }
                    cuts.push_back(x + rr.delta);
                    lifts.push_back(base);
                }
            }
            // right edge end
            int vb = g->edges[e].b;
            if (vertex_plan[vb] >= 0) {
                const auto& pl = plans[vertex_plan[vb]];
                int gi = find_germ(pl, int(e), false);
                const auto& role = pl.roles[gi];
                if (role.delta > Rat(0)) {
                    cuts.push_back(len - role.delta);
                    lifts.push_back(base);
                    if (role.has_mid) {
                        cuts.push_back(len - role.delta / Rat(2));
                        lifts.push_back(base + role.at_mid[t]);
                    }
                }
                cuts.push_back(len);
                lifts.push_back(base + role.at_point[t]);
            } else {
                cuts.push_back(len);
                lifts.push_back(base);
            }
            u.tracks[t][e].cuts = std::move(cuts);
            u.tracks[t][e].lifts = std::move(lifts);
        }
    }

    // vertex angles
    for (int v = 0; v < g->num_vertices; ++v) {
        for (size_t t = 0; t < d; ++t) {
            if (vertex_plan[v] >= 0) {
                const auto& pl = plans[vertex_plan[v]];
                const auto& role = pl.roles[0];
                int piece = pl.germs[0].piece;
                u.vertex_angles[t][v] = Angle(track_value(piece, t).value() + role.at_point[t]);
            } else {
                // vertex interior to a piece, or isolated (a sink piece)
                int piece = -1;
                for (size_t p = 0; p < P; ++p)
                    if (cover.pieces[p].interior.vertices[v]) { piece = int(p); break; }
                if (piece < 0)
                    throw internal_error("assemble: vertex in no piece and not singular");
                u.vertex_angles[t][v] = track_value(piece, t);
            }
        }
    }

    u.validate();
    return u;
}

LiftResult lift_graph(const GraphValuation& alpha, int n) {
    GraphValuation a = alpha;
    if (a.resolution() < n)
        throw resolution_error("graph lift: valuation coarser than the requested lattice");
    if (a.resolution() > n) a = a.coarsened(n);
    // step 1: cut along the valuation's generators and fill up each piece
    LiftResult res;
    try {
        a.validate();
        std::vector<GraphLsc> fs;
        int c = 1 << a.resolution();
        for (int len = 1; len <= c; ++len)
            for (int s = 0; s < c; ++s) fs.push_back(a.value(s, len));
        res.cover = cut(a.graph(), fs);
    } catch (const validation_error& e) {
        throw validation_error(std::string("graph lift step 1 (cut): ") + e.what());
    }
    try {
        for (const auto& p : res.cover.pieces) {
            GraphPoint rep = [&] {
                for (size_t e = 0; e < p.interior.intervals.size(); ++e)
                    if (!p.interior.intervals[e].empty()) {
                        const auto& in = p.interior.intervals[e][0];
                        return GraphPoint::on_edge(int(e), (in.first + in.second) / Rat(2));
                    }
                for (int v = 0; v < a.graph()->num_vertices; ++v)
                    if (p.interior.vertices[v]) return GraphPoint::on_vertex(v);
                throw internal_error("piece without interior");
            }();
            res.piece_multisets.push_back(a.multiset_at(rep));
        }
    } catch (const validation_error& e) {
        throw validation_error(std::string("graph lift step 1 (fill-up): ") + e.what());
    }
    // step 2: marriage matchings across every singular adjacency
    std::map<std::pair<int, int>, Matching> matchings;
    Rat threshold(2, 1ll << n);
    try {
        for (const auto& sp : res.cover.singular) {
            for (size_t i = 0; i < sp.germs.size(); ++i)
                for (size_t j = i + 1; j < sp.germs.size(); ++j) {
                    int pa = std::min(sp.germs[i].piece, sp.germs[j].piece);
                    int pb = std::max(sp.germs[i].piece, sp.germs[j].piece);
                    if (matchings.count({pa, pb})) continue;
                    Matching m =
                        marriage_match(res.piece_multisets[pa], res.piece_multisets[pb], threshold);
                    m.piece_a = pa;
                    m.piece_b = pb;
                    matchings.emplace(std::make_pair(pa, pb), std::move(m));
                }
        }
    } catch (const hall_error& e) {
        throw validation_error(std::string("graph lift step 2 (marriage): ") + e.what());
    }
    for (const auto& [key, m] : matchings) res.matchings.push_back(m);
    // steps 3-4: paths and assembly
    try {
        res.field = assemble(a.graph(), res.cover, res.piece_multisets, matchings, n);
    } catch (const validation_error& e) {
        throw validation_error(std::string("graph lift step 4 (assembly): ") + e.what());
    }
    // step 5: certification on Lambda_{n-2}
    int m = std::max(0, n - 2);
    try {
        GraphValuation beta = cu_of_unitary(res.field, n);
        if (!compare_on_lambda(beta, a, m))
            throw validation_error("lift does not compare with the input on Lambda_" +
                                   std::to_string(m));
    } catch (const validation_error& e) {
        throw validation_error(std::string("graph lift step 5 (certification): ") + e.what());
    }
    return res;
}

} // namespace culift
