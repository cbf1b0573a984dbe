#include "culift/graph_space.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

namespace culift {

// ---------------------------------------------------------------------------
// MetricGraph

void MetricGraph::validate() const {
    if (num_vertices < 0) throw validation_error("graph: negative vertex count");
    for (const auto& e : edges) {
        if (e.a < 0 || e.a >= num_vertices || e.b < 0 || e.b >= num_vertices)
            throw validation_error("graph: edge endpoint out of range");
        if (!(e.length > Rat(0))) throw validation_error("graph: edge length must be positive");
    }
}

Rat MetricGraph::total_length() const {
    Rat s(0);
    for (const auto& e : edges) s += e.length;
    return s;
}

std::vector<std::pair<int, int>> MetricGraph::incident(int v) const {
    std::vector<std::pair<int, int>> out;
    for (size_t i = 0; i < edges.size(); ++i) {
        if (edges[i].a == v) out.emplace_back(int(i), 0);
        if (edges[i].b == v) out.emplace_back(int(i), 1);
    }
    return out;
}

// ---------------------------------------------------------------------------
// GraphPoint

static GraphPoint canonical(const MetricGraph& g, GraphPoint p) {
    if (!p.at_vertex) {
        if (p.coord == Rat(0)) return GraphPoint::on_vertex(g.edges[p.edge].a);
        if (p.coord == g.edges[p.edge].length) return GraphPoint::on_vertex(g.edges[p.edge].b);
    }
    return p;
}

bool GraphPoint::operator==(const GraphPoint& o) const {
    if (at_vertex != o.at_vertex) return false;
    if (at_vertex) return vertex == o.vertex;
    return edge == o.edge && coord == o.coord;
}

std::string GraphPoint::str() const {
    if (at_vertex) return "v" + std::to_string(vertex);
    return "e" + std::to_string(edge) + "@" + coord.str();
}

// ---------------------------------------------------------------------------
// Region

Region::Region(GraphPtr gr) : g(std::move(gr)) {
    intervals.resize(g->edges.size());
    vertices.assign(size_t(g->num_vertices), false);
}

Region Region::whole(GraphPtr gr) {
    Region r(gr);
    for (size_t e = 0; e < gr->edges.size(); ++e)
        r.intervals[e].emplace_back(Rat(0), gr->edges[e].length);
    r.vertices.assign(size_t(gr->num_vertices), true);
    return r;
}

Region Region::empty_on(GraphPtr gr) { return Region(gr); }

bool Region::empty() const {
    for (const auto& iv : intervals)
        if (!iv.empty()) return false;
    for (bool v : vertices)
        if (v) return false;
    return true;
}

void Region::add_interval(int e, Rat p, Rat q) {
    Rat len = g->edges[e].length;
    if (p < Rat(0)) p = Rat(0);
    if (q > len) q = len;
    if (!(p < q)) return;
    intervals[e].emplace_back(p, q);
}

void Region::normalize() {
    for (auto& iv : intervals) {
        std::sort(iv.begin(), iv.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<std::pair<Rat, Rat>> out;
        for (auto& in : iv) {
            if (!out.empty() && in.first < out.back().second) {
                if (out.back().second < in.second) out.back().second = in.second;
            } else {
                out.push_back(in);
            }
        }
        iv = std::move(out);
    }
}

bool Region::is_open() const {
    for (int v = 0; v < g->num_vertices; ++v) {
        if (!vertices[v]) continue;
        for (auto [e, end] : g->incident(v)) {
            bool ok = false;
            for (const auto& in : intervals[e]) {
                if (end == 0 && in.first == Rat(0)) ok = true;
                if (end == 1 && in.second == g->edges[e].length) ok = true;
            }
            if (!ok) return false;
        }
    }
    return true;
}

bool Region::contains(const GraphPoint& p0) const {
    GraphPoint p = canonical(*g, p0);
    if (p.at_vertex) return vertices[p.vertex];
    for (const auto& in : intervals[p.edge])
        if (in.first < p.coord && p.coord < in.second) return true;
    return false;
}

bool Region::subset_of(const Region& o) const {
    for (int v = 0; v < g->num_vertices; ++v)
        if (vertices[v] && !o.vertices[v]) return false;
    for (size_t e = 0; e < intervals.size(); ++e) {
        for (const auto& in : intervals[e]) {
            bool covered = false;
            for (const auto& oin : o.intervals[e])
                if (oin.first <= in.first && in.second <= oin.second) { covered = true; break; }
            if (!covered) return false;
        }
    }
    return true;
}

Rat Region::measure() const {
    Rat s(0);
    for (const auto& iv : intervals)
        for (const auto& in : iv) s += in.second - in.first;
    return s;
}

std::vector<Region> Region::components() const {
    // union-find over intervals and member vertices; connections only occur
    // where an interval reaches an edge end whose vertex is a member
    struct Item { int kind; int e; int idx; int v; }; // kind 0 = interval, 1 = vertex
    std::vector<Item> items;
    std::map<std::pair<int, int>, int> interval_id;
    for (size_t e = 0; e < intervals.size(); ++e)
        for (size_t i = 0; i < intervals[e].size(); ++i) {
            interval_id[{int(e), int(i)}] = int(items.size());
            items.push_back({0, int(e), int(i), -1});
        }
    std::vector<int> vertex_id(size_t(g->num_vertices), -1);
    for (int v = 0; v < g->num_vertices; ++v)
        if (vertices[v]) {
            vertex_id[v] = int(items.size());
            items.push_back({1, -1, -1, v});
        }

    std::vector<int> parent(items.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = int(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    for (size_t e = 0; e < intervals.size(); ++e) {
        for (size_t i = 0; i < intervals[e].size(); ++i) {
            const auto& in = intervals[e][i];
            int id = interval_id[{int(e), int(i)}];
            if (in.first == Rat(0) && vertices[g->edges[e].a])
                unite(id, vertex_id[g->edges[e].a]);
            if (in.second == g->edges[e].length && vertices[g->edges[e].b])
                unite(id, vertex_id[g->edges[e].b]);
        }
    }

    std::map<int, Region> comps;
    for (size_t e = 0; e < intervals.size(); ++e)
        for (size_t i = 0; i < intervals[e].size(); ++i) {
            int root = find(interval_id[{int(e), int(i)}]);
            auto it = comps.try_emplace(root, g).first;
            it->second.intervals[e].push_back(intervals[e][i]);
        }
    for (int v = 0; v < g->num_vertices; ++v)
        if (vertices[v]) {
            int root = find(vertex_id[v]);
            auto it = comps.try_emplace(root, g).first;
            it->second.vertices[v] = true;
        }

    std::vector<Region> out;
    for (auto& [root, r] : comps) out.push_back(std::move(r));
    return out;
}

std::vector<GraphPoint> Region::boundary() const {
    std::vector<GraphPoint> out;
    std::set<int> bverts;
    for (size_t e = 0; e < intervals.size(); ++e) {
        for (const auto& in : intervals[e]) {
            if (in.first == Rat(0)) {
                if (!vertices[g->edges[e].a]) bverts.insert(g->edges[e].a);
            } else {
                out.push_back(GraphPoint::on_edge(int(e), in.first));
            }
            if (in.second == g->edges[e].length) {
                if (!vertices[g->edges[e].b]) bverts.insert(g->edges[e].b);
            } else {
                out.push_back(GraphPoint::on_edge(int(e), in.second));
            }
        }
    }
    for (int v : bverts) out.push_back(GraphPoint::on_vertex(v));
    // dedupe edge points shared by two intervals of the same edge
    std::sort(out.begin(), out.end(), [](const GraphPoint& a, const GraphPoint& b) {
        if (a.at_vertex != b.at_vertex) return a.at_vertex;
        if (a.at_vertex) return a.vertex < b.vertex;
        if (a.edge != b.edge) return a.edge < b.edge;
        return a.coord < b.coord;
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// ClosedSet

ClosedSet::ClosedSet(GraphPtr gr) : g(std::move(gr)) {
    intervals.resize(g->edges.size());
    vertices.assign(size_t(g->num_vertices), false);
}

bool ClosedSet::empty() const {
    for (const auto& iv : intervals)
        if (!iv.empty()) return false;
    for (bool v : vertices)
        if (v) return false;
    return true;
}

bool ClosedSet::contains(const GraphPoint& p0) const {
    GraphPoint p = canonical(*g, p0);
    if (p.at_vertex) return vertices[p.vertex];
    for (const auto& in : intervals[p.edge])
        if (in.first <= p.coord && p.coord <= in.second) return true;
    return false;
}

bool ClosedSet::subset_of_open(const Region& o) const {
    for (int v = 0; v < g->num_vertices; ++v)
        if (vertices[v] && !o.vertices[v]) return false;
    for (size_t e = 0; e < intervals.size(); ++e) {
        Rat len = g->edges[e].length;
        for (const auto& in : intervals[e]) {
            bool covered = false;
            for (const auto& oin : o.intervals[e]) {
                bool left_ok = oin.first < in.first ||
                               (in.first == Rat(0) && oin.first == Rat(0) &&
                                o.vertices[g->edges[e].a]);
                bool right_ok = in.second < oin.second ||
                                (in.second == len && oin.second == len &&
                                 o.vertices[g->edges[e].b]);
                if (left_ok && right_ok) { covered = true; break; }
            }
            if (!covered) return false;
        }
    }
    return true;
}

ClosedSet closure(const Region& r) {
    ClosedSet c(r.g);
    c.vertices = r.vertices;
    for (size_t e = 0; e < r.intervals.size(); ++e) {
        Rat len = r.g->edges[e].length;
        for (const auto& in : r.intervals[e]) {
            c.intervals[e].push_back(in);
            if (in.first == Rat(0)) c.vertices[r.g->edges[e].a] = true;
            if (in.second == len) c.vertices[r.g->edges[e].b] = true;
        }
    }
    return c;
}

ClosedSet complement(const Region& r) {
    ClosedSet c(r.g);
    for (int v = 0; v < r.g->num_vertices; ++v) c.vertices[v] = !r.vertices[v];
    for (size_t e = 0; e < r.intervals.size(); ++e) {
        Rat len = r.g->edges[e].length;
        Rat pos(0);
        for (const auto& in : r.intervals[e]) {
            if (pos <= in.first) c.intervals[e].emplace_back(pos, in.first);
            pos = in.second;
        }
        if (pos <= len) c.intervals[e].emplace_back(pos, len);
    }
    return c;
}

// ---------------------------------------------------------------------------
// node graph for exact shortest-path work

namespace {

struct NodeGraph {
    GraphPtr g;
    std::vector<std::vector<Rat>> cuts;     // per edge, sorted, first 0 last len
    std::vector<std::vector<int>> node_of;  // per edge, per cut position
    int num_nodes = 0;
    std::vector<std::vector<std::pair<int, Rat>>> adj;

    GraphPoint point_of(int node) const {
        if (node < g->num_vertices) return GraphPoint::on_vertex(node);
        for (size_t e = 0; e < cuts.size(); ++e)
            for (size_t i = 0; i < cuts[e].size(); ++i)
                if (node_of[e][i] == node) return GraphPoint::on_edge(int(e), cuts[e][i]);
        throw internal_error("node without a point");
    }
};

NodeGraph nodeize(GraphPtr g, const std::vector<std::vector<Rat>>& extra) {
    NodeGraph ng;
    ng.g = g;
    ng.cuts.resize(g->edges.size());
    ng.node_of.resize(g->edges.size());
    ng.num_nodes = g->num_vertices;
    for (size_t e = 0; e < g->edges.size(); ++e) {
        std::vector<Rat> cs = extra.size() > e ? extra[e] : std::vector<Rat>{};
        cs.push_back(Rat(0));
        cs.push_back(g->edges[e].length);
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        // drop positions outside [0, len]
        std::vector<Rat> kept;
        for (auto& c : cs)
            if (Rat(0) <= c && c <= g->edges[e].length) kept.push_back(c);
        ng.cuts[e] = kept;
        ng.node_of[e].resize(kept.size());
        for (size_t i = 0; i < kept.size(); ++i) {
            if (kept[i] == Rat(0)) ng.node_of[e][i] = g->edges[e].a;
            else if (kept[i] == g->edges[e].length) ng.node_of[e][i] = g->edges[e].b;
            else ng.node_of[e][i] = ng.num_nodes++;
        }
    }
    ng.adj.resize(size_t(ng.num_nodes));
    for (size_t e = 0; e < g->edges.size(); ++e) {
        for (size_t i = 0; i + 1 < ng.cuts[e].size(); ++i) {
            int u = ng.node_of[e][i], v = ng.node_of[e][i + 1];
            Rat len = ng.cuts[e][i + 1] - ng.cuts[e][i];
            ng.adj[u].emplace_back(v, len);
            ng.adj[v].emplace_back(u, len);
        }
    }
    return ng;
}

std::vector<std::optional<Rat>> dijkstra(const NodeGraph& ng, const std::vector<int>& sources) {
    std::vector<std::optional<Rat>> dist(size_t(ng.num_nodes));
    using Entry = std::pair<Rat, int>;
    auto cmp = [](const Entry& a, const Entry& b) { return b.first < a.first; };
    std::priority_queue<Entry, std::vector<Entry>, decltype(cmp)> pq(cmp);
    for (int s : sources) {
        if (!dist[s].has_value() || *dist[s] > Rat(0)) {
            dist[s] = Rat(0);
            pq.emplace(Rat(0), s);
        }
    }
    while (!pq.empty()) {
        auto [d, u] = pq.top();
        pq.pop();
        if (dist[u].has_value() && *dist[u] < d) continue;
        for (auto& [v, w] : ng.adj[u]) {
            Rat nd = d + w;
            if (!dist[v].has_value() || nd < *dist[v]) {
                dist[v] = nd;
                pq.emplace(nd, v);
            }
        }
    }
    return dist;
}

std::vector<Rat> interval_ends(const Region& r, int e) {
    std::vector<Rat> out;
    for (const auto& in : r.intervals[e]) {
        out.push_back(in.first);
        out.push_back(in.second);
    }
    return out;
}

std::vector<Rat> interval_ends(const ClosedSet& r, int e) {
    std::vector<Rat> out;
    for (const auto& in : r.intervals[e]) {
        out.push_back(in.first);
        out.push_back(in.second);
    }
    return out;
}

/// Merges per-edge interval candidates through interior points marked
/// included, producing a normalized region.
void finalize_edge(Region& r, int e, std::vector<std::pair<Rat, Rat>> pieces,
                   const std::vector<Rat>& included_pts) {
    std::sort(pieces.begin(), pieces.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<Rat, Rat>> merged;
    auto included = [&](const Rat& t) {
        for (const auto& p : included_pts)
            if (p == t) return true;
        return false;
    };
    for (auto& p : pieces) {
        if (!(p.first < p.second)) continue;
        if (!merged.empty() &&
            (p.first < merged.back().second ||
             (p.first == merged.back().second && included(p.first)))) {
            if (merged.back().second < p.second) merged.back().second = p.second;
        } else {
            merged.push_back(p);
        }
    }
    r.intervals[e] = std::move(merged);
}

} // namespace

std::optional<Rat> path_distance(const MetricGraph& g, const GraphPoint& x0, const GraphPoint& y0) {
    auto gp = std::make_shared<MetricGraph>(g);
    GraphPoint x = canonical(g, x0), y = canonical(g, y0);
    std::vector<std::vector<Rat>> extra(g.edges.size());
    if (!x.at_vertex) extra[x.edge].push_back(x.coord);
    if (!y.at_vertex) extra[y.edge].push_back(y.coord);
    NodeGraph ng = nodeize(gp, extra);
    auto node_at = [&](const GraphPoint& p) {
        if (p.at_vertex) return p.vertex;
        for (size_t i = 0; i < ng.cuts[p.edge].size(); ++i)
            if (ng.cuts[p.edge][i] == p.coord) return ng.node_of[p.edge][i];
        throw internal_error("point not nodeized");
    };
    auto dist = dijkstra(ng, {node_at(x)});
    return dist[node_at(y)];
}

std::optional<Rat> set_distance(const ClosedSet& A, const ClosedSet& B) {
    if (A.empty() || B.empty()) return std::nullopt;
    GraphPtr g = A.g;
    // direct intersection
    for (size_t e = 0; e < g->edges.size(); ++e)
        for (const auto& a : A.intervals[e])
            for (const auto& b : B.intervals[e])
                if (!(a.second < b.first || b.second < a.first)) return Rat(0);
    for (int v = 0; v < g->num_vertices; ++v) {
        if (A.vertices[v] && B.vertices[v]) return Rat(0);
        GraphPoint p = GraphPoint::on_vertex(v);
        if ((A.vertices[v] && B.contains(p)) || (B.vertices[v] && A.contains(p))) return Rat(0);
    }
    std::vector<std::vector<Rat>> extra(g->edges.size());
    for (size_t e = 0; e < g->edges.size(); ++e) {
        auto ea = interval_ends(A, int(e));
        auto eb = interval_ends(B, int(e));
        extra[e] = ea;
        extra[e].insert(extra[e].end(), eb.begin(), eb.end());
    }
    NodeGraph ng = nodeize(g, extra);
    std::vector<int> sources;
    for (int node = 0; node < ng.num_nodes; ++node)
        if (B.contains(ng.point_of(node))) sources.push_back(node);
    auto dist = dijkstra(ng, sources);
    std::optional<Rat> best;
    for (int node = 0; node < ng.num_nodes; ++node) {
        if (!A.contains(ng.point_of(node)) || !dist[node].has_value()) continue;
        if (!best.has_value() || *dist[node] < *best) best = dist[node];
    }
    return best;
}

Region thicken(const Region& u, const Rat& delta) {
    if (delta < Rat(0)) throw validation_error("thicken: negative radius");
    if (delta.is_zero() || u.empty()) return u;
    GraphPtr g = u.g;
    ClosedSet cl = closure(u);
    std::vector<std::vector<Rat>> extra(g->edges.size());
    for (size_t e = 0; e < g->edges.size(); ++e) extra[e] = interval_ends(u, int(e));
    NodeGraph ng = nodeize(g, extra);
    std::vector<int> sources;
    for (int node = 0; node < ng.num_nodes; ++node)
        if (cl.contains(ng.point_of(node))) sources.push_back(node);
    auto dist = dijkstra(ng, sources);

    Region out(g);
    for (size_t e = 0; e < g->edges.size(); ++e) {
        std::vector<std::pair<Rat, Rat>> pieces;
        std::vector<Rat> inc_pts;
        for (size_t i = 0; i + 1 < ng.cuts[e].size(); ++i) {
            Rat p = ng.cuts[e][i], q = ng.cuts[e][i + 1];
            auto du = dist[ng.node_of[e][i]], dv = dist[ng.node_of[e][i + 1]];
            GraphPoint mid = GraphPoint::on_edge(int(e), (p + q) / Rat(2));
            if (u.contains(mid)) {
                pieces.emplace_back(p, q);
                continue;
            }
            if (du.has_value() && *du < delta) pieces.emplace_back(p, p + (delta - *du));
            if (dv.has_value() && *dv < delta) pieces.emplace_back(q - (delta - *dv), q);
        }
        for (size_t i = 1; i + 1 < ng.cuts[e].size(); ++i) {
            auto d = dist[ng.node_of[e][i]];
            if (d.has_value() && *d < delta) inc_pts.push_back(ng.cuts[e][i]);
        }
        // clamp
        for (auto& pc : pieces) {
            if (pc.first < Rat(0)) pc.first = Rat(0);
            if (pc.second > g->edges[e].length) pc.second = g->edges[e].length;
        }
        finalize_edge(out, int(e), std::move(pieces), inc_pts);
    }
    for (int v = 0; v < g->num_vertices; ++v) {
        auto d = dist[v];
        out.vertices[v] = u.vertices[v] || (d.has_value() && *d < delta);
    }
    return out;
}

Region int_delta(const Region& u, const Rat& delta) {
    if (!(delta > Rat(0))) throw validation_error("int_delta: radius must be positive");
    GraphPtr g = u.g;
    ClosedSet comp = complement(u);
    Region out(g);
    if (comp.empty()) return u; // whole graph: every ball stays inside
    std::vector<std::vector<Rat>> extra(g->edges.size());
    for (size_t e = 0; e < g->edges.size(); ++e) extra[e] = interval_ends(u, int(e));
    NodeGraph ng = nodeize(g, extra);
    std::vector<int> sources;
    for (int node = 0; node < ng.num_nodes; ++node)
        if (comp.contains(ng.point_of(node))) sources.push_back(node);
    auto dist = dijkstra(ng, sources);
    auto above = [&](int node) {
        return !dist[node].has_value() || *dist[node] > delta;
    };

    for (size_t e = 0; e < g->edges.size(); ++e) {
        std::vector<std::pair<Rat, Rat>> pieces;
        std::vector<Rat> inc_pts;
        for (size_t i = 0; i + 1 < ng.cuts[e].size(); ++i) {
            Rat p = ng.cuts[e][i], q = ng.cuts[e][i + 1];
            GraphPoint mid = GraphPoint::on_edge(int(e), (p + q) / Rat(2));
            if (!u.contains(mid)) continue; // d = 0 inside the complement
            auto du = dist[ng.node_of[e][i]], dv = dist[ng.node_of[e][i + 1]];
            Rat lo = p, hi = q;
            if (du.has_value() && *du <= delta) lo = p + (delta - *du);
            if (dv.has_value() && *dv <= delta) hi = q - (delta - *dv);
            if (lo < hi) pieces.emplace_back(lo, hi);
        }
        for (size_t i = 1; i + 1 < ng.cuts[e].size(); ++i)
            if (above(ng.node_of[e][i])) inc_pts.push_back(ng.cuts[e][i]);
        finalize_edge(out, int(e), std::move(pieces), inc_pts);
    }
    for (int v = 0; v < g->num_vertices; ++v) out.vertices[v] = u.vertices[v] && above(v);
    return out;
}

// ---------------------------------------------------------------------------
// GraphLsc

GraphLsc::GraphLsc(GraphPtr gr) : g(std::move(gr)) {
    edges.resize(g->edges.size());
    for (size_t e = 0; e < edges.size(); ++e) {
        edges[e].cuts = {Rat(0), g->edges[e].length};
        edges[e].iv = {ExtNat(0)};
    }
    vertex_values.assign(size_t(g->num_vertices), ExtNat(0));
}

GraphLsc GraphLsc::constant(GraphPtr gr, ExtNat v) {
    GraphLsc f(gr);
    for (auto& ef : f.edges) ef.iv[0] = v;
    for (auto& vv : f.vertex_values) vv = v;
    return f;
}

void GraphLsc::validate() const {
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto& ef = edges[e];
        if (ef.cuts.size() < 2 || ef.cuts.front() != Rat(0) ||
            ef.cuts.back() != g->edges[e].length)
            throw validation_error("GraphLsc: bad cut list on edge " + std::to_string(e));
        for (size_t i = 0; i + 1 < ef.cuts.size(); ++i)
            if (!(ef.cuts[i] < ef.cuts[i + 1]))
                throw validation_error("GraphLsc: cuts not increasing on edge " + std::to_string(e));
        if (ef.iv.size() != ef.cuts.size() - 1 || ef.bv.size() != ef.cuts.size() - 2)
            throw validation_error("GraphLsc: value counts on edge " + std::to_string(e));
        for (size_t i = 0; i < ef.bv.size(); ++i)
            if (ef.bv[i] > ef.iv[i] || ef.bv[i] > ef.iv[i + 1])
                throw validation_error("GraphLsc: semicontinuity fails at interior breakpoint");
    }
    for (int v = 0; v < g->num_vertices; ++v)
        for (auto [e, end] : g->incident(v)) {
            ExtNat adj = end == 0 ? edges[e].iv.front() : edges[e].iv.back();
            if (vertex_values[v] > adj)
                throw validation_error("GraphLsc: semicontinuity fails at vertex " +
                                       std::to_string(v));
        }
}

ExtNat GraphLsc::at(const GraphPoint& p0) const {
    GraphPoint p = canonical(*g, p0);
    if (p.at_vertex) return vertex_values[p.vertex];
    const auto& ef = edges[p.edge];
    // first cut strictly above the coordinate
    auto it = std::upper_bound(ef.cuts.begin(), ef.cuts.end(), p.coord);
    if (it == ef.cuts.begin() || it == ef.cuts.end())
        throw internal_error("GraphLsc::at: point outside edge range");
    size_t i = size_t(it - ef.cuts.begin()) - 1;
    if (ef.cuts[i] == p.coord) return ef.bv[i - 1]; // interior breakpoint
    return ef.iv[i];
}

ExtNat GraphLsc::max() const {
    ExtNat m(0);
    for (const auto& ef : edges) {
        for (auto v : ef.iv) if (v > m) m = v;
        for (auto v : ef.bv) if (v > m) m = v;
    }
    for (auto v : vertex_values) if (v > m) m = v;
    return m;
}

bool GraphLsc::attains_inf() const {
    for (const auto& ef : edges) {
        for (auto v : ef.iv) if (v.is_inf()) return true;
        for (auto v : ef.bv) if (v.is_inf()) return true;
    }
    for (auto v : vertex_values) if (v.is_inf()) return true;
    return false;
}

Region GraphLsc::level_set(ExtNat l) const {
    Region r(g);
    for (size_t e = 0; e < edges.size(); ++e) {
        const auto& ef = edges[e];
        std::vector<std::pair<Rat, Rat>> pieces;
        std::vector<Rat> inc;
        for (size_t i = 0; i + 1 < ef.cuts.size(); ++i)
            if (ef.iv[i] >= l) pieces.emplace_back(ef.cuts[i], ef.cuts[i + 1]);
        for (size_t i = 0; i < ef.bv.size(); ++i)
            if (ef.bv[i] >= l) inc.push_back(ef.cuts[i + 1]);
        finalize_edge(r, int(e), std::move(pieces), inc);
    }
    for (int v = 0; v < g->num_vertices; ++v) r.vertices[v] = vertex_values[v] >= l;
    return r;
}

void GraphLsc::cut_at(int e, const Rat& t) {
    auto& ef = edges[e];
    if (!(Rat(0) < t && t < g->edges[e].length)) return;
    for (size_t i = 0; i < ef.cuts.size(); ++i) {
        if (ef.cuts[i] == t) return;
        if (ef.cuts[i] > t) {
            ExtNat val = ef.iv[i - 1]; // value of the interval being split
            ef.cuts.insert(ef.cuts.begin() + i, t);
            ef.iv.insert(ef.iv.begin() + i, val);
            ef.bv.insert(ef.bv.begin() + (i - 1), val);
            return;
        }
    }
}

void GraphLsc::align(GraphLsc& a, GraphLsc& b) {
    for (size_t e = 0; e < a.edges.size(); ++e) {
        for (const Rat& t : b.edges[e].cuts) a.cut_at(int(e), t);
        for (const Rat& t : a.edges[e].cuts) b.cut_at(int(e), t);
    }
}

GraphLsc GraphLsc::plus(const GraphLsc& o) const {
    GraphLsc a = *this, b = o;
    align(a, b);
    for (size_t e = 0; e < a.edges.size(); ++e) {
        for (size_t i = 0; i < a.edges[e].iv.size(); ++i) a.edges[e].iv[i] += b.edges[e].iv[i];
        for (size_t i = 0; i < a.edges[e].bv.size(); ++i) a.edges[e].bv[i] += b.edges[e].bv[i];
    }
    for (int v = 0; v < g->num_vertices; ++v) a.vertex_values[v] += b.vertex_values[v];
    return a;
}

bool GraphLsc::leq(const GraphLsc& o) const {
    GraphLsc a = *this, b = o;
    align(a, b);
    for (size_t e = 0; e < a.edges.size(); ++e) {
        for (size_t i = 0; i < a.edges[e].iv.size(); ++i)
            if (a.edges[e].iv[i] > b.edges[e].iv[i]) return false;
        for (size_t i = 0; i < a.edges[e].bv.size(); ++i)
            if (a.edges[e].bv[i] > b.edges[e].bv[i]) return false;
    }
    for (int v = 0; v < g->num_vertices; ++v)
        if (a.vertex_values[v] > b.vertex_values[v]) return false;
    return true;
}

bool GraphLsc::operator==(const GraphLsc& o) const { return leq(o) && o.leq(*this); }

std::vector<GraphLsc> chain_decomposition(const GraphLsc& f) {
    if (f.attains_inf())
        throw validation_error("chain decomposition: function attains infinity");
    std::vector<GraphLsc> out;
    unsigned long long m = f.max().value();
    for (unsigned long long l = 1; l <= m; ++l) {
        Region w = f.level_set(ExtNat(l));
        GraphLsc ind(f.g);
        for (size_t e = 0; e < ind.edges.size(); ++e) {
            auto& ef = ind.edges[e];
            ef.cuts = {Rat(0)};
            ef.iv.clear();
            ef.bv.clear();
            std::vector<Rat> marks;
            for (const auto& in : w.intervals[e]) {
                if (in.first > Rat(0)) marks.push_back(in.first);
                if (in.second < f.g->edges[e].length) marks.push_back(in.second);
            }
            std::sort(marks.begin(), marks.end());
            marks.erase(std::unique(marks.begin(), marks.end()), marks.end());
            for (const Rat& t : marks) ef.cuts.push_back(t);
            ef.cuts.push_back(f.g->edges[e].length);
            for (size_t i = 0; i + 1 < ef.cuts.size(); ++i) {
                GraphPoint mid = GraphPoint::on_edge(int(e), (ef.cuts[i] + ef.cuts[i + 1]) / Rat(2));
                ef.iv.push_back(ExtNat(w.contains(mid) ? 1 : 0));
            }
            for (size_t i = 1; i + 1 < ef.cuts.size(); ++i)
                ef.bv.push_back(ExtNat(w.contains(GraphPoint::on_edge(int(e), ef.cuts[i])) ? 1 : 0));
        }
        for (int v = 0; v < f.g->num_vertices; ++v)
            ind.vertex_values[v] = ExtNat(w.vertices[v] ? 1 : 0);
        out.push_back(std::move(ind));
    }
    return out;
}

// ---------------------------------------------------------------------------
// cut

ClosedCover cut(GraphPtr g, const std::vector<GraphLsc>& fs) {
    for (const auto& f : fs)
        if (f.attains_inf())
            throw validation_error("cut: tracked function attains infinity");

    // common refinement of all breakpoint sets
    std::vector<std::vector<Rat>> cuts(g->edges.size());
    for (size_t e = 0; e < g->edges.size(); ++e) {
        std::vector<Rat> cs = {Rat(0), g->edges[e].length};
        for (const auto& f : fs)
            for (const Rat& t : f.edges[e].cuts) cs.push_back(t);
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
        cuts[e] = cs;
    }

    // atoms: intervals, interior breakpoints, vertices
    struct Atom {
        int kind;   // 0 interval, 1 breakpoint, 2 vertex
        int e;
        int i;      // interval index / breakpoint cut index
        int v;
        std::vector<ExtNat> profile;
    };
    std::vector<Atom> atoms;
    std::vector<std::vector<int>> interval_atom(g->edges.size());
    std::vector<std::vector<int>> bp_atom(g->edges.size());
    std::vector<int> vertex_atom(size_t(g->num_vertices));
    auto profile_at = [&](const GraphPoint& p) {
        std::vector<ExtNat> pr;
        pr.reserve(fs.size());
        for (const auto& f : fs) pr.push_back(f.at(p));
        return pr;
    };
    for (size_t e = 0; e < g->edges.size(); ++e) {
        interval_atom[e].resize(cuts[e].size() - 1);
        bp_atom[e].assign(cuts[e].size(), -1);
        for (size_t i = 0; i + 1 < cuts[e].size(); ++i) {
            GraphPoint mid = GraphPoint::on_edge(int(e), (cuts[e][i] + cuts[e][i + 1]) / Rat(2));
            interval_atom[e][i] = int(atoms.size());
            atoms.push_back({0, int(e), int(i), -1, profile_at(mid)});
        }
        for (size_t i = 1; i + 1 < cuts[e].size(); ++i) {
            bp_atom[e][i] = int(atoms.size());
            atoms.push_back({1, int(e), int(i), -1,
                             profile_at(GraphPoint::on_edge(int(e), cuts[e][i]))});
        }
    }
    for (int v = 0; v < g->num_vertices; ++v) {
        vertex_atom[v] = int(atoms.size());
        atoms.push_back({2, -1, -1, v, profile_at(GraphPoint::on_vertex(v))});
    }

    std::vector<int> parent(atoms.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = int(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](int a, int b) { parent[find(a)] = find(b); };

    std::vector<bool> merged_pt(atoms.size(), false);
    for (size_t e = 0; e < g->edges.size(); ++e)
        for (size_t i = 1; i + 1 < cuts[e].size(); ++i) {
            int bp = bp_atom[e][i];
            int left = interval_atom[e][i - 1], right = interval_atom[e][i];
            if (atoms[bp].profile == atoms[left].profile &&
                atoms[bp].profile == atoms[right].profile) {
                unite(bp, left);
                unite(bp, right);
                merged_pt[bp] = true;
            }
        }
    for (int v = 0; v < g->num_vertices; ++v) {
        auto inc = g->incident(v);
        if (inc.empty()) { merged_pt[vertex_atom[v]] = true; continue; } // isolated: a sink piece
        bool all_match = true;
        for (auto [e, end] : inc) {
            int ia = end == 0 ? interval_atom[e].front() : interval_atom[e].back();
            if (atoms[ia].profile != atoms[vertex_atom[v]].profile) { all_match = false; break; }
        }
        if (all_match) {
            for (auto [e, end] : inc)
                unite(vertex_atom[v], end == 0 ? interval_atom[e].front() : interval_atom[e].back());
            merged_pt[vertex_atom[v]] = true;
        }
    }

    // pieces = components containing interval atoms or isolated vertices
    std::map<int, int> piece_of_root;
    ClosedCover cover;
    cover.g = g;
    auto piece_index = [&](int root, const std::vector<ExtNat>& profile) {
        auto it = piece_of_root.find(root);
        if (it != piece_of_root.end()) return it->second;
        Piece p;
        p.interior = Region(g);
        p.profile = profile;
        piece_of_root[root] = int(cover.pieces.size());
        cover.pieces.push_back(std::move(p));
        return int(cover.pieces.size()) - 1;
    };
    for (size_t e = 0; e < g->edges.size(); ++e) {
        for (size_t i = 0; i + 1 < cuts[e].size(); ++i) {
            int a = interval_atom[e][i];
            int pi = piece_index(find(a), atoms[a].profile);
            cover.pieces[pi].interior.add_interval(int(e), cuts[e][i], cuts[e][i + 1]);
        }
    }
    for (int v = 0; v < g->num_vertices; ++v) {
        if (!merged_pt[vertex_atom[v]]) continue;
        int pi = piece_index(find(vertex_atom[v]), atoms[vertex_atom[v]].profile);
        cover.pieces[pi].interior.vertices[v] = true;
    }
    // merge interval pieces through merged breakpoints
    for (size_t pi = 0; pi < cover.pieces.size(); ++pi) {
        Piece& p = cover.pieces[pi];
        for (size_t e = 0; e < g->edges.size(); ++e) {
            std::vector<Rat> inc;
            for (size_t i = 1; i + 1 < cuts[e].size(); ++i) {
                int bp = bp_atom[e][i];
                if (merged_pt[bp] && piece_of_root.count(find(bp)) &&
                    piece_of_root[find(bp)] == int(pi))
                    inc.push_back(cuts[e][i]);
            }
            finalize_edge(p.interior, int(e), std::move(p.interior.intervals[e]), inc);
        }
    }

    // singular points and germs
    auto piece_of_atom = [&](int a) { return piece_of_root.at(find(a)); };
    for (size_t e = 0; e < g->edges.size(); ++e)
        for (size_t i = 1; i + 1 < cuts[e].size(); ++i) {
            int bp = bp_atom[e][i];
            if (merged_pt[bp]) continue;
            SingularPoint sp;
            sp.point = GraphPoint::on_edge(int(e), cuts[e][i]);
            sp.germs.push_back({int(e), false, piece_of_atom(interval_atom[e][i - 1]),
                                cuts[e][i] - cuts[e][i - 1]});
            sp.germs.push_back({int(e), true, piece_of_atom(interval_atom[e][i]),
                                cuts[e][i + 1] - cuts[e][i]});
            cover.singular.push_back(std::move(sp));
        }
    for (int v = 0; v < g->num_vertices; ++v) {
        if (merged_pt[vertex_atom[v]]) continue;
        SingularPoint sp;
        sp.point = GraphPoint::on_vertex(v);
        for (auto [e, end] : g->incident(v)) {
            int ia = end == 0 ? interval_atom[e].front() : interval_atom[e].back();
            size_t last = cuts[e].size() - 1;
            Rat reach = end == 0 ? cuts[e][1] - cuts[e][0] : cuts[e][last] - cuts[e][last - 1];
            sp.germs.push_back({e, end == 0, piece_of_atom(ia), reach});
        }
        cover.singular.push_back(std::move(sp));
    }
    for (const auto& sp : cover.singular)
        for (const auto& grm : sp.germs) {
            auto& bps = cover.pieces[grm.piece].boundary_points;
            bool seen = false;
            for (const auto& q : bps)
                if (q == sp.point) { seen = true; break; }
            if (!seen) bps.push_back(sp.point);
        }
    return cover;
}

Rat glue_delta(const GraphLsc& f, const GraphLsc& gfun, unsigned long long level, const Region& u) {
    Region w = f.level_set(ExtNat(level));
    Region z = gfun.level_set(ExtNat(level));
    if (!u.subset_of(w))
        throw validation_error("glue_delta: region not inside the level set of f");
    if (!closure(w).subset_of_open(z))
        throw validation_error("glue_delta: closure(W_l) not contained in Z_l");
    ClosedSet comp = complement(z);
    Rat bound = u.g->total_length() + Rat(1);
    if (comp.empty()) return bound;
    auto d = set_distance(closure(u), comp);
    Rat delta = d.has_value() ? *d : bound;
    if (!thicken(u, delta).subset_of(z))
        throw internal_error("glue_delta: thickened region escapes the level set");
    return delta;
}

} // namespace culift
