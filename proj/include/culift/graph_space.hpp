#pragma once

#include "culift/rational.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace culift {

/// A compact metric graph: finitely many vertices, edges with positive
/// rational lengths carrying a coordinate [0, length]. Loops, multi-edges
/// and isolated vertices are all allowed; isolated vertices model sinks.
struct MetricGraph {
    struct Edge {
        int a = 0;
        int b = 0;
        Rat length;
    };

    int num_vertices = 0;
    std::vector<Edge> edges;

    void validate() const;
    Rat total_length() const;
    /// (edge index, end) pairs at a vertex; end 0 means coordinate 0.
    std::vector<std::pair<int, int>> incident(int v) const;
    int degree(int v) const { return int(incident(v).size()); }
};

using GraphPtr = std::shared_ptr<const MetricGraph>;

/// A point of the graph: either a vertex or an interior point of an edge.
struct GraphPoint {
    bool at_vertex = true;
    int vertex = 0;
    int edge = 0;
    Rat coord;

    static GraphPoint on_vertex(int v) { GraphPoint p; p.at_vertex = true; p.vertex = v; return p; }
    static GraphPoint on_edge(int e, Rat c) {
        GraphPoint p; p.at_vertex = false; p.edge = e; p.coord = c; return p;
    }
    bool operator==(const GraphPoint& o) const;
    std::string str() const;
};

/// An open subset of a metric graph: disjoint open intervals per edge plus a
/// vertex membership set. Openness at a vertex requires every incident edge
/// end to be covered by an interval reaching that end.
struct Region {
    GraphPtr g;
    std::vector<std::vector<std::pair<Rat, Rat>>> intervals; // per edge, sorted, disjoint
    std::vector<bool> vertices;

    explicit Region(GraphPtr gr);
    Region() = default;

    static Region whole(GraphPtr gr);
    static Region empty_on(GraphPtr gr);

    bool empty() const;
    void add_interval(int e, Rat p, Rat q); // clamps, ignores degenerate
    void normalize();                       // sort + merge overlapping/vertex-joined
    bool is_open() const;
    bool contains(const GraphPoint& p) const;
    bool subset_of(const Region& o) const;
    Rat measure() const;

    /// Connected components (as Regions).
    std::vector<Region> components() const;

    /// Boundary points of the region (closure minus interior).
    std::vector<GraphPoint> boundary() const;
};

/// A closed subset: closed intervals per edge plus vertices.
struct ClosedSet {
    GraphPtr g;
    std::vector<std::vector<std::pair<Rat, Rat>>> intervals; // closed [p,q], p <= q allowed equal
    std::vector<bool> vertices;

    explicit ClosedSet(GraphPtr gr);
    ClosedSet() = default;

    bool empty() const;
    bool contains(const GraphPoint& p) const;
    bool subset_of_open(const Region& o) const;
};

ClosedSet closure(const Region& r);
ClosedSet complement(const Region& r);

/// Shortest path distance between points (path metric; infinity across
/// components is reported as std::nullopt).
std::optional<Rat> path_distance(const MetricGraph& g, const GraphPoint& x, const GraphPoint& y);

/// min over a in A, b in B of the path distance; nullopt if no path.
std::optional<Rat> set_distance(const ClosedSet& A, const ClosedSet& B);

/// Open metric thickening U_delta = union of open delta-balls over U.
Region thicken(const Region& u, const Rat& delta);

/// Largest open V inside U with thicken(V, delta) contained in U. The
/// identity thicken(int_delta(U, delta), delta) == U holds whenever every
/// component of U is wider than 2*delta; the operation reports vacuity
/// through the returned region being empty.
Region int_delta(const Region& u, const Rat& delta);

/// Piecewise-constant N-bar valued function on the graph, lower
/// semicontinuous: per edge an interval partition with values, values at
/// interior breakpoints and at vertices. Breakpoint/vertex values never
/// exceed the adjacent interval values.
struct GraphLsc {
    struct EdgeFn {
        std::vector<Rat> cuts;   // 0 = cuts[0] < ... < cuts[m] = length
        std::vector<ExtNat> iv;  // values on (cuts[i], cuts[i+1]), size m
        std::vector<ExtNat> bv;  // values at cuts[1..m-1], size m-1
    };

    GraphPtr g;
    std::vector<EdgeFn> edges;
    std::vector<ExtNat> vertex_values;

    explicit GraphLsc(GraphPtr gr); // the zero function
    GraphLsc() = default;

    static GraphLsc constant(GraphPtr gr, ExtNat v);

    void validate() const;
    ExtNat at(const GraphPoint& p) const;
    ExtNat max() const;
    bool attains_inf() const;

    Region level_set(ExtNat l) const; // {f >= l}, open by lsc

    GraphLsc plus(const GraphLsc& o) const;
    bool leq(const GraphLsc& o) const;
    bool operator==(const GraphLsc& o) const;

    /// Insert a breakpoint (no-op when already present).
    void cut_at(int e, const Rat& t);
    /// Common refinement of breakpoint sets, in place on both.
    static void align(GraphLsc& a, GraphLsc& b);
};

std::vector<GraphLsc> chain_decomposition(const GraphLsc& f);

/// One piece of the maximal constant cover: a connected open region where
/// every tracked function is constant, with the value profile and the
/// adjacent singular points.
struct Piece {
    Region interior;
    std::vector<ExtNat> profile; // one value per tracked function
    std::vector<GraphPoint> boundary_points;
};

/// A singular point with its outgoing germs: for each direction out of the
/// point, the edge, the orientation, and the piece the germ leads into.
struct SingularPoint {
    GraphPoint point;
    struct Germ {
        int edge;
        bool increasing;   // germ direction of growing coordinate
        int piece;         // index into ClosedCover::pieces
        Rat reach;         // length of the atom interval the germ enters
    };
    std::vector<Germ> germs;
};

struct ClosedCover {
    GraphPtr g;
    std::vector<Piece> pieces;
    std::vector<SingularPoint> singular;
};

/// Maximal constant cover: the common refinement of the level
/// structure of all fs. Every f must be finite-valued.
ClosedCover cut(GraphPtr g, const std::vector<GraphLsc>& fs);

/// Largest delta with thicken(U, delta) inside the l-th level set of g with
/// f << g certified first; equals the path distance from closure(U) to the
/// complement of {g >= l}. When the complement is empty the graph's total
/// length is returned as the representable bound.
Rat glue_delta(const GraphLsc& f, const GraphLsc& gfun, unsigned long long level, const Region& u);

} // namespace culift
