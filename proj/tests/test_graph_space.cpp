#include "culift/graph_space.hpp"
#include "generators.hpp"

#include <doctest.h>

using namespace culift;

namespace {

GraphLsc half_indicator(GraphPtr g) {
    // indicator of the half-open left half [0, 1/2) of edge 0: the left
    // vertex carries the interval value, so the only profile change is at
    // the midpoint
    GraphLsc f(g);
    f.edges[0].cuts = {Rat(0), Rat(1, 2), g->edges[0].length};
    f.edges[0].iv = {ExtNat(1), ExtNat(0)};
    f.edges[0].bv = {ExtNat(0)};
    f.vertex_values[0] = ExtNat(1);
    f.validate();
    return f;
}

} // namespace

TEST_CASE("regions normalize, measure and test containment") {
    GraphPtr g = gen::interval_graph();
    Region r(g);
    r.add_interval(0, Rat(1, 4), Rat(1, 2));
    r.add_interval(0, Rat(3, 8), Rat(3, 4));
    r.normalize();
    CHECK(r.intervals[0].size() == 1);
    CHECK(r.measure() == Rat(1, 2));
    CHECK(r.contains(GraphPoint::on_edge(0, Rat(1, 2))));
    CHECK_FALSE(r.contains(GraphPoint::on_edge(0, Rat(1, 8))));
    CHECK_FALSE(r.contains(GraphPoint::on_vertex(0)));
    CHECK(r.subset_of(Region::whole(g)));
}

TEST_CASE("path distance on the theta graph uses the shortest route") {
    GraphPtr g = gen::theta_graph();
    auto d = path_distance(*g, GraphPoint::on_edge(0, Rat(1, 4)), GraphPoint::on_edge(1, Rat(1, 4)));
    REQUIRE(d.has_value());
    CHECK(*d == Rat(1, 2)); // through vertex 0
    auto d2 = path_distance(*g, GraphPoint::on_edge(0, Rat(1, 4)), GraphPoint::on_edge(1, Rat(3, 4)));
    REQUIRE(d2.has_value());
    CHECK(*d2 == Rat(1)); // both routes cost 1/4 + 3/4
    auto d3 = path_distance(*g, GraphPoint::on_vertex(0), GraphPoint::on_vertex(1));
    REQUIRE(d3.has_value());
    CHECK(*d3 == Rat(1));
}

TEST_CASE("graph lsc validation and level sets") {
    GraphPtr g = gen::interval_graph();
    GraphLsc f = half_indicator(g);
    CHECK(f.at(GraphPoint::on_edge(0, Rat(1, 4))) == ExtNat(1));
    CHECK(f.at(GraphPoint::on_edge(0, Rat(1, 2))) == ExtNat(0));
    Region w = f.level_set(ExtNat(1));
    CHECK(w.measure() == Rat(1, 2));
    CHECK(w.vertices[0]);
    CHECK_FALSE(w.vertices[1]);

    GraphLsc bad(g);
    bad.edges[0].cuts = {Rat(0), Rat(1, 2), Rat(1)};
    bad.edges[0].iv = {ExtNat(0), ExtNat(0)};
    bad.edges[0].bv = {ExtNat(1)}; // breakpoint above both neighbours
    CHECK_THROWS_AS(bad.validate(), validation_error);
}

TEST_CASE("thicken and int_delta are inverse on wide regions") {
    GraphPtr g = gen::interval_graph();
    Region u(g);
    u.add_interval(0, Rat(1, 4), Rat(1)); // reaches vertex 1
    u.vertices[1] = true;
    u.normalize();
    REQUIRE(u.is_open());
    SUBCASE("interval shrink") {
        Region v = int_delta(u, Rat(1, 8));
        REQUIRE(v.intervals[0].size() == 1);
        CHECK(v.intervals[0][0] == std::make_pair(Rat(3, 8), Rat(1)));
        CHECK(v.vertices[1]); // far from the complement
        Region back = thicken(v, Rat(1, 8));
        CHECK(back.subset_of(u));
        CHECK(u.subset_of(back));
    }
    SUBCASE("thin region collapses and the identity is vacuous") {
        Region thin(g);
        thin.add_interval(0, Rat(1, 4), Rat(1, 2));
        thin.normalize();
        CHECK(int_delta(thin, Rat(1, 4)).empty());
    }
    SUBCASE("whole graph is a fixed point") {
        Region w = Region::whole(g);
        Region v = int_delta(w, Rat(1, 4));
        CHECK(v.subset_of(w));
        CHECK(w.subset_of(v));
    }
    SUBCASE("int_delta always shrinks") {
        Region v = int_delta(u, Rat(1, 16));
        CHECK(v.subset_of(u));
    }
    SUBCASE("the open unit edge shrinks to its middle half") {
        Region open_edge(g);
        open_edge.add_interval(0, Rat(0), Rat(1));
        open_edge.normalize(); // vertices excluded: the complement is the endpoints
        Region v = int_delta(open_edge, Rat(1, 4));
        REQUIRE(v.intervals[0].size() == 1);
        CHECK(v.intervals[0][0] == std::make_pair(Rat(1, 4), Rat(3, 4)));
    }
}

TEST_CASE("int_delta across a vertex uses the path metric") {
    // star with three unit arms; region covers the star minus the arm tips
    auto g = std::make_shared<MetricGraph>();
    g->num_vertices = 4;
    g->edges.push_back({0, 1, Rat(1)});
    g->edges.push_back({0, 2, Rat(1)});
    g->edges.push_back({0, 3, Rat(1)});
    g->validate();
    GraphPtr gp(g);
    Region u(gp);
    for (int e = 0; e < 3; ++e) u.add_interval(e, Rat(0), Rat(3, 4));
    u.vertices[0] = true;
    u.normalize();
    REQUIRE(u.is_open());
    Region v = int_delta(u, Rat(1, 4));
    CHECK(v.vertices[0]); // centre keeps distance 3/4 to the complement
    for (int e = 0; e < 3; ++e) {
        REQUIRE(v.intervals[e].size() == 1);
        CHECK(v.intervals[e][0] == std::make_pair(Rat(0), Rat(1, 2)));
    }
    Region back = thicken(v, Rat(1, 4));
    CHECK(back.subset_of(u));
    CHECK(u.subset_of(back));
}

TEST_CASE("cut produces the maximal constant cover") {
    GraphPtr g = gen::interval_graph();
    SUBCASE("single constant function gives one piece") {
        ClosedCover cover = cut(g, {GraphLsc::constant(g, ExtNat(2))});
        CHECK(cover.pieces.size() == 1);
        CHECK(cover.singular.empty());
        CHECK(cover.pieces[0].interior.vertices[0]);
        CHECK(cover.pieces[0].interior.vertices[1]);
    }
    SUBCASE("half indicator gives two pieces meeting at the midpoint") {
        ClosedCover cover = cut(g, {half_indicator(g)});
        CHECK(cover.pieces.size() == 2);
        REQUIRE(cover.singular.size() == 1);
        CHECK(cover.singular[0].point == GraphPoint::on_edge(0, Rat(1, 2)));
        CHECK(cover.singular[0].germs.size() == 2);
        bool saw0 = false, saw1 = false;
        for (const auto& p : cover.pieces) {
            if (p.profile[0] == ExtNat(0)) saw0 = true;
            if (p.profile[0] == ExtNat(1)) saw1 = true;
        }
        CHECK(saw0);
        CHECK(saw1);
    }
    SUBCASE("cut is idempotent") {
        GraphLsc f = half_indicator(g);
        ClosedCover c1 = cut(g, {f});
        ClosedCover c2 = cut(g, {f});
        REQUIRE(c1.pieces.size() == c2.pieces.size());
        for (size_t i = 0; i < c1.pieces.size(); ++i) {
            CHECK(c1.pieces[i].interior.subset_of(c2.pieces[i].interior));
            CHECK(c2.pieces[i].interior.subset_of(c1.pieces[i].interior));
        }
    }
    SUBCASE("piece count bounded by the profile product") {
        GraphLsc f = half_indicator(g);
        GraphLsc h(g);
        h.edges[0].cuts = {Rat(0), Rat(1, 4), Rat(1)};
        h.edges[0].iv = {ExtNat(0), ExtNat(1)};
        h.edges[0].bv = {ExtNat(0)};
        h.vertex_values[1] = ExtNat(1);
        h.validate();
        ClosedCover cover = cut(g, {f, h});
        CHECK(cover.pieces.size() <= 4); // card(L) = 2 * 2
        CHECK(cover.pieces.size() == 3);
    }
    SUBCASE("infinite tracked functions are rejected") {
        CHECK_THROWS_AS(cut(g, {GraphLsc::constant(g, ExtNat::inf())}), validation_error);
    }
}

TEST_CASE("isolated vertices become sink pieces") {
    auto g = std::make_shared<MetricGraph>();
    g->num_vertices = 3;
    g->edges.push_back({0, 1, Rat(1)});
    g->validate();
    GraphPtr gp(g);
    ClosedCover cover = cut(gp, {GraphLsc::constant(gp, ExtNat(1))});
    CHECK(cover.pieces.size() == 2); // the edge component and the lone vertex
    bool saw_sink = false;
    for (const auto& p : cover.pieces)
        if (p.interior.measure().is_zero() && p.interior.vertices[2]) saw_sink = true;
    CHECK(saw_sink);
}

TEST_CASE("glue delta is the distance to the complement") {
    GraphPtr g = gen::interval_graph();
    // f = indicator of (1/4, 1/2), z = indicator of (0, 3/4) with the left
    // vertex included; closure(W_1) inside Z_1
    GraphLsc f(g);
    f.edges[0].cuts = {Rat(0), Rat(1, 4), Rat(1, 2), Rat(1)};
    f.edges[0].iv = {ExtNat(0), ExtNat(1), ExtNat(0)};
    f.edges[0].bv = {ExtNat(0), ExtNat(0)};
    f.validate();
    GraphLsc z(g);
    z.edges[0].cuts = {Rat(0), Rat(3, 4), Rat(1)};
    z.edges[0].iv = {ExtNat(1), ExtNat(0)};
    z.edges[0].bv = {ExtNat(0)};
    z.vertex_values[0] = ExtNat(1);
    z.validate();
    Region u = f.level_set(ExtNat(1));
    Rat delta = glue_delta(f, z, 1, u);
    CHECK(delta == Rat(1, 4));
    CHECK(thicken(u, delta).subset_of(z.level_set(ExtNat(1))));
    SUBCASE("monotone in the target level set") {
        GraphLsc z2(g);
        z2.edges[0].cuts = {Rat(0), Rat(7, 8), Rat(1)};
        z2.edges[0].iv = {ExtNat(1), ExtNat(0)};
        z2.edges[0].bv = {ExtNat(0)};
        z2.vertex_values[0] = ExtNat(1);
        z2.validate();
        CHECK(glue_delta(f, z2, 1, u) >= delta);
    }
    SUBCASE("empty complement reports the representable bound") {
        GraphLsc full = GraphLsc::constant(g, ExtNat(1));
        CHECK(glue_delta(f, full, 1, u) > Rat(1));
    }
    SUBCASE("containment precondition enforced") {
        GraphLsc narrow(g);
        narrow.edges[0].cuts = {Rat(0), Rat(1, 2), Rat(1)};
        narrow.edges[0].iv = {ExtNat(1), ExtNat(0)};
        narrow.edges[0].bv = {ExtNat(0)};
        narrow.vertex_values[0] = ExtNat(1);
        narrow.validate();
        CHECK_THROWS_AS(glue_delta(f, narrow, 1, u), validation_error);
    }
}

TEST_CASE("chain decomposition on graphs reconstructs") {
    GraphPtr g = gen::circle_graph();
    GraphLsc f(g);
    f.edges[0].cuts = {Rat(0), Rat(1, 4), Rat(3, 4), Rat(1)};
    f.edges[0].iv = {ExtNat(2), ExtNat(1), ExtNat(0)};
    f.edges[0].bv = {ExtNat(1), ExtNat(0)};
    f.vertex_values[0] = ExtNat(0);
    f.validate();
    auto parts = chain_decomposition(f);
    REQUIRE(parts.size() == 2);
    GraphLsc sum(g);
    for (const auto& p : parts) sum = sum.plus(p);
    CHECK(sum == f);
}
