#include "culift/json_io.hpp"
#include "culift/spectral.hpp"
#include "generators.hpp"

#include <doctest.h>

using namespace culift;
using io::json;

TEST_CASE("rationals and extended naturals round trip as strings") {
    CHECK(io::rat_from(io::rat_json(Rat(3, 8)), "t") == Rat(3, 8));
    CHECK(io::rat_from(json(5), "t") == Rat(5));
    CHECK(io::extnat_from(io::extnat_json(ExtNat::inf()), "t") == ExtNat::inf());
    CHECK(io::extnat_from(io::extnat_json(ExtNat(7)), "t") == ExtNat(7));
    CHECK_THROWS_AS(io::rat_from(json("x/y"), "t"), validation_error);
}

TEST_CASE("step functions round trip") {
    StepLsc f(1, {ExtNat(2), ExtNat::inf()}, {ExtNat(1), ExtNat(0)});
    StepLsc g = io::step_from_json(io::to_json(f));
    CHECK(f == g);
    // infinity serializes as the string "inf"
    json j = io::to_json(f);
    CHECK(j["arc_values"][1] == "inf");
}

TEST_CASE("graphs and graph functions round trip") {
    GraphPtr g = gen::theta_graph();
    GraphPtr g2 = io::graph_from_json(io::to_json(*g));
    CHECK(g2->num_vertices == g->num_vertices);
    REQUIRE(g2->edges.size() == g->edges.size());
    for (size_t e = 0; e < g->edges.size(); ++e) {
        CHECK(g2->edges[e].a == g->edges[e].a);
        CHECK(g2->edges[e].b == g->edges[e].b);
        CHECK(g2->edges[e].length == g->edges[e].length);
    }
    GraphLsc f = GraphLsc::constant(g, ExtNat(2));
    f.cut_at(0, Rat(1, 3));
    GraphLsc f2 = io::graphlsc_from_json(io::to_json(f), g2);
    CHECK(f2.at(GraphPoint::on_edge(0, Rat(1, 3))) == ExtNat(2));
}

TEST_CASE("diagonal unitaries round trip with multiplicities") {
    DiagonalUnitary u;
    u.blocks = {{Angle(Rat(1, 4)), Angle(Rat(1, 4)), Angle(Rat(0))}, {Angle(Rat(5, 8))}};
    DiagonalUnitary v = io::unitary_from_json(io::to_json(u));
    u.sort();
    v.sort();
    CHECK(u == v);
}

TEST_CASE("unitary fields round trip with their lifts") {
    gen::Rng rng(103);
    UnitaryField u = gen::random_field(rng, gen::theta_graph(), 3, 2);
    UnitaryField v = io::field_from_json(io::to_json(u));
    CHECK(v.d == u.d);
    for (int t = 0; t < u.d; ++t)
        for (size_t e = 0; e < u.tracks[t].size(); ++e) {
            CHECK(v.tracks[t][e].cuts == u.tracks[t][e].cuts);
            CHECK(v.tracks[t][e].lifts == u.tracks[t][e].lifts);
        }
}

TEST_CASE("valuations round trip for every codomain") {
    gen::Rng rng(107);
    SUBCASE("findim") {
        FinDimValuation a = gen::random_valuation(rng, 2, {3, 2});
        auto any = io::valuation_from_json(io::to_json(a));
        auto* b = std::get_if<FinDimValuation>(&any.v);
        REQUIRE(b);
        b->validate();
        for (int len = 1; len <= 4; ++len)
            for (int s = 0; s < 4; ++s) CHECK(a.value(s, len) == b->value(s, len));
    }
    SUBCASE("graph codomain") {
        UnitaryField u = gen::random_field(rng, gen::interval_graph(), 2, 2);
        GraphValuation a = cu_of_unitary(u, 2);
        auto any = io::valuation_from_json(io::to_json(a));
        auto* b = std::get_if<GraphValuation>(&any.v);
        REQUIRE(b);
        b->validate();
        for (int len = 1; len <= 4; ++len)
            for (int s = 0; s < 4; ++s) CHECK(a.value(s, len) == b->value(s, len));
    }
    SUBCASE("jiang-su codomain") {
        CuZValuation a = jiang_su_valuation(3, 2);
        auto any = io::valuation_from_json(io::to_json(a));
        auto* b = std::get_if<CuZValuation>(&any.v);
        REQUIRE(b);
        CHECK(*b == a);
    }
}

TEST_CASE("documents report missing fields by name") {
    json j = {{"schema", "arc-valuation"}, {"resolution", 2}};
    try {
        io::valuation_from_json(j);
        FAIL("expected a validation error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("codomain") != std::string::npos);
    }
}

TEST_CASE("reports serialize their check lines") {
    Report r = jiang_su_demo(1, 2);
    json j = io::to_json(r);
    CHECK(j["schema"] == "report");
    CHECK(j["checks"].size() == r.checks.size());
    for (const auto& c : j["checks"]) {
        CHECK(c.contains("name"));
        CHECK(c.contains("claimed_bound"));
        CHECK(c.contains("computed_value"));
        CHECK(c.contains("pass"));
    }
}
