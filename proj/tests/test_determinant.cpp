#include "culift/determinant.hpp"
#include "culift/spectral.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <algorithm>

using namespace culift;

TEST_CASE("winding classes of the truncation pair") {
    SUBCASE("identity field has zero base") {
        UnitaryField id = UnitaryField::constant(unit_interval(), {Angle(Rat(0)), Angle(Rat(0))});
        WindingClass w = dhs(id);
        Rat c;
        GraphPoint a, b;
        Rat va, vb;
        REQUIRE(w.base.constant(c, a, b, va, vb));
        CHECK(c == Rat(0));
        CHECK(w.modulus == 2);
    }
    SUBCASE("constant times w_2 has base 3/8") {
        UnitaryField u = constant_times_w(2);
        WindingClass w = dhs(u);
        Rat c;
        GraphPoint a, b;
        Rat va, vb;
        REQUIRE(w.base.constant(c, a, b, va, vb));
        CHECK(c == Rat(3, 8)); // (0 + 1/4 + 1/2 + 3/4) / 4
        CHECK(w.modulus == 4);
    }
    SUBCASE("rotation times w_2 has base t + 3/8") {
        UnitaryField v = rotation_times_w(2);
        WindingClass w = dhs(v);
        CHECK(w.base.at(GraphPoint::on_vertex(0)) == Rat(3, 8));
        CHECK(w.base.at(GraphPoint::on_edge(0, Rat(1, 2))) == Rat(7, 8));
        CHECK(w.base.at(GraphPoint::on_vertex(1)) == Rat(11, 8));
    }
    SUBCASE("dhs is additive under track regrouping") {
        UnitaryField u = rotation_times_w(2);
        auto lifts = global_lifts(u);
        // recombining the average from two halves reproduces the base
        WindingClass whole = dhs(u, lifts);
        PLFunction half1(u.graph), half2(u.graph);
        for (int t = 0; t < 2; ++t) half1 = half1.plus(lifts[t]);
        for (int t = 2; t < 4; ++t) half2 = half2.plus(lifts[t]);
        PLFunction rebuilt = half1.plus(half2).scaled(Rat(1, 4));
        PLFunction diff = rebuilt.minus(whole.base);
        Rat c;
        GraphPoint a, b;
        Rat va, vb;
        REQUIRE(diff.constant(c, a, b, va, vb));
        CHECK(c == Rat(0));
    }
}

TEST_CASE("lift propagation rejects winding tracks") {
    GraphPtr g = gen::circle_graph();
    UnitaryField u;
    u.graph = g;
    u.d = 1;
    u.tracks = {{UnitaryField::TrackEdge{{Rat(0), Rat(1)}, {Rat(0), Rat(1)}}}}; // winds once
    u.vertex_angles = {{Angle(Rat(0))}};
    u.validate(); // continuous as a circle-valued track
    CHECK_THROWS_AS(global_lifts(u), validation_error);
}

TEST_CASE("aue obstruction certificates") {
    SUBCASE("a field against itself is inconclusive") {
        UnitaryField u = constant_times_w(2);
        auto cert = aue_obstruction(u, u);
        CHECK_FALSE(cert.is_certificate());
    }
    SUBCASE("permuted diagonal entries stay inconclusive") {
        GraphPtr g = unit_interval();
        UnitaryField u = UnitaryField::constant(g, {Angle(Rat(1, 8)), Angle(Rat(5, 8))});
        UnitaryField v = UnitaryField::constant(g, {Angle(Rat(5, 8)), Angle(Rat(1, 8))});
        auto cert = aue_obstruction(u, v);
        CHECK_FALSE(cert.is_certificate());
    }
    SUBCASE("the truncation pair is distinguished with witnesses") {
        UnitaryField u = constant_times_w(2);
        UnitaryField v = rotation_times_w(2);
        auto cert = aue_obstruction(u, v);
        REQUIRE(cert.kind == ObstructionCertificate::Kind::nonconstant_difference);
        CHECK(cert.v1 != cert.v2);
        auto cert2 = aue_obstruction(v, u); // symmetric conclusion
        CHECK(cert2.is_certificate());
    }
    SUBCASE("a constant offset outside the lattice is certified") {
        GraphPtr g = unit_interval();
        UnitaryField u = UnitaryField::constant(g, {Angle(Rat(0)), Angle(Rat(0))});
        UnitaryField v = UnitaryField::constant(g, {Angle(Rat(1, 3)), Angle(Rat(0))});
        auto cert = aue_obstruction(u, v); // difference of bases: 1/6, lattice (1/2)Z
        REQUIRE(cert.kind == ObstructionCertificate::Kind::nonlattice_constant);
        CHECK((cert.constant == Rat(1, 6) || cert.constant == Rat(-1, 6)));
    }
    SUBCASE("a constant offset inside the lattice is inconclusive") {
        GraphPtr g = unit_interval();
        UnitaryField u = UnitaryField::constant(g, {Angle(Rat(0)), Angle(Rat(0))});
        UnitaryField v = UnitaryField::constant(g, {Angle(Rat(1, 2)), Angle(Rat(1, 2))});
        auto cert = aue_obstruction(u, v); // difference 1/2 lies in (1/2)Z
        CHECK_FALSE(cert.is_certificate());
    }
    SUBCASE("dimension mismatch is an error") {
        GraphPtr g = unit_interval();
        UnitaryField u = UnitaryField::constant(g, {Angle(Rat(0))});
        UnitaryField v = UnitaryField::constant(g, {Angle(Rat(0)), Angle(Rat(0))});
        CHECK_THROWS_AS(aue_obstruction(u, v), validation_error);
    }
}

TEST_CASE("winding class equality notions") {
    GraphPtr g = unit_interval();
    UnitaryField u = UnitaryField::constant(g, {Angle(Rat(0)), Angle(Rat(0))});
    UnitaryField v = UnitaryField::constant(g, {Angle(Rat(1, 2)), Angle(Rat(1, 2))});
    UnitaryField w = UnitaryField::constant(g, {Angle(Rat(1, 3)), Angle(Rat(0))});
    WindingClass wu = dhs(u), wv = dhs(v), ww = dhs(w);
    CHECK(wu.stably_equal(wv));      // differ by 1/2 in (1/2)Z
    CHECK(wu.nonstably_equal(wv));
    CHECK_FALSE(wu.stably_equal(ww)); // differ by 1/6
    CHECK(wu.nonstably_equal(ww));    // but still a constant
}

TEST_CASE("obstruction demo reports pass at small levels") {
    for (int n = 1; n <= 3; ++n) {
        Report r = obstruction_demo(n);
        for (const auto& c : r.checks) {
            INFO(c.name, ": claimed ", c.claimed, ", computed ", c.computed);
            CHECK(c.pass);
        }
    }
}

TEST_CASE("jiang-su demo matches the parity rule") {
    SUBCASE("even-even pair") {
        Report r = jiang_su_demo(2, 4);
        CHECK(r.all_pass());
    }
    SUBCASE("odd-even pair certifies") {
        Report r = jiang_su_demo(1, 2);
        CHECK(r.all_pass());
        bool saw_certificate = false;
        for (const auto& c : r.checks)
            if (c.computed == "certificate") saw_certificate = true;
        CHECK(saw_certificate);
    }
    SUBCASE("equal parameters agree everywhere") {
        Report r = jiang_su_demo(3, 3);
        CHECK(r.all_pass());
    }
    SUBCASE("determinant values are exact") {
        CHECK(jiang_su_determinant(1) == Rat(1, 2));
        CHECK(jiang_su_determinant(2) == Rat(0));
        CHECK(jiang_su_determinant(7) == Rat(1, 2));
        CHECK(jiang_su_determinant(8) == Rat(0));
    }
    SUBCASE("the measure valuation is soft on arcs, compact at the unit") {
        CuZValuation a = jiang_su_valuation(3, 2);
        CHECK(a.unit() == CuZElement::compact(1));
        CHECK(a.value(0, 1) == CuZElement::soft(Rat(1, 4)));
        CHECK(a.value(1, 3) == CuZElement::soft(Rat(3, 4)));
        CHECK_NOTHROW(a.validate());
    }
}
