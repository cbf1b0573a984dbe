#include "culift/cu_morphism.hpp"
#include "culift/fd_lift.hpp"
#include "generators.hpp"

#include <doctest.h>

using namespace culift;

namespace {

FinDimValuation dirac(const Rat& angle, int n) {
    return FinDimValuation::from_multisets(n, {{Angle(angle)}});
}

/// Brute-force comparison over every pair g << h of Lambda_n: the stated
/// definition, independent of the matching and subset reductions.
bool compare_bruteforce(const FinDimValuation& a, const FinDimValuation& b, int n) {
    auto all = lambda_generators(n);
    for (const auto& g : all)
        for (const auto& h : all) {
            if (!way_below(g.fn, h.fn)) continue;
            FinDimValue ag = evaluate(a, g.fn), bh = evaluate(b, h.fn);
            FinDimValue bg = evaluate(b, g.fn), ah = evaluate(a, h.fn);
            if (!fd_leq(ag, bh) || !fd_leq(bg, ah)) return false;
        }
    return true;
}

} // namespace

TEST_CASE("valuation tables validate and reject inconsistencies by name") {
    // the worked fill-up data: n = 1, d = 3
    FinDimValuation a(1, {3});
    a.set_value(0, 1, {ExtNat(1)});
    a.set_value(1, 1, {ExtNat(0)});
    a.set_value(0, 2, {ExtNat(2)});
    a.set_value(1, 2, {ExtNat(2)});
    CHECK_NOTHROW(a.validate());

    SUBCASE("cover identity violation is reported") {
        FinDimValuation bad = a;
        bad.set_value(0, 2, {ExtNat(3)});
        try {
            bad.validate();
            FAIL("expected a validation error");
        } catch (const validation_error& e) {
            CHECK(std::string(e.what()).find("cover identity") != std::string::npos);
        }
    }
    SUBCASE("negative fill-up multiplicity is reported") {
        // two adjacent arcs hold an angle each, but the two-cell arc over
        // them claims only one entry
        FinDimValuation bad(2, {2});
        bad.set_value(0, 1, {ExtNat(1)});
        bad.set_value(1, 1, {ExtNat(1)});
        bad.set_value(2, 1, {ExtNat(0)});
        bad.set_value(3, 1, {ExtNat(0)});
        for (int s = 0; s < 4; ++s) {
            bad.set_value(s, 2, {ExtNat(1)});
            bad.set_value(s, 3, {ExtNat(2)});
            bad.set_value(s, 4, {ExtNat(2)});
        }
        try {
            bad.validate();
            FAIL("expected a validation error");
        } catch (const validation_error& e) {
            std::string w = e.what();
            bool named = w.find("superadditivity") != std::string::npos ||
                         w.find("monotonicity") != std::string::npos;
            CHECK(named);
        }
    }
    SUBCASE("monotonicity violation is reported") {
        FinDimValuation bad = a;
        bad.set_value(0, 2, {ExtNat(0)}); // smaller than the arc inside it
        try {
            bad.validate();
            FAIL("expected a validation error");
        } catch (const validation_error& e) {
            CHECK(std::string(e.what()).find("monotonicity") != std::string::npos);
        }
    }
    SUBCASE("infinite values are rejected for the fill-up") {
        FinDimValuation bad = a;
        bad.set_value(0, 1, {ExtNat::inf()});
        CHECK_THROWS_AS(bad.validate(), validation_error);
    }
}

TEST_CASE("evaluate sums over support components") {
    gen::Rng rng(7);
    FinDimValuation a = gen::random_valuation(rng, 2, {5});
    // 0 and 1_T
    CHECK(evaluate(a, StepLsc::zero(2)) == FinDimValue{ExtNat(0)});
    CHECK(evaluate(a, StepLsc::one(2)) == a.unit());
    // additivity over the components of a two-arc element
    DyadicOpen two;
    two.n = 2;
    two.arcs = 0b0101;
    FinDimValue v = evaluate(a, StepLsc::indicator(two));
    CHECK(v == fd_add(a.value(0, 1), a.value(2, 1)));
}

TEST_CASE("evaluate agrees with direct eigenvalue counting on all lambda elements") {
    gen::Rng rng(5);
    for (int n = 0; n <= 3; ++n)
        for (int trial = 0; trial < 6; ++trial) {
            int d = 1 + int(rng() % 6);
            auto angles = gen::random_fine_multiset(rng, 6, d);
            FinDimValuation a = FinDimValuation::from_multisets(n, {angles});
            for_each_lambda(n, [&](const LambdaElement& e) {
                FinDimValue v = evaluate(a, e.fn);
                unsigned long long direct = 0;
                for (const auto& ang : angles)
                    if (e.fn.at(ang) == ExtNat(1)) ++direct;
                CHECK(v == FinDimValue{ExtNat(direct)});
            });
        }
}

TEST_CASE("compare on lambda agrees with the brute force oracle") {
    gen::Rng rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + int(rng() % 2); // oracle enumerates Lambda_n, keep n <= 2
        int d = 1 + int(rng() % 4);
        FinDimValuation a = gen::random_valuation(rng, 3, {d});
        FinDimValuation b = gen::random_valuation(rng, 3, {d});
        CHECK(compare_on_lambda(a, b, n) == compare_bruteforce(a, b, n));
    }
}

TEST_CASE("compare is reflexive and monotone downward in n") {
    gen::Rng rng(13);
    for (int trial = 0; trial < 30; ++trial) {
        FinDimValuation a = gen::random_valuation(rng, 3, {4});
        FinDimValuation b = gen::random_valuation(rng, 3, {4});
        CHECK(compare_on_lambda(a, a, 3));
        bool prev = true;
        for (int n = 4; n >= 0; --n) {
            bool now = compare_on_lambda(a, b, n);
            if (prev) {
                // nothing: failure above says nothing below
            }
            if (now) {
                // downward monotone: also true at every smaller lattice
                for (int m = n - 1; m >= 0; --m) CHECK(compare_on_lambda(a, b, m));
                break;
            }
            prev = now;
        }
    }
}

TEST_CASE("the Dirac pair at angles 0 and 1/2") {
    FinDimValuation a = dirac(Rat(0), 2);
    FinDimValuation b = dirac(Rat(1, 2), 2);
    CHECK(compare_on_lambda(a, b, 1));
    CHECK_FALSE(compare_on_lambda(a, b, 2));
    DistanceResult dd = dd_cu(a, b);
    CHECK(dd.value == Rat(1, 2));
    CHECK_FALSE(dd.exact_agreement);
    DistanceResult d = d_cu(a, b);
    CHECK(d.value == Rat(1, 2));
}

TEST_CASE("dd of a valuation with itself is exact agreement") {
    gen::Rng rng(17);
    FinDimValuation a = gen::random_valuation(rng, 3, {3, 2});
    DistanceResult dd = dd_cu(a, a);
    CHECK(dd.exact_agreement);
    CHECK(dd.value == Rat(0));
    DistanceResult d = d_cu(a, a);
    CHECK(d.exact_agreement);
    CHECK(d.value == Rat(0));
}

TEST_CASE("dd and d are symmetric") {
    gen::Rng rng(19);
    for (int trial = 0; trial < 25; ++trial) {
        FinDimValuation a = gen::random_valuation(rng, 3, {4});
        FinDimValuation b = gen::random_valuation(rng, 3, {4});
        DistanceResult ab = dd_cu(a, b), ba = dd_cu(b, a);
        CHECK(ab.value == ba.value);
        CHECK(ab.exact_agreement == ba.exact_agreement);
        CHECK(d_cu(a, b).value == d_cu(b, a).value);
    }
}

TEST_CASE("d_cu equals the literal grid scan") {
    gen::Rng rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2;
        FinDimValuation a = gen::random_valuation(rng, n, {3});
        FinDimValuation b = gen::random_valuation(rng, n, {3});
        DistanceResult fast = d_cu(a, b);
        DistanceResult scan = d_cu_scan(a, b, 3); // half-grid of resolution 2
        CHECK(fast.value == scan.value);
    }
}

TEST_CASE("codomain mismatches are rejected") {
    FinDimValuation a = dirac(Rat(0), 1);
    FinDimValuation b = FinDimValuation::from_multisets(1, {{Angle(Rat(0)), Angle(Rat(1, 2))}});
    CHECK_THROWS_AS(compare_on_lambda(a, b, 1), validation_error);
    CHECK(d_cu(a, b).infinite);
}

TEST_CASE("cauchy check follows the geometric bound") {
    gen::Rng rng(29);
    FinDimValuation a = gen::random_valuation(rng, 4, {6});
    SUBCASE("constant sequences pass for any positive constant") {
        std::vector<FinDimValuation> seq(4, a);
        CHECK(cauchy_check(seq, Rat(1, 100)));
    }
    SUBCASE("alternating Dirac pair fails with C = 1") {
        std::vector<FinDimValuation> seq = {dirac(Rat(0), 2), dirac(Rat(1, 2), 2),
                                            dirac(Rat(0), 2), dirac(Rat(1, 2), 2)};
        CHECK_FALSE(cauchy_check(seq, Rat(1)));
    }
    SUBCASE("fill-up lift sequences pass with C = 4") {
        auto lifts = lift_sequence(a, 4);
        std::vector<FinDimValuation> seq;
        for (const auto& u : lifts)
            seq.push_back(FinDimValuation::from_multisets(4, u.blocks));
        CHECK(cauchy_check(seq, Rat(4)));
    }
}

TEST_CASE("cauchy limit recovers the source valuation") {
    gen::Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3;
        FinDimValuation a = gen::random_valuation(rng, n, {int(1 + rng() % 6)});
        auto lifts = lift_sequence(a, n);
        std::vector<FinDimValuation> seq;
        for (int j = 0; j < int(lifts.size()); ++j)
            seq.push_back(FinDimValuation::from_multisets(j + 1, lifts[j].blocks));
        FinDimValuation lim = cauchy_limit(seq, Rat(4));
        REQUIRE(lim.resolution() == n);
        int c = 1 << n;
        for (int len = 1; len <= c; ++len)
            for (int s = 0; s < c; ++s) CHECK(lim.value(s, len) == a.value(s, len));
        // independence from dropping a prefix
        if (seq.size() > 1) {
            std::vector<FinDimValuation> tail(seq.begin() + 1, seq.end());
            FinDimValuation lim2 = cauchy_limit(tail, Rat(4));
            for (int len = 1; len <= c; ++len)
                for (int s = 0; s < c; ++s) CHECK(lim2.value(s, len) == lim.value(s, len));
        }
    }
    SUBCASE("constant sequence returns its value") {
        FinDimValuation a = gen::random_valuation(rng, 2, {4});
        std::vector<FinDimValuation> seq(3, a);
        FinDimValuation lim = cauchy_limit(seq, Rat(4));
        int c = 4;
        for (int len = 1; len <= c; ++len)
            for (int s = 0; s < c; ++s) CHECK(lim.value(s, len) == a.value(s, len));
    }
}

TEST_CASE("CuZ order axioms and the compact/soft dichotomy") {
    gen::Rng rng(37);
    auto random_elt = [&](bool allow_inf) {
        if (rng() % 2) return CuZElement::compact(rng() % 5);
        if (allow_inf && rng() % 8 == 0) return CuZElement::soft_inf();
        return CuZElement::soft(Rat(1 + (long long)(rng() % 16), 8));
    };
    for (int trial = 0; trial < 300; ++trial) {
        CuZElement x = random_elt(true), y = random_elt(true), z = random_elt(true);
        CHECK(leq(x, x)); // reflexive
        if (leq(x, y) && leq(y, x)) CHECK(x == y);  // antisymmetric
        if (leq(x, y) && leq(y, z)) CHECK(leq(x, z)); // transitive
        CHECK(x.is_soft() != x.is_compact()); // the dichotomy
        // soft(x) <= compact(n) and compact(n) <= soft(x) cannot both hold
        if (x.is_soft() && y.is_compact()) CHECK_FALSE((leq(x, y) && leq(y, x)));
        // addition: anything touching soft is soft
        if (x.is_soft() || y.is_soft()) CHECK((x + y).is_soft());
        else CHECK((x + y).is_compact());
    }
    // the epsilon family: soft(n) <= compact(n) <= soft(n + eps)
    CHECK(leq(CuZElement::soft(Rat(2)), CuZElement::compact(2)));
    CHECK_FALSE(leq(CuZElement::compact(2), CuZElement::soft(Rat(2))));
    CHECK(leq(CuZElement::compact(2), CuZElement::soft(Rat(2) + Rat(1, 1000))));
    // compact + soft = 2 soft
    CHECK(CuZElement::compact(1) + CuZElement::soft(Rat(1)) == CuZElement::soft(Rat(2)));
}

TEST_CASE("CuZ valuations compare through the subset route") {
    CuZValuation a(1);
    a.set_unit(CuZElement::compact(1));
    a.set_value(0, 1, CuZElement::soft(Rat(1, 2)));
    a.set_value(1, 1, CuZElement::soft(Rat(1, 2)));
    a.set_value(0, 2, CuZElement::soft(Rat(1)));
    a.set_value(1, 2, CuZElement::soft(Rat(1)));
    CHECK_NOTHROW(a.validate());
    CHECK(compare_on_lambda(a, a, 1));
    DistanceResult dd = dd_cu(a, a);
    CHECK(dd.exact_agreement);
}
