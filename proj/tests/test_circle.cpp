#include "culift/circle.hpp"

#include <doctest.h>

#include <map>

using namespace culift;

namespace {

StepLsc arc_indicator(int n, uint64_t arcs) {
    return StepLsc::indicator(DyadicOpen::from_arcs(n, arcs));
}

} // namespace

TEST_CASE("step functions enforce lower semicontinuity") {
    CHECK_NOTHROW(StepLsc(1, {ExtNat(1), ExtNat(0)}, {ExtNat(0), ExtNat(0)}));
    CHECK_THROWS_AS(StepLsc(1, {ExtNat(1), ExtNat(0)}, {ExtNat(1), ExtNat(0)}),
                    validation_error);
    StepLsc one = StepLsc::one(2);
    CHECK(one.at(Angle(Rat(1, 3))) == ExtNat(1));
    CHECK(one.at(Angle(Rat(1, 4))) == ExtNat(1));
}

TEST_CASE("refinement preserves pointwise values") {
    StepLsc f(1, {ExtNat(2), ExtNat(1)}, {ExtNat(1), ExtNat(0)});
    StepLsc g = f.refined(3);
    for (long long k = 0; k < 16; ++k) {
        Angle a(Rat(k, 16));
        CHECK(f.at(a) == g.at(a));
    }
    CHECK(f == g);
}

TEST_CASE("way below on indicators is closure containment") {
    // 1_T << 1_T
    CHECK(way_below(StepLsc::one(0), StepLsc::one(0)));
    // an open arc is not way below itself
    StepLsc u1 = arc_indicator(1, 0b01);
    CHECK_FALSE(way_below(u1, u1));
    // U_1 << its one-cell thickening
    StepLsc thick = thicken(u1, Rat(1, 2));
    CHECK(way_below(u1, thick));
    // V-shaped arc (T minus a point) is not way below itself
    DyadicOpen vshape = DyadicOpen::from_arcs(1, 0b11);
    vshape.pts &= ~2ull; // drop x_1: support is the open arc through x_0
    StepLsc v1 = StepLsc::indicator(vshape);
    CHECK_FALSE(way_below(v1, v1));
    // but everything finite is way below something containing its closure
    CHECK(way_below(v1, StepLsc::one(1)));
    // the closure of U_1 contains x_0, so U_1 is not way below the
    // punctured circle T minus x_0
    DyadicOpen punctured = DyadicOpen::from_arcs(1, 0b11);
    punctured.pts &= ~1ull;
    StepLsc v = StepLsc::indicator(punctured);
    CHECK_FALSE(way_below(u1, v));
    // infinity is never way below
    StepLsc inf_fn = StepLsc::constant(0, ExtNat::inf());
    CHECK_FALSE(way_below(inf_fn, inf_fn));
}

TEST_CASE("thicken matches the levelwise ball union") {
    int n = 3;
    StepLsc u1 = arc_indicator(n, 0b1);
    SUBCASE("zero radius is the identity") { CHECK(thicken(u1, Rat(0)) == u1); }
    SUBCASE("one cell each side") {
        StepLsc t = thicken(u1, Rat(1, 8));
        DyadicOpen expect;
        expect.n = 3;
        for (int i : {7, 0, 1}) expect.arcs |= 1ull << i;
        for (int i : {0, 1}) expect.pts |= 1ull << i;
        CHECK(t == StepLsc::indicator(expect));
    }
    SUBCASE("full circle stays full") {
        CHECK(thicken(StepLsc::one(2), Rat(1, 4)) == StepLsc::one(2));
    }
    SUBCASE("non-dyadic radius is rejected") {
        CHECK_THROWS_AS(thicken(u1, Rat(1, 3)), resolution_error);
    }
    SUBCASE("monotone in the function") {
        StepLsc f = arc_indicator(2, 0b0001);
        StepLsc g = arc_indicator(2, 0b0011);
        CHECK(thicken(f, Rat(1, 4)).leq(thicken(g, Rat(1, 4))));
    }
    SUBCASE("levelwise on a two-story function") {
        StepLsc f(1, {ExtNat(2), ExtNat(0)}, {ExtNat(0), ExtNat(0)});
        StepLsc t = thicken(f, Rat(1, 4));
        // every level set of t equals the thickened level set of f
        for (unsigned long long l = 1; l <= 2; ++l) {
            StepLsc fl = StepLsc::indicator(f.refined(2).level_set(ExtNat(l)));
            StepLsc tl = StepLsc::indicator(t.level_set(ExtNat(l)));
            CHECK(tl == thicken(fl, Rat(1, 4)));
        }
    }
}

TEST_CASE("chain decomposition reconstructs the function") {
    SUBCASE("constant one") {
        auto parts = chain_decomposition(StepLsc::one(0));
        REQUIRE(parts.size() == 1);
        CHECK(parts[0] == StepLsc::one(0));
    }
    SUBCASE("zero gives the empty chain") {
        CHECK(chain_decomposition(StepLsc::zero(1)).empty());
    }
    SUBCASE("the two-story example") {
        // 2 * 1_{U_1} + 1_{U_2} at n = 1
        StepLsc f(1, {ExtNat(2), ExtNat(1)}, {ExtNat(0), ExtNat(0)});
        auto parts = chain_decomposition(f);
        REQUIRE(parts.size() == 2);
        DyadicOpen both_arcs;
        both_arcs.n = 1;
        both_arcs.arcs = 0b11; // both arcs, neither breakpoint
        CHECK(parts[0] == StepLsc::indicator(both_arcs));
        CHECK(parts[1] == arc_indicator(1, 0b01));
        // reconstruction
        StepLsc sum = StepLsc::zero(1);
        for (const auto& p : parts) sum = sum.plus(p);
        CHECK(sum == f);
    }
    SUBCASE("infinite input is rejected") {
        CHECK_THROWS_AS(chain_decomposition(StepLsc::constant(0, ExtNat::inf())),
                        validation_error);
    }
}

TEST_CASE("lambda enumeration matches the transfer-matrix count") {
    std::map<int, size_t> expected = {{0, 3}, {1, 7}, {2, 47}, {3, 2207}};
    for (auto [n, count] : expected) {
        size_t seen = 0;
        for_each_lambda(n, [&](const LambdaElement& e) {
            ++seen;
            CHECK(e.fn.is_lambda());
            CHECK(e.supp.is_open());
        });
        CHECK(seen == count);
    }
}

TEST_CASE("lambda at resolution zero is {0, T minus a point, T}") {
    auto all = lambda_generators(0);
    REQUIRE(all.size() == 3);
    int zeros = 0, fulls = 0, punctured = 0;
    for (const auto& e : all) {
        if (e.supp.empty()) ++zeros;
        else if (e.supp.full()) ++fulls;
        else ++punctured;
    }
    CHECK(zeros == 1);
    CHECK(fulls == 1);
    CHECK(punctured == 1);
}

TEST_CASE("way below agrees with the component rule on all lambda pairs") {
    for (int n = 0; n <= 3; ++n) {
        auto all = lambda_generators(n);
        for (const auto& g : all)
            for (const auto& h : all) {
                bool direct = way_below(g.fn, h.fn);
                // every closed support component of g inside supp h
                bool by_components = true;
                if (g.supp.full() || h.supp.full()) {
                    by_components = h.supp.full();
                    if (g.supp.empty()) by_components = true;
                } else if (!g.supp.empty()) {
                    by_components = g.supp.closure().subset_of(h.supp);
                }
                CHECK(direct == by_components);
                if (direct) CHECK(g.fn.leq(h.fn)); // way below implies leq
            }
    }
}

TEST_CASE("lambda thickening chain from the coarse lattice") {
    // for h << h' in Lambda_{n-2}: h << thicken(h, 3/2^n) << h'
    for (int coarse = 0; coarse <= 2; ++coarse) {
        int n = coarse + 2;
        auto all = lambda_generators(coarse);
        for (const auto& h : all)
            for (const auto& hp : all) {
                if (!way_below(h.fn, hp.fn)) continue;
                StepLsc mid = thicken(h.fn, Rat(3, 1ll << n));
                if (!h.supp.full()) CHECK(way_below(h.fn, mid));
                CHECK(way_below(mid, hp.fn));
            }
    }
}

TEST_CASE("dyadic open set plumbing") {
    DyadicOpen s = DyadicOpen::from_arcs(2, 0b0101);
    CHECK(s.components().size() == 2);
    DyadicOpen t = s.thicken_cells(1);
    CHECK(t.full()); // two opposite arcs thickened by a cell each side meet
    DyadicOpen u = DyadicOpen::from_arcs(3, 0b00000111);
    CHECK(u.components() == std::vector<std::pair<int, int>>{{0, 3}});
    CHECK(u.shrink_cells(1).components() == std::vector<std::pair<int, int>>{{1, 1}});
    CHECK(u.shrink_cells(2).empty());
    DyadicOpen punct = DyadicOpen::from_arcs(2, 0b1111);
    punct.pts &= ~1ull; // remove breakpoint 0
    CHECK(punct.components() == std::vector<std::pair<int, int>>{{0, 4}});
}
