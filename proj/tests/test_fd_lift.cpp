#include "culift/fd_lift.hpp"
#include "culift/spectral.hpp"
#include "generators.hpp"

#include <doctest.h>

#include <algorithm>

using namespace culift;

TEST_CASE("fill-up reproduces the worked examples") {
    SUBCASE("n = 1, d = 2: all arcs one, both V two") {
        FinDimValuation a(1, {2});
        a.set_value(0, 1, {ExtNat(1)});
        a.set_value(1, 1, {ExtNat(1)});
        a.set_value(0, 2, {ExtNat(2)});
        a.set_value(1, 2, {ExtNat(2)});
        DiagonalUnitary u = fill_up(a);
        u.sort();
        REQUIRE(u.blocks.size() == 1);
        CHECK(u.blocks[0] == std::vector<Angle>{Angle(Rat(1, 4)), Angle(Rat(3, 4))});
    }
    SUBCASE("n = 1, d = 3: one breakpoint entry per side") {
        FinDimValuation a(1, {3});
        a.set_value(0, 1, {ExtNat(1)});
        a.set_value(1, 1, {ExtNat(0)});
        a.set_value(0, 2, {ExtNat(2)});
        a.set_value(1, 2, {ExtNat(2)});
        DiagonalUnitary u = fill_up(a);
        u.sort();
        CHECK(u.blocks[0] ==
              std::vector<Angle>{Angle(Rat(0)), Angle(Rat(1, 4)), Angle(Rat(1, 2))});
        // spectral counts as stated
        FinDimValuation b = cu_of_unitary(u, 1);
        CHECK(b.value(0, 1) == FinDimValue{ExtNat(1)}); // U_1
        CHECK(b.value(0, 2) == FinDimValue{ExtNat(2)}); // V_1
        CHECK(b.value(1, 2) == FinDimValue{ExtNat(2)}); // V_2
    }
    SUBCASE("center-supported data is a fixed point") {
        gen::Rng rng(41);
        for (int trial = 0; trial < 20; ++trial) {
            int n = 1 + int(rng() % 3);
            long long c = 1ll << n;
            std::vector<Angle> centers;
            for (int i = 0; i < 5; ++i) {
                long long k = (long long)(rng() % (unsigned long long)c);
                centers.push_back(Angle(Rat(2 * k + 1, 2 * c)));
            }
            std::sort(centers.begin(), centers.end());
            FinDimValuation a = FinDimValuation::from_multisets(n, {centers});
            DiagonalUnitary u = fill_up(a);
            u.sort();
            CHECK(u.blocks[0] == centers);
        }
    }
}

TEST_CASE("exact agreement: the round trip is the identity on the table") {
    gen::Rng rng(43);
    for (int trial = 0; trial < 60; ++trial) {
        int n = int(rng() % 4);
        int r = 1 + int(rng() % 3);
        std::vector<int> dims;
        for (int b = 0; b < r; ++b) dims.push_back(1 + int(rng() % 8));
        FinDimValuation a = gen::random_valuation(rng, n, dims);
        DiagonalUnitary u = fill_up(a);
        FinDimValuation b = cu_of_unitary(u, n);
        int c = 1 << n;
        for (int len = 1; len <= c; ++len)
            for (int s = 0; s < c; ++s) CHECK(a.value(s, len) == b.value(s, len));
        CHECK(a.unit() == b.unit());
    }
}

TEST_CASE("entry count conservation and permutation invariance") {
    gen::Rng rng(47);
    FinDimValuation a = gen::random_valuation(rng, 2, {7});
    DiagonalUnitary u = fill_up(a);
    CHECK(u.blocks[0].size() == 7);
    // permuting diagonal entries leaves the valuation unchanged
    DiagonalUnitary shuffled = u;
    std::shuffle(shuffled.blocks[0].begin(), shuffled.blocks[0].end(), rng);
    FinDimValuation va = cu_of_unitary(u, 2), vb = cu_of_unitary(shuffled, 2);
    for (int len = 1; len <= 4; ++len)
        for (int s = 0; s < 4; ++s) CHECK(va.value(s, len) == vb.value(s, len));
}

TEST_CASE("blocks lift independently") {
    gen::Rng rng(53);
    FinDimValuation a = gen::random_valuation(rng, 2, {3, 4});
    DiagonalUnitary u = fill_up(a);
    // single-block restrictions agree with the per-block fill-up
    for (int b = 0; b < 2; ++b) {
        FinDimValuation ab(2, {a.dims()[b]});
        for (int len = 1; len <= 4; ++len)
            for (int s = 0; s < 4; ++s) ab.set_value(s, len, {a.value(s, len)[b]});
        DiagonalUnitary ub = fill_up(ab);
        ub.sort();
        std::vector<Angle> expect = u.blocks[b];
        std::sort(expect.begin(), expect.end());
        CHECK(ub.blocks[0] == expect);
    }
}

TEST_CASE("lift sequence compares with the source at each resolution") {
    gen::Rng rng(59);
    FinDimValuation a = gen::random_valuation(rng, 4, {5});
    auto lifts = lift_sequence(a, 4);
    REQUIRE(lifts.size() == 4);
    for (int n = 1; n <= 4; ++n) {
        FinDimValuation bn = cu_of_unitary(lifts[n - 1], n);
        CHECK(compare_on_lambda(bn, a, n));
        // agreement is exact on the Lambda_n table
        FinDimValuation an = a.coarsened(n);
        int c = 1 << n;
        for (int len = 1; len <= c; ++len)
            for (int s = 0; s < c; ++s) CHECK(bn.value(s, len) == an.value(s, len));
    }
    SUBCASE("constant for center-supported sources") {
        std::vector<Angle> centers = {Angle(Rat(1, 4)), Angle(Rat(1, 4)), Angle(Rat(3, 4))};
        FinDimValuation b = FinDimValuation::from_multisets(2, {centers});
        auto seq = lift_sequence(b, 2);
        // at the native resolution the lift recovers the source angles
        DiagonalUnitary last = seq.back();
        last.sort();
        std::vector<Angle> sorted = centers;
        std::sort(sorted.begin(), sorted.end());
        CHECK(last.blocks[0] == sorted);
    }
    SUBCASE("n_max beyond the native resolution is rejected") {
        CHECK_THROWS_AS(lift_sequence(a, 5), resolution_error);
    }
}

TEST_CASE("lift sequence recovers the root-of-unity data") {
    // the truncation-level carrier: all breakpoints of resolution m
    int m = 3;
    long long d = 1ll << m;
    std::vector<Angle> roots;
    for (long long j = 0; j < d; ++j) roots.push_back(Angle(Rat(j, d)));
    FinDimValuation a = FinDimValuation::from_multisets(m, {roots});
    auto lifts = lift_sequence(a, m);
    DiagonalUnitary last = lifts.back();
    last.sort();
    CHECK(last.blocks[0] == roots);
}

TEST_CASE("inconsistent valuations are rejected, never repaired") {
    FinDimValuation bad(1, {2});
    bad.set_value(0, 1, {ExtNat(2)});
    bad.set_value(1, 1, {ExtNat(2)});
    bad.set_value(0, 2, {ExtNat(3)});
    bad.set_value(1, 2, {ExtNat(3)});
    CHECK_THROWS_AS(fill_up(bad), validation_error);
}
