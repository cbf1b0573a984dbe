#include "culift/fd_lift.hpp"

#include <algorithm>

namespace culift {

void DiagonalUnitary::sort() {
    for (auto& b : blocks) std::sort(b.begin(), b.end());
}

DiagonalUnitary fill_up(const FinDimValuation& alpha) {
    FinDimValuation a = alpha;
    if (!a.validated()) a.validate();
    int n = a.resolution();
    int c = 1 << n;
    DiagonalUnitary u;
    for (int b = 0; b < a.block_count(); ++b) {
        std::vector<Angle> entries;
        if (n == 0) {
            unsigned long long q0 = a.value(0, 1)[b].value();
            unsigned long long d = a.unit()[b].value();
            for (unsigned long long i = 0; i < q0; ++i) entries.push_back(Angle(Rat(1, 2)));
            for (unsigned long long i = q0; i < d; ++i) entries.push_back(Angle(Rat(0)));
        } else {
            // arc order, center before the breakpoint that closes the arc
            for (int k = 0; k < c; ++k) {
                unsigned long long q = a.value(k, 1)[b].value();
                Angle center(Rat(2 * k + 1, 2ll * c));
                for (unsigned long long i = 0; i < q; ++i) entries.push_back(center);
                unsigned long long v = a.value(k, 2)[b].value();
                unsigned long long qn = a.value((k + 1) % c, 1)[b].value();
                unsigned long long r = v - q - qn; // validation guarantees v >= q + qn
                Angle bp(Rat((k + 1) % c, c));
                for (unsigned long long i = 0; i < r; ++i) entries.push_back(bp);
            }
        }
        if (entries.size() != a.unit()[b].value())
            throw internal_error("fill_up: entry count drifted from the unit");
        u.blocks.push_back(std::move(entries));
    }
    return u;
}

std::vector<DiagonalUnitary> lift_sequence(const FinDimValuation& alpha, int n_max) {
    if (n_max < 1) throw validation_error("lift_sequence: n_max must be at least 1");
    if (n_max > alpha.resolution())
        throw resolution_error("lift_sequence: n_max exceeds the native resolution " +
                               std::to_string(alpha.resolution()));
    std::vector<DiagonalUnitary> out;
    for (int n = 1; n <= n_max; ++n) {
        FinDimValuation coarse = alpha.coarsened(n);
        try {
            coarse.validate();
        } catch (const validation_error& e) {
            throw validation_error("lift_sequence: inconsistent at resolution " +
                                   std::to_string(n) + ": " + e.what());
        }
        out.push_back(fill_up(coarse));
    }
    return out;
}

} // namespace culift
