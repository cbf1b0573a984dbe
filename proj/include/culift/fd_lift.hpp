#pragma once

#include "culift/cu_morphism.hpp"

#include <vector>

namespace culift {

/// A diagonal unitary over a finite-dimensional algebra: one angle multiset
/// per matrix block. Unitarity is structural (entries live on the circle).
struct DiagonalUnitary {
    std::vector<std::vector<Angle>> blocks;

    int block_count() const { return int(blocks.size()); }
    std::vector<int> dims() const {
        std::vector<int> d;
        d.reserve(blocks.size());
        for (const auto& b : blocks) d.push_back(int(b.size()));
        return d;
    }
    /// Canonical form: angles sorted within each block.
    void sort();
    bool operator==(const DiagonalUnitary& o) const { return blocks == o.blocks; }
};

/// The fill-up construction: per block and per arc, the arc's center with
/// multiplicity alpha(1_U_k) and the breakpoint with the leftover
/// multiplicity from the two-cell arc. Entries are emitted in arc order,
/// centers before breakpoints. The input must validate; the output's
/// spectral counts reproduce alpha on every Lambda_n generator exactly.
DiagonalUnitary fill_up(const FinDimValuation& alpha);

/// Fill-up lifts of alpha coarsened to every resolution 1..n_max
/// (n_max at most alpha's native resolution).
std::vector<DiagonalUnitary> lift_sequence(const FinDimValuation& alpha, int n_max);

} // namespace culift
