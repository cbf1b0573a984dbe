#pragma once

#include "culift/circle.hpp"

#include <optional>
#include <vector>

namespace culift {

/// Bipartite matching utilities shared by the marriage construction and the
/// bottleneck distance. Left/right items are indices into angle multisets;
/// adjacency is given as a boolean matrix.

struct BipartiteResult {
    bool perfect = false;
    std::vector<int> match_of_left;     // right index per left, -1 when unmatched
    std::vector<int> deficient_left;    // a Hall-violating set when not perfect
};

/// Maximum bipartite matching (augmenting paths). When no perfect matching
/// exists, deficient_left carries a set Omega with |N(Omega)| < |Omega|.
BipartiteResult max_bipartite(const std::vector<std::vector<bool>>& adj);

bool max_bipartite_is_perfect(const std::vector<std::vector<bool>>& adj);

/// Perfect matching with every matched pair adjacent, chosen canonically:
/// left items in index order each take the smallest feasible right item.
/// Requires a perfect matching to exist (check with max_bipartite first).
std::vector<int> lex_min_perfect(const std::vector<std::vector<bool>>& adj);

} // namespace culift
