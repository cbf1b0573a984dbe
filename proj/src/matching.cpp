#include "culift/matching.hpp"

namespace culift {

namespace {

bool try_augment(const std::vector<std::vector<bool>>& adj, int u,
                 std::vector<bool>& seen, std::vector<int>& match_right) {
    int m = int(adj[u].size());
    for (int v = 0; v < m; ++v) {
        if (!adj[u][v] || seen[v]) continue;
        seen[v] = true;
        if (match_right[v] < 0 || try_augment(adj, match_right[v], seen, match_right)) {
            match_right[v] = u;
            return true;
        }
    }
    return false;
}

} // namespace

BipartiteResult max_bipartite(const std::vector<std::vector<bool>>& adj) {
    int n = int(adj.size());
    int m = n == 0 ? 0 : int(adj[0].size());
    std::vector<int> match_right(m, -1);
    BipartiteResult res;
    res.match_of_left.assign(n, -1);
    int covered = 0;
    std::vector<int> failed;
    for (int u = 0; u < n; ++u) {
        std::vector<bool> seen(m, false);
        if (try_augment(adj, u, seen, match_right)) ++covered;
        else failed.push_back(u);
    }
    for (int v = 0; v < m; ++v)
        if (match_right[v] >= 0) res.match_of_left[match_right[v]] = v;
    res.perfect = covered == n && n == m;
    if (!res.perfect && !failed.empty()) {
        // Hall witness: left vertices reachable from the failed ones by
        // alternating paths; their neighbourhood is fully matched into them,
        // so the set exceeds its neighbourhood by the number of failures.
        std::vector<bool> left_mark(n, false), right_mark(m, false);
        for (int u : failed) left_mark[u] = true;
        bool grew = true;
        while (grew) {
            grew = false;
            for (int u = 0; u < n; ++u) {
                if (!left_mark[u]) continue;
                for (int v = 0; v < m; ++v) {
                    if (!adj[u][v] || right_mark[v]) continue;
                    right_mark[v] = true;
                    if (match_right[v] >= 0 && !left_mark[match_right[v]]) {
                        left_mark[match_right[v]] = true;
                        grew = true;
                    }
                }
            }
        }
        for (int u = 0; u < n; ++u)
            if (left_mark[u]) res.deficient_left.push_back(u);
    } else if (!res.perfect) {
        // n > m with every left vertex matched: the whole side certifies
        for (int u = 0; u < n; ++u) res.deficient_left.push_back(u);
    }
    return res;
}

bool max_bipartite_is_perfect(const std::vector<std::vector<bool>>& adj) {
    return max_bipartite(adj).perfect;
}

std::vector<int> lex_min_perfect(const std::vector<std::vector<bool>>& adj) {
    int n = int(adj.size());
    std::vector<int> chosen(n, -1);
    std::vector<bool> used(n == 0 ? 0 : adj[0].size(), false);
    for (int u = 0; u < n; ++u) {
        int pick = -1;
        for (int v = 0; v < int(used.size()); ++v) {
            if (used[v] || !adj[u][v]) continue;
            // feasibility: fix u -> v, perfect matching must survive on the rest
            std::vector<std::vector<bool>> rest;
            rest.reserve(n - u - 1);
            for (int u2 = u + 1; u2 < n; ++u2) {
                std::vector<bool> row;
                row.reserve(used.size());
                for (int v2 = 0; v2 < int(used.size()); ++v2)
                    row.push_back(!used[v2] && v2 != v && adj[u2][v2]);
                rest.push_back(std::move(row));
            }
            auto sub = max_bipartite(rest);
            int need = n - u - 1;
            int got = 0;
            for (int x : sub.match_of_left)
                if (x >= 0) ++got;
            if (got == need) { pick = v; break; }
        }
        if (pick < 0) throw internal_error("lex_min_perfect: no perfect matching");
        chosen[u] = pick;
        used[pick] = true;
    }
    return chosen;
}

} // namespace culift
