#include "culift/cu_morphism.hpp"
#include "culift/matching.hpp"

#include <algorithm>
#include <set>

namespace culift {

FinDimValue fd_add(const FinDimValue& a, const FinDimValue& b) {
    if (a.size() != b.size()) throw internal_error("FinDimValue size mismatch");
    FinDimValue r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

bool fd_leq(const FinDimValue& a, const FinDimValue& b) {
    if (a.size() != b.size()) throw internal_error("FinDimValue size mismatch");
    for (size_t i = 0; i < a.size(); ++i)
        if (!(a[i] <= b[i])) return false;
    return true;
}

std::string DistanceResult::str() const {
    if (infinite) return "inf";
    if (exact_agreement) return "0 (exact agreement)";
    std::string s = value.str();
    if (at_resolution_cap) s += " (at resolution cap)";
    return s;
}

unsigned long long count_in_open_arc(const std::vector<Angle>& ms, const Rat& lo, const Rat& len) {
    unsigned long long c = 0;
    for (const auto& a : ms)
        if (in_open_arc(a, lo, len)) ++c;
    return c;
}

ArcCounter::ArcCounter(const std::vector<Angle>& ms, int n) : n_(n), total_(ms.size()) {
    int c = 1 << n;
    std::vector<unsigned long long> in_cell(size_t(c), 0), at_bp(size_t(c), 0);
    for (const auto& a : ms) {
        Rat pos = a.value() * Rat(c);
        long long idx = pos.floor() % c;
        if (pos.is_integer()) ++at_bp[size_t(idx)];
        else ++in_cell[size_t(idx)];
    }
    pref_cell_.assign(size_t(2 * c + 1), 0);
    pref_bp_.assign(size_t(2 * c + 1), 0);
    for (int i = 0; i < 2 * c; ++i) {
        pref_cell_[size_t(i + 1)] = pref_cell_[size_t(i)] + in_cell[size_t(i % c)];
        pref_bp_[size_t(i + 1)] = pref_bp_[size_t(i)] + at_bp[size_t(i % c)];
    }
}

unsigned long long ArcCounter::arc(int start, int len) const {
    int c = 1 << n_;
    if (len < 1 || len > c) throw internal_error("ArcCounter: arc length out of range");
    start = ((start % c) + c) % c;
    return pref_cell_[size_t(start + len)] - pref_cell_[size_t(start)] +
           pref_bp_[size_t(start + len)] - pref_bp_[size_t(start + 1)];
}

unsigned long long ArcCounter::open_set(const DyadicOpen& s) const {
    if (s.n != n_) throw internal_error("ArcCounter: resolution mismatch");
    if (s.full()) return total_;
    unsigned long long out = 0;
    for (auto [start, len] : s.components()) out += arc(start, len);
    return out;
}

std::vector<Angle> fill_up_profile(int n, const std::vector<unsigned long long>& q,
                                   const std::vector<unsigned long long>& v,
                                   const std::string& where) {
    int c = 1 << n;
    if (int(q.size()) != c || (n > 0 && int(v.size()) != c))
        throw internal_error("fill_up_profile: bad profile sizes");
    std::vector<Angle> out;
    for (int k = 0; k < c; ++k) {
        Angle center(Rat(2 * k + 1, 2ll * c));
        for (unsigned long long i = 0; i < q[k]; ++i) out.push_back(center);
    }
    if (n == 0) return out; // breakpoint multiplicity is fixed by the unit alone
    for (int j = 0; j < c; ++j) {
        int prev = (j + c - 1) % c;
        unsigned long long need = q[prev] + q[j];
        if (v[prev] < need)
            throw validation_error("superadditivity fails: V-value below adjacent arc sum at breakpoint " +
                                   std::to_string(j) + where);
        unsigned long long r = v[prev] - need;
        Angle bp(Rat(j, c));
        for (unsigned long long i = 0; i < r; ++i) out.push_back(bp);
    }
    return out;
}

// ---------------------------------------------------------------------------
// reach sets and multiset comparison

bool in_reach(const Angle& a, const Angle& b, int n) {
    long long c = 1ll << n;
    Rat pos = a.value() * Rat(c);
    Rat lo;
    Rat span;
    if (pos.is_integer()) {
        lo = Rat(pos.floor() - 2, c);
        span = Rat(4, c);
    } else {
        lo = Rat(pos.floor() - 1, c);
        span = Rat(3, c);
    }
    // a window of length exactly 1 is the circle minus its endpoint
    if (span > Rat(1)) return true;
    return in_open_arc(b, lo.frac(), span);
}

bool multisets_compare(const std::vector<Angle>& A, const std::vector<Angle>& B, int n) {
    if (A.size() != B.size()) return false;
    size_t d = A.size();
    if (d == 0) return true;
    std::vector<std::vector<bool>> adj(d, std::vector<bool>(d));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) adj[i][j] = in_reach(A[i], B[j], n);
    if (!max_bipartite_is_perfect(adj)) return false;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < d; ++j) adj[i][j] = in_reach(B[i], A[j], n);
    return max_bipartite_is_perfect(adj);
}

Rat multiset_bottleneck(const std::vector<Angle>& A, const std::vector<Angle>& B) {
    if (A.size() != B.size())
        throw validation_error("bottleneck distance: multiset sizes differ");
    size_t d = A.size();
    if (d == 0) return Rat(0);
    std::set<Rat> cand;
    cand.insert(Rat(0));
    for (const auto& a : A)
        for (const auto& b : B) cand.insert(arc_dist(a, b));
    std::vector<Rat> cs(cand.begin(), cand.end());
    auto feasible = [&](const Rat& r) {
        std::vector<std::vector<bool>> adj(d, std::vector<bool>(d));
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j) adj[i][j] = arc_dist(A[i], B[j]) <= r;
        return max_bipartite_is_perfect(adj);
    };
    size_t lo = 0, hi = cs.size() - 1;
    if (!feasible(cs[hi])) throw internal_error("bottleneck: all-pairs radius infeasible");
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (feasible(cs[mid])) hi = mid;
        else lo = mid + 1;
    }
    return cs[lo];
}

// ---------------------------------------------------------------------------
// FinDimValuation

FinDimValuation::FinDimValuation(int n, std::vector<int> dims)
    : n_(n), dims_(std::move(dims)) {
    if (n_ < 0 || n_ > 6) throw validation_error("valuation resolution must be in [0,6]");
    if (dims_.empty()) throw validation_error("valuation needs at least one block");
    unit_.reserve(dims_.size());
    for (int d : dims_) {
        if (d < 0) throw validation_error("negative block dimension");
        unit_.push_back(ExtNat((unsigned long long)d));
    }
    int c = 1 << n_;
    val_.assign(size_t(c), std::vector<FinDimValue>(size_t(c), FinDimValue(dims_.size(), ExtNat(0))));
}

FinDimValuation FinDimValuation::from_multisets(int n, const std::vector<std::vector<Angle>>& blocks) {
    std::vector<int> dims;
    dims.reserve(blocks.size());
    for (const auto& b : blocks) dims.push_back(int(b.size()));
    FinDimValuation a(n, dims);
    int c = 1 << n;
    std::vector<ArcCounter> counters;
    counters.reserve(blocks.size());
    for (const auto& b : blocks) counters.emplace_back(b, n);
    for (int len = 1; len <= c; ++len)
        for (int s = 0; s < c; ++s) {
            FinDimValue v(blocks.size());
            for (size_t b = 0; b < blocks.size(); ++b) v[b] = ExtNat(counters[b].arc(s, len));
            a.val_[size_t(len - 1)][size_t(s)] = std::move(v);
        }
    a.blocks_ = blocks;
    for (auto& b : a.blocks_) std::sort(b.begin(), b.end());
    return a;
}

const FinDimValue& FinDimValuation::value(int start, int len) const {
    int c = 1 << n_;
    if (len < 1 || len > c || start < 0 || start >= c)
        throw internal_error("arc index out of range");
    return val_[size_t(len - 1)][size_t(start)];
}

void FinDimValuation::set_value(int start, int len, FinDimValue v) {
    int c = 1 << n_;
    if (len < 1 || len > c || start < 0 || start >= c)
        throw internal_error("arc index out of range");
    if (v.size() != dims_.size())
        throw validation_error("arc value has wrong number of blocks");
    val_[size_t(len - 1)][size_t(start)] = std::move(v);
    blocks_.clear();
}

void FinDimValuation::validate() {
    int c = 1 << n_;
    for (int len = 1; len <= c; ++len)
        for (int s = 0; s < c; ++s)
            for (const auto& x : val_[size_t(len - 1)][size_t(s)])
                if (x.is_inf())
                    throw validation_error("infinite value at arc (start " + std::to_string(s) +
                                           ", len " + std::to_string(len) +
                                           "): the fill-up construction needs finite data");
    // monotone along one-cell extensions (chains give all nested pairs)
    for (int len = 1; len < c; ++len)
        for (int s = 0; s < c; ++s) {
            const auto& here = value(s, len);
            if (!fd_leq(here, value(s, len + 1)) ||
                !fd_leq(here, value((s + c - 1) % c, len + 1)))
                throw validation_error("monotonicity fails at arc (start " + std::to_string(s) +
                                       ", len " + std::to_string(len) + ")");
        }
    for (int s = 0; s < c; ++s)
        if (!fd_leq(value(s, c), unit_))
            throw validation_error("unital bound fails at arc start " + std::to_string(s));

    // cover identity and fill-up per block
    std::vector<std::vector<Angle>> blocks;
    for (size_t b = 0; b < dims_.size(); ++b) {
        std::vector<unsigned long long> q(static_cast<size_t>(c)), v2(static_cast<size_t>(c));
        for (int k = 0; k < c; ++k) q[k] = value(k, 1)[b].value();
        if (n_ >= 1) {
            for (int k = 0; k < c; ++k) v2[k] = value(k, 2)[b].value();
            unsigned long long lhs = 0, rhs = unit_[b].value();
            for (int k = 0; k < c; ++k) { lhs += v2[k]; rhs += q[k]; }
            if (lhs != rhs)
                throw validation_error("cover identity fails in block " + std::to_string(b) +
                                       ": sum V = " + std::to_string(lhs) + ", unit + sum U = " +
                                       std::to_string(rhs));
            blocks.push_back(fill_up_profile(n_, q, v2, " in block " + std::to_string(b)));
        } else {
            if (q[0] > unit_[b].value())
                throw validation_error("unital bound fails in block " + std::to_string(b));
            auto ms = fill_up_profile(0, q, {}, "");
            unsigned long long r = unit_[b].value() - q[0];
            for (unsigned long long i = 0; i < r; ++i) ms.push_back(Angle(Rat(0)));
            blocks.push_back(std::move(ms));
        }
        if (blocks.back().size() != unit_[b].value())
            throw validation_error("fill-up entry count differs from the unit in block " +
                                   std::to_string(b));
    }
    // arc consistency: the table must be the spectral count data of the fill-up
    std::vector<ArcCounter> counters;
    counters.reserve(blocks.size());
    for (const auto& b : blocks) counters.emplace_back(b, n_);
    for (int len = 1; len <= c; ++len)
        for (int s = 0; s < c; ++s)
            for (size_t b = 0; b < dims_.size(); ++b) {
                unsigned long long counted = counters[b].arc(s, len);
                if (ExtNat(counted) != value(s, len)[b])
                    throw validation_error("arc consistency fails at (start " + std::to_string(s) +
                                           ", len " + std::to_string(len) + ") in block " +
                                           std::to_string(b) + ": stored " +
                                           value(s, len)[b].str() + ", fill-up gives " +
                                           std::to_string(counted));
            }
    blocks_ = std::move(blocks);
    for (auto& b : blocks_) std::sort(b.begin(), b.end());
}

const std::vector<std::vector<Angle>>& FinDimValuation::canonical_blocks() const {
    if (!validated()) throw internal_error("canonical blocks requested before validation");
    return blocks_;
}

FinDimValue FinDimValuation::eval_open(const DyadicOpen& s0) const {
    if (s0.empty()) return FinDimValue(dims_.size(), ExtNat(0));
    if (s0.n > n_) {
        if (!validated())
            throw resolution_error("evaluation finer than the table needs a validated valuation");
        FinDimValue out(dims_.size(), ExtNat(0));
        for (auto [start, len] : s0.components()) {
            if (s0.full()) return unit_;
            out = fd_add(out, eval_arc(s0.n, start, len));
        }
        return out;
    }
    DyadicOpen s = s0.refined(n_);
    if (s.full()) return unit_;
    FinDimValue out(dims_.size(), ExtNat(0));
    for (auto [start, len] : s.components()) out = fd_add(out, value(start, len));
    return out;
}

FinDimValue FinDimValuation::eval_arc(int res, int start, int len) const {
    if (!validated()) throw internal_error("eval_arc needs a validated valuation");
    long long c = 1ll << res;
    FinDimValue out(dims_.size());
    for (size_t b = 0; b < blocks_.size(); ++b)
        out[b] = ExtNat(count_in_open_arc(blocks_[b], Rat(start, c), Rat(len, c)));
    return out;
}

FinDimValuation FinDimValuation::coarsened(int m) const {
    if (m > n_) throw resolution_error("coarsened: target resolution exceeds native");
    FinDimValuation out(m, dims_);
    int f = 1 << (n_ - m);
    int cm = 1 << m;
    for (int len = 1; len <= cm; ++len)
        for (int s = 0; s < cm; ++s) out.set_value(s, len, value(s * f, len * f));
    return out;
}

FinDimValue evaluate(const FinDimValuation& a, const StepLsc& g) {
    if (!g.is_lambda()) throw validation_error("evaluate: not a {0,1}-valued step function");
    return a.eval_open(g.support());
}

// ---------------------------------------------------------------------------
// comparison drivers

namespace {

template <class EvalA, class EvalB, class LeqFn>
bool compare_masks(int n, const EvalA& A, const EvalB& B, const LeqFn& le) {
    if (n > 4) throw resolution_error("subset comparison limited to resolution 4");
    int c = 1 << n;
    uint64_t top = (c == 64) ? ~0ull : ((1ull << c) - 1);
    for (uint64_t mask = 1;; ++mask) {
        DyadicOpen s = DyadicOpen::from_arcs(n, mask);
        DyadicOpen t = s.thicken_cells(1);
        if (!le(A(s), B(t)) || !le(B(s), A(t))) return false;
        if (mask == top) break;
    }
    return true;
}

int isolation_cap(const std::vector<std::vector<Angle>>& A, const std::vector<std::vector<Angle>>& B,
                  int floor_cap) {
    int cap = floor_cap;
    for (size_t b = 0; b < A.size(); ++b) {
        std::set<Rat> vals;
        for (const auto& x : A[b]) vals.insert(x.value());
        for (const auto& x : B[b]) vals.insert(x.value());
        if (vals.size() < 2) continue;
        Rat md(1);
        std::vector<Rat> v(vals.begin(), vals.end());
        for (size_t i = 0; i < v.size(); ++i) {
            Rat d = arc_dist(Angle(v[i]), Angle(v[(i + 1) % v.size()]));
            if (d > Rat(0) && d < md) md = d;
        }
        int n = 0;
        while (n < 40 && !(Rat(2, 1ll << n) < md)) ++n;
        cap = std::max(cap, n + 2);
    }
    return std::min(cap, 40);
}

} // namespace

bool compare_on_lambda(const FinDimValuation& a, const FinDimValuation& b, int n) {
    if (!a.same_codomain(b))
        throw validation_error("compare: valuations have different codomains");
    if (a.validated() && b.validated()) {
        const auto& A = a.canonical_blocks();
        const auto& B = b.canonical_blocks();
        for (size_t blk = 0; blk < A.size(); ++blk)
            if (!multisets_compare(A[blk], B[blk], n)) return false;
        return true;
    }
    if (n > a.resolution() || n > b.resolution())
        throw resolution_error("compare: lattice finer than an unvalidated table");
    auto evalA = [&](const DyadicOpen& s) { return a.eval_open(s); };
    auto evalB = [&](const DyadicOpen& s) { return b.eval_open(s); };
    return compare_masks(n, evalA, evalB,
                         [](const FinDimValue& x, const FinDimValue& y) { return fd_leq(x, y); });
}

namespace {

template <class CompareFn, class EqualFn>
DistanceResult dd_generic(int cap, const CompareFn& cmp, const EqualFn& equal) {
    DistanceResult res;
    for (int n = 0; n <= cap; ++n) {
        if (!cmp(n)) {
            if (n == 0) {
                res.infinite = true;
                return res;
            }
            res.level = n - 1;
            res.value = Rat(1, 1ll << (n - 1));
            return res;
        }
    }
    res.level = cap;
    if (equal()) {
        res.exact_agreement = true;
        res.value = Rat(0);
    } else {
        res.at_resolution_cap = true;
        res.value = Rat(1, 1ll << cap);
    }
    return res;
}

} // namespace

DistanceResult dd_cu(const FinDimValuation& a, const FinDimValuation& b) {
    if (!a.same_codomain(b))
        throw validation_error("dd_cu: valuations have different codomains");
    if (a.validated() && b.validated()) {
        int cap = isolation_cap(a.canonical_blocks(), b.canonical_blocks(),
                                std::max(a.resolution(), b.resolution()) + 2);
        return dd_generic(cap,
                          [&](int n) { return compare_on_lambda(a, b, n); },
                          [&] { return a.canonical_blocks() == b.canonical_blocks(); });
    }
    int cap = std::min({a.resolution(), b.resolution(), 4});
    return dd_generic(cap,
                      [&](int n) { return compare_on_lambda(a, b, n); },
                      [&] {
                          int m = std::min(a.resolution(), b.resolution());
                          if (a.resolution() != b.resolution()) return false;
                          FinDimValuation ca = a.coarsened(m), cb = b.coarsened(m);
                          int c = 1 << m;
                          for (int len = 1; len <= c; ++len)
                              for (int s = 0; s < c; ++s)
                                  if (ca.value(s, len) != cb.value(s, len)) return false;
                          return true;
                      });
}

DistanceResult d_cu(const FinDimValuation& a, const FinDimValuation& b) {
    DistanceResult res;
    if (!a.same_codomain(b)) {
        res.infinite = true;
        return res;
    }
    if (!a.validated() || !b.validated())
        throw validation_error("d_cu needs validated valuations");
    Rat best(0);
    for (int blk = 0; blk < a.block_count(); ++blk) {
        Rat r = multiset_bottleneck(a.canonical_blocks()[blk], b.canonical_blocks()[blk]);
        if (r > best) best = r;
    }
    res.value = best;
    res.exact_agreement = best.is_zero();
    return res;
}

DistanceResult d_cu_scan(const FinDimValuation& a, const FinDimValuation& b, int w) {
    DistanceResult res;
    if (!a.same_codomain(b)) {
        res.infinite = true;
        return res;
    }
    if (w > 4) throw resolution_error("d_cu_scan limited to working resolution 4");
    auto evalA = [&](const DyadicOpen& s) { return a.eval_open(s); };
    auto evalB = [&](const DyadicOpen& s) { return b.eval_open(s); };
    int c = 1 << w;
    uint64_t top = (1ull << c) - 1;
    auto feasible = [&](int m) {
        for (uint64_t mask = 1;; ++mask) {
            DyadicOpen s = DyadicOpen::from_arcs(w, mask);
            DyadicOpen t = s.thicken_cells(m);
            if (!fd_leq(evalA(s), evalB(t)) || !fd_leq(evalB(s), evalA(t))) return false;
            if (mask == top) break;
        }
        return true;
    };
    int lo = 0, hi = c / 2 + 1;
    if (!feasible(hi)) {
        res.infinite = true;
        return res;
    }
    while (lo < hi) {
        int mid = (lo + hi) / 2;
        if (feasible(mid)) hi = mid;
        else lo = mid + 1;
    }
    res.value = Rat(lo, c);
    res.exact_agreement = res.value.is_zero();
    return res;
}

bool cauchy_check(const std::vector<FinDimValuation>& seq, const Rat& C) {
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
        DistanceResult d = dd_cu(seq[i], seq[i + 1]);
        if (d.infinite) return false;
        Rat bound = C / Rat(1ll << (i + 2));
        if (!d.exact_agreement && d.value > bound) return false;
    }
    return true;
}

FinDimValuation cauchy_limit(const std::vector<FinDimValuation>& seq, const Rat& C) {
    if (seq.empty()) throw validation_error("cauchy_limit: empty sequence");
    for (const auto& t : seq) {
        if (!t.validated()) throw validation_error("cauchy_limit: terms must be validated");
        if (!t.same_codomain(seq.front()))
            throw validation_error("cauchy_limit: codomain changes along the sequence");
    }
    if (!cauchy_check(seq, C))
        throw validation_error("cauchy_limit: sequence fails the Cauchy bound");
    int L = int(seq.size());
    int m = 0;
    for (const auto& t : seq) m = std::max(m, t.resolution());
    size_t blocks = seq.front().dims().size();

    // sup over j of the tail-min of evaluations on the arc shrunk by 2/2^j;
    // the arc is settled when the last two thickening steps agree
    auto compute = [&](int target, bool& stable) {
        int c = 1 << target;
        int J = target + 4;
        FinDimValuation out(target, seq.front().dims());
        stable = true;
        for (int len = 1; len <= c; ++len)
            for (int s = 0; s < c; ++s) {
                FinDimValue v(blocks, ExtNat(0));
                FinDimValue before_last;
                for (int j = 1; j <= J; ++j) {
                    Rat lo = Rat(s, c) + Rat(2, 1ll << j);
                    Rat width = Rat(len, c) - Rat(4, 1ll << j);
                    FinDimValue tail_min;
                    bool first = true;
                    for (int i = std::min(j, L - 1); i < L; ++i) {
                        FinDimValue cnt(blocks, ExtNat(0));
                        if (width > Rat(0)) {
                            const auto& bl = seq[i].canonical_blocks();
                            for (size_t b = 0; b < blocks; ++b)
                                cnt[b] = ExtNat(count_in_open_arc(bl[b], lo.frac(), width));
                        }
                        if (first) { tail_min = cnt; first = false; }
                        else
                            for (size_t b = 0; b < blocks; ++b)
                                if (cnt[b] < tail_min[b]) tail_min[b] = cnt[b];
                    }
                    for (size_t b = 0; b < blocks; ++b)
                        if (tail_min[b] > v[b]) v[b] = tail_min[b];
                    if (j == J - 1) before_last = v;
                }
                if (v != before_last) stable = false;
                out.set_value(s, len, v);
            }
        return out;
    };

    bool stable = false;
    FinDimValuation out = compute(m, stable);
    bool valid = stable;
    if (stable) {
        try {
            out.validate();
        } catch (const validation_error&) {
            valid = false;
        }
    }
    if (!valid) {
        int settled = -1;
        for (int t = m - 1; t >= 0; --t) {
            bool st = false;
            FinDimValuation cand = compute(t, st);
            if (!st) continue;
            try {
                cand.validate();
                settled = t;
                break;
            } catch (const validation_error&) {
            }
        }
        throw validation_error("cauchy_limit: tail never settles at resolution " +
                               std::to_string(m) + " (deepest settled resolution " +
                               std::to_string(settled) + ")");
    }
    DistanceResult tail = dd_cu(out, seq.back());
    Rat bound = C / Rat(1ll << std::min(L, 30));
    if (tail.infinite || (!tail.exact_agreement && tail.value > bound))
        throw validation_error("cauchy_limit: limit does not converge to the tail (dd = " +
                               tail.str() + ")");
    return out;
}

// ---------------------------------------------------------------------------
// GraphValuation

GraphValuation::GraphValuation(GraphPtr g, int n, int d) : g_(std::move(g)), n_(n), d_(d) {
    if (n_ < 0 || n_ > 6) throw validation_error("valuation resolution must be in [0,6]");
    if (d_ <= 0) throw validation_error("matrix dimension must be positive");
    int c = 1 << n_;
    val_.assign(size_t(c), std::vector<GraphLsc>(size_t(c), GraphLsc(g_)));
}

GraphLsc GraphValuation::unit() const {
    return GraphLsc::constant(g_, ExtNat((unsigned long long)d_));
}

const GraphLsc& GraphValuation::value(int start, int len) const {
    int c = 1 << n_;
    if (len < 1 || len > c || start < 0 || start >= c)
        throw internal_error("arc index out of range");
    return val_[size_t(len - 1)][size_t(start)];
}

void GraphValuation::set_value(int start, int len, GraphLsc v) {
    int c = 1 << n_;
    if (len < 1 || len > c || start < 0 || start >= c)
        throw internal_error("arc index out of range");
    val_[size_t(len - 1)][size_t(start)] = std::move(v);
    samples_.clear();
}

namespace {

GraphPoint piece_representative(const Piece& p) {
    for (size_t e = 0; e < p.interior.intervals.size(); ++e)
        if (!p.interior.intervals[e].empty()) {
            const auto& in = p.interior.intervals[e][0];
            return GraphPoint::on_edge(int(e), (in.first + in.second) / Rat(2));
        }
    for (int v = 0; v < p.interior.g->num_vertices; ++v)
        if (p.interior.vertices[v]) return GraphPoint::on_vertex(v);
    throw internal_error("piece without any interior point");
}

} // namespace

void GraphValuation::validate() {
    int c = 1 << n_;
    std::vector<GraphLsc> all;
    for (int len = 1; len <= c; ++len)
        for (int s = 0; s < c; ++s) {
            const GraphLsc& f = val_[size_t(len - 1)][size_t(s)];
            f.validate();
            if (f.attains_inf())
                throw validation_error("infinite value at arc (start " + std::to_string(s) +
                                       ", len " + std::to_string(len) + ")");
            if (!f.leq(unit()))
                throw validation_error("unital bound fails at arc (start " + std::to_string(s) +
                                       ", len " + std::to_string(len) + ")");
            all.push_back(f);
        }
    ClosedCover cover = cut(g_, all);
    std::vector<GraphPoint> where;
    std::vector<bool> singular_flag;
    for (const auto& p : cover.pieces) {
        where.push_back(piece_representative(p));
        singular_flag.push_back(false);
    }
    for (const auto& sp : cover.singular) {
        where.push_back(sp.point);
        singular_flag.push_back(true);
    }
    std::vector<Sample> samples;
    for (size_t i = 0; i < where.size(); ++i) {
        const GraphPoint& x = where[i];
        std::vector<unsigned long long> q(static_cast<size_t>(c)), v2(static_cast<size_t>(c));
        for (int k = 0; k < c; ++k) q[k] = value(k, 1).at(x).value();
        if (n_ >= 1)
            for (int k = 0; k < c; ++k) v2[k] = value(k, 2).at(x).value();
        std::string where_str = " at " + x.str();
        std::vector<Angle> ms;
        if (n_ >= 1) {
            unsigned long long lhs = 0, rhs = (unsigned long long)d_;
            for (int k = 0; k < c; ++k) { lhs += v2[k]; rhs += q[k]; }
            if (lhs != rhs)
                throw validation_error("cover identity fails" + where_str);
            ms = fill_up_profile(n_, q, v2, where_str);
        } else {
            if (q[0] > (unsigned long long)d_)
                throw validation_error("unital bound fails" + where_str);
            ms = fill_up_profile(0, q, {}, where_str);
            for (unsigned long long i2 = q[0]; i2 < (unsigned long long)d_; ++i2)
                ms.push_back(Angle(Rat(0)));
        }
        if (ms.size() != size_t(d_))
            throw validation_error("fill-up entry count differs from the dimension" + where_str);
        ArcCounter counter(ms, n_);
        for (int len = 1; len <= c; ++len)
            for (int s = 0; s < c; ++s) {
                unsigned long long counted = counter.arc(s, len);
                if (ExtNat(counted) != value(s, len).at(x))
                    throw validation_error("arc consistency fails at (start " + std::to_string(s) +
                                           ", len " + std::to_string(len) + ")" + where_str);
            }
        std::sort(ms.begin(), ms.end());
        samples.push_back({x, singular_flag[i], std::move(ms)});
    }
    samples_ = std::move(samples);
}

const std::vector<GraphValuation::Sample>& GraphValuation::samples() const {
    if (!validated()) throw internal_error("samples requested before validation");
    return samples_;
}

GraphValuation GraphValuation::coarsened(int m) const {
    if (m > n_) throw resolution_error("coarsened: target resolution exceeds native");
    GraphValuation out(g_, m, d_);
    int f = 1 << (n_ - m);
    int cm = 1 << m;
    for (int len = 1; len <= cm; ++len)
        for (int s = 0; s < cm; ++s) out.set_value(s, len, value(s * f, len * f));
    return out;
}

GraphLsc GraphValuation::eval_open(const DyadicOpen& s0) const {
    DyadicOpen s = s0.refined(std::max(s0.n, n_));
    if (s.n > n_)
        throw resolution_error("graph valuation: evaluation finer than the table");
    if (s.empty()) return GraphLsc(g_);
    if (s.full()) return unit();
    GraphLsc out(g_);
    for (auto [start, len] : s.components()) out = out.plus(value(start, len));
    return out;
}

std::vector<Angle> GraphValuation::multiset_at(const GraphPoint& x) const {
    int c = 1 << n_;
    std::vector<unsigned long long> q(static_cast<size_t>(c)), v2(static_cast<size_t>(c));
    for (int k = 0; k < c; ++k) q[k] = value(k, 1).at(x).value();
    if (n_ >= 1) {
        for (int k = 0; k < c; ++k) v2[k] = value(k, 2).at(x).value();
        return fill_up_profile(n_, q, v2, " at " + x.str());
    }
    auto ms = fill_up_profile(0, q, {}, "");
    for (unsigned long long i = q[0]; i < (unsigned long long)d_; ++i)
        ms.push_back(Angle(Rat(0)));
    return ms;
}

namespace {

struct PointPair {
    GraphPoint at;
    std::vector<Angle> ms_a;
    std::vector<Angle> ms_b;
};

std::vector<Angle> multiset_at(const GraphValuation& a, const GraphPoint& x) {
    return a.multiset_at(x);
}

std::vector<PointPair> combined_samples(const GraphValuation& a, const GraphValuation& b) {
    if (a.graph()->num_vertices != b.graph()->num_vertices ||
        a.graph()->edges.size() != b.graph()->edges.size())
        throw validation_error("graph valuations live on different graphs");
    if (a.dim() != b.dim())
        throw validation_error("graph valuations have different matrix dimensions");
    if (!a.validated() || !b.validated())
        throw validation_error("graph comparison needs validated valuations");
    std::vector<GraphLsc> all;
    int ca = 1 << a.resolution(), cb = 1 << b.resolution();
    for (int len = 1; len <= ca; ++len)
        for (int s = 0; s < ca; ++s) all.push_back(a.value(s, len));
    for (int len = 1; len <= cb; ++len)
        for (int s = 0; s < cb; ++s) all.push_back(b.value(s, len));
    ClosedCover cover = cut(a.graph(), all);
    std::vector<PointPair> out;
    for (const auto& p : cover.pieces) {
        GraphPoint x = piece_representative(p);
        out.push_back({x, multiset_at(a, x), multiset_at(b, x)});
    }
    for (const auto& sp : cover.singular)
        out.push_back({sp.point, multiset_at(a, sp.point), multiset_at(b, sp.point)});
    for (auto& pp : out) {
        std::sort(pp.ms_a.begin(), pp.ms_a.end());
        std::sort(pp.ms_b.begin(), pp.ms_b.end());
    }
    return out;
}

} // namespace

bool compare_on_lambda(const GraphValuation& a, const GraphValuation& b, int n) {
    auto pts = combined_samples(a, b);
    for (const auto& pp : pts)
        if (!multisets_compare(pp.ms_a, pp.ms_b, n)) return false;
    return true;
}

DistanceResult dd_cu(const GraphValuation& a, const GraphValuation& b) {
    auto pts = combined_samples(a, b);
    int cap = std::max(a.resolution(), b.resolution()) + 2;
    for (const auto& pp : pts)
        cap = isolation_cap({pp.ms_a}, {pp.ms_b}, cap);
    auto cmp = [&](int n) {
        for (const auto& pp : pts)
            if (!multisets_compare(pp.ms_a, pp.ms_b, n)) return false;
        return true;
    };
    auto equal = [&] {
        for (const auto& pp : pts)
            if (pp.ms_a != pp.ms_b) return false;
        return true;
    };
    return dd_generic(cap, cmp, equal);
}

DistanceResult d_cu(const GraphValuation& a, const GraphValuation& b) {
    auto pts = combined_samples(a, b);
    DistanceResult res;
    Rat best(0);
    for (const auto& pp : pts) {
        Rat r = multiset_bottleneck(pp.ms_a, pp.ms_b);
        if (r > best) best = r;
    }
    res.value = best;
    res.exact_agreement = best.is_zero();
    return res;
}

// ---------------------------------------------------------------------------
// CuZValuation

CuZValuation::CuZValuation(int n) : n_(n), unit_(CuZElement::compact(1)) {
    if (n_ < 0 || n_ > 6) throw validation_error("valuation resolution must be in [0,6]");
    int c = 1 << n_;
    val_.assign(size_t(c), std::vector<CuZElement>(size_t(c), CuZElement::zero()));
}

const CuZElement& CuZValuation::value(int start, int len) const {
    int c = 1 << n_;
    if (len < 1 || len > c || start < 0 || start >= c)
        throw internal_error("arc index out of range");
    return val_[size_t(len - 1)][size_t(start)];
}

void CuZValuation::set_value(int start, int len, CuZElement v) {
    int c = 1 << n_;
    if (len < 1 || len > c || start < 0 || start >= c)
        throw internal_error("arc index out of range");
    val_[size_t(len - 1)][size_t(start)] = std::move(v);
}

void CuZValuation::validate() const {
    int c = 1 << n_;
    for (int len = 1; len < c; ++len)
        for (int s = 0; s < c; ++s) {
            if (!leq(value(s, len), value(s, len + 1)) ||
                !leq(value(s, len), value((s + c - 1) % c, len + 1)))
                throw validation_error("monotonicity fails at arc (start " + std::to_string(s) +
                                       ", len " + std::to_string(len) + ")");
        }
    for (int s = 0; s < c; ++s)
        if (!leq(value(s, c), unit_))
            throw validation_error("unital bound fails at arc start " + std::to_string(s));
    if (n_ >= 1) {
        CuZElement lhs = CuZElement::zero(), rhs = unit_;
        for (int s = 0; s < c; ++s) {
            lhs = lhs + value(s, 2);
            rhs = rhs + value(s, 1);
        }
        if (lhs != rhs) throw validation_error("cover identity fails (CuZ sums differ)");
    }
}

CuZElement CuZValuation::eval_open(const DyadicOpen& s0) const {
    DyadicOpen s = s0.refined(std::max(s0.n, n_));
    if (s.n > n_) throw resolution_error("CuZ valuation: evaluation finer than the table");
    if (s.empty()) return CuZElement::zero();
    if (s.full()) return unit_;
    CuZElement out = CuZElement::zero();
    for (auto [start, len] : s.components()) out = out + value(start, len);
    return out;
}

bool CuZValuation::operator==(const CuZValuation& o) const {
    if (n_ != o.n_ || !(unit_ == o.unit_)) return false;
    int c = 1 << n_;
    for (int len = 1; len <= c; ++len)
        for (int s = 0; s < c; ++s)
            if (!(value(s, len) == o.value(s, len))) return false;
    return true;
}

bool compare_on_lambda(const CuZValuation& a, const CuZValuation& b, int n) {
    if (n > a.resolution() || n > b.resolution())
        throw resolution_error("compare: lattice finer than the CuZ table");
    auto evalA = [&](const DyadicOpen& s) { return a.eval_open(s); };
    auto evalB = [&](const DyadicOpen& s) { return b.eval_open(s); };
    return compare_masks(n, evalA, evalB,
                         [](const CuZElement& x, const CuZElement& y) { return leq(x, y); });
}

DistanceResult dd_cu(const CuZValuation& a, const CuZValuation& b) {
    int cap = std::min({a.resolution(), b.resolution(), 4});
    return dd_generic(cap, [&](int n) { return compare_on_lambda(a, b, n); },
                      [&] { return a == b; });
}

} // namespace culift
