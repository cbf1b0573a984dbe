#pragma once

#include "culift/circle.hpp"
#include "culift/cuz.hpp"
#include "culift/graph_space.hpp"

#include <optional>
#include <string>
#include <vector>

namespace culift {

/// Value in the Cuntz semigroup of a finite-dimensional algebra: one count
/// per matrix block, componentwise order and addition.
using FinDimValue = std::vector<ExtNat>;

FinDimValue fd_add(const FinDimValue& a, const FinDimValue& b);
bool fd_leq(const FinDimValue& a, const FinDimValue& b);

/// Result of a semimetric computation. `value` is exact; exact_agreement
/// marks coincidence on every tested lattice (reported as distance 0), and
/// at_resolution_cap marks an infimum cut off by the representable
/// resolution rather than resolved.
struct DistanceResult {
    bool infinite = false;
    bool exact_agreement = false;
    bool at_resolution_cap = false;
    Rat value;
    int level = -1; // deepest lattice on which the pair compares (dd only)

    std::string str() const;
};

/// A Cu-morphism out of Lsc(T, N-bar) with codomain N^r, presented by its
/// values on the connected arc generators of Lambda_n. The table holds one
/// value per open dyadic arc (start breakpoint, length in cells,
/// length <= 2^n); length 2^n is the circle minus one breakpoint. The unit
/// is the value at the constant function 1.
///
/// A validated valuation carries its canonical angle multisets: the
/// diagonal produced by the fill-up construction, whose spectral counts
/// reproduce the table exactly. Those multisets define the valuation's
/// values at every finer resolution.
class FinDimValuation {
public:
    FinDimValuation(int n, std::vector<int> dims);
    static FinDimValuation from_multisets(int n, const std::vector<std::vector<Angle>>& blocks);

    int resolution() const { return n_; }
    const std::vector<int>& dims() const { return dims_; }
    int block_count() const { return int(dims_.size()); }
    const FinDimValue& unit() const { return unit_; }

    const FinDimValue& value(int start, int len) const;
    void set_value(int start, int len, FinDimValue v);

    /// Checks the stored table against every named invariant (monotone,
    /// unital bound, cover identity, superadditivity / fill-up positivity,
    /// arc consistency) and freezes the canonical multisets. Throws
    /// validation_error naming the violated constraint and index.
    void validate();
    bool validated() const { return !blocks_.empty(); }
    const std::vector<std::vector<Angle>>& canonical_blocks() const;

    /// Evaluation through the stored table; the set is refined to the native
    /// resolution. Errors if the set is finer than the table and the
    /// valuation is not validated.
    FinDimValue eval_open(const DyadicOpen& s) const;

    /// Evaluation of a connected arc at any resolution through the canonical
    /// multisets (validated only). len in cells at `res`; len == 2^res means
    /// the circle minus the start breakpoint.
    FinDimValue eval_arc(int res, int start, int len) const;

    FinDimValuation coarsened(int m) const;
    bool same_codomain(const FinDimValuation& o) const { return dims_ == o.dims_; }

private:
    int n_;
    std::vector<int> dims_;
    FinDimValue unit_;
    std::vector<std::vector<FinDimValue>> val_; // [len-1][start]
    std::vector<std::vector<Angle>> blocks_;    // canonical multisets once validated
};

/// evaluate(alpha, g): sum of arc values over the connected components of
/// the support of a Lambda element.
FinDimValue evaluate(const FinDimValuation& a, const StepLsc& lambda_elt);

/// Def-2.3 comparison on Lambda_n: for all g << h in Lambda_n,
/// alpha(g) <= beta(h) and beta(g) <= alpha(h).
bool compare_on_lambda(const FinDimValuation& a, const FinDimValuation& b, int n);

/// Discrete Cu-semimetric: inf over n of 1/2^n such that the pair compares
/// on Lambda_n. Exact agreement of the canonical data reports 0.
DistanceResult dd_cu(const FinDimValuation& a, const FinDimValuation& b);

/// Cu-metric: least radius r with alpha(1_U) <= beta(1_{U_r}) and
/// symmetrically for every open U. For validated finite-dimensional data
/// this is the bottleneck matching distance of the canonical multisets,
/// which the scan over grid radii attains exactly.
DistanceResult d_cu(const FinDimValuation& a, const FinDimValuation& b);

/// Literal grid scan of the Cu-metric at working resolution w (kept as the
/// independent route for cross-checks; cost grows like 2^(2^w)).
DistanceResult d_cu_scan(const FinDimValuation& a, const FinDimValuation& b, int w);

/// Geometric Cauchy test: dd(alpha_{i}, alpha_{i+1}) <= C / 2^(i+2) for
/// consecutive terms (terms indexed from 1 in the bound).
bool cauchy_check(const std::vector<FinDimValuation>& seq, const Rat& C);

/// Tail-stabilized limit of a Cauchy sequence of finite-dimensional
/// valuations at the deepest shared resolution. Signals non-stabilization
/// naming the deepest settled resolution.
FinDimValuation cauchy_limit(const std::vector<FinDimValuation>& seq, const Rat& C);

// ---------------------------------------------------------------------------

/// Cu-morphism into the Cuntz semigroup of M_d(C(X)) for a metric graph X:
/// the table stores one GraphLsc per connected arc generator.
class GraphValuation {
public:
    GraphValuation(GraphPtr g, int n, int d);

    int resolution() const { return n_; }
    int dim() const { return d_; }
    GraphPtr graph() const { return g_; }
    GraphLsc unit() const;

    const GraphLsc& value(int start, int len) const;
    void set_value(int start, int len, GraphLsc v);

    struct Sample {
        GraphPoint at;
        bool singular = false;
        std::vector<Angle> angles; // canonical multiset at the point
    };

    void validate();
    bool validated() const { return !samples_.empty(); }
    const std::vector<Sample>& samples() const;

    /// Canonical fill-up multiset of the integer profile at a point.
    std::vector<Angle> multiset_at(const GraphPoint& x) const;

    GraphLsc eval_open(const DyadicOpen& s) const;
    GraphValuation coarsened(int m) const;

private:
    GraphPtr g_;
    int n_;
    int d_;
    std::vector<std::vector<GraphLsc>> val_;
    std::vector<Sample> samples_;
};

bool compare_on_lambda(const GraphValuation& a, const GraphValuation& b, int n);
DistanceResult dd_cu(const GraphValuation& a, const GraphValuation& b);
DistanceResult d_cu(const GraphValuation& a, const GraphValuation& b);

// ---------------------------------------------------------------------------

/// Cu-morphism into Cu(Z), table-backed. Comparisons run through the
/// arc-subset route and are capped at resolution 4.
class CuZValuation {
public:
    CuZValuation(int n);

    int resolution() const { return n_; }
    const CuZElement& unit() const { return unit_; }
    void set_unit(CuZElement u) { unit_ = std::move(u); }
    const CuZElement& value(int start, int len) const;
    void set_value(int start, int len, CuZElement v);

    void validate() const; // monotonicity + cover identity
    CuZElement eval_open(const DyadicOpen& s) const;
    bool operator==(const CuZValuation& o) const;

private:
    int n_;
    CuZElement unit_;
    std::vector<std::vector<CuZElement>> val_;
};

bool compare_on_lambda(const CuZValuation& a, const CuZValuation& b, int n);
DistanceResult dd_cu(const CuZValuation& a, const CuZValuation& b);

// ---------------------------------------------------------------------------
// shared internals, exposed for the spectral module and for tests

/// Membership of b in the one-cell thickening of the minimal open dyadic
/// set at resolution n containing a (the reach set of the matching
/// characterization of compare-on-Lambda).
bool in_reach(const Angle& a, const Angle& b, int n);

/// Both-direction perfect-matching test between two multisets under the
/// reach adjacency; equivalent to comparing their counting valuations on
/// Lambda_n.
bool multisets_compare(const std::vector<Angle>& A, const std::vector<Angle>& B, int n);

/// Bottleneck matching distance (min over bijections of the max arc
/// distance); block dimension mismatch is a validation error.
Rat multiset_bottleneck(const std::vector<Angle>& A, const std::vector<Angle>& B);

/// Angle multiset reconstructed by the fill-up rule from per-point integer
/// data q_k (arc counts) and v_k (two-cell arc counts). Throws naming the
/// failed constraint when some multiplicity would be negative.
std::vector<Angle> fill_up_profile(int n, const std::vector<unsigned long long>& q,
                                   const std::vector<unsigned long long>& v,
                                   const std::string& where);

unsigned long long count_in_open_arc(const std::vector<Angle>& ms, const Rat& lo, const Rat& len);

/// Prefix-sum counting of a fixed multiset against the resolution-n grid:
/// every open dyadic arc count in O(1) after O(d + 2^n) setup.
class ArcCounter {
public:
    ArcCounter(const std::vector<Angle>& ms, int n);
    unsigned long long arc(int start, int len) const; // open arc, len in 1..2^n
    unsigned long long open_set(const DyadicOpen& s) const;
    unsigned long long total() const { return total_; }

private:
    int n_;
    unsigned long long total_;
    std::vector<unsigned long long> pref_cell_; // arcs strictly containing angles
    std::vector<unsigned long long> pref_bp_;   // angles sitting on breakpoints
};

} // namespace culift
