#pragma once

#include "culift/rational.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace culift {

/// A point of the circle T with circumference 1, represented by its
/// normalized angle in [0,1). All distances are arc-length.
class Angle {
public:
    Angle() : v_(0) {}
    explicit Angle(const Rat& r) : v_(r.frac()) {}

    const Rat& value() const { return v_; }

    friend bool operator==(const Angle& a, const Angle& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Angle& a, const Angle& b) { return a.v_ != b.v_; }
    friend bool operator<(const Angle& a, const Angle& b) { return a.v_ < b.v_; }

    std::string str() const { return v_.str(); }

private:
    Rat v_;
};

/// min(|a-b|, 1-|a-b|), the geodesic distance on the circumference-1 circle.
Rat arc_dist(const Angle& a, const Angle& b);

/// True when the angle lies in the open arc (lo, lo+len) taken mod 1,
/// 0 < len <= 1. len = 1 means the full circle minus the point lo.
bool in_open_arc(const Angle& a, const Rat& lo, const Rat& len);

/// An open subset of T at dyadic resolution n, stored as membership bits for
/// the 2^n open arcs U_i = (x_i, x_{i+1}) and the 2^n breakpoints x_i = i/2^n.
/// Openness: a breakpoint bit requires both neighbouring arc bits.
struct DyadicOpen {
    int n = 0;
    uint64_t arcs = 0;
    uint64_t pts = 0;

    int cells() const { return 1 << n; }
    bool arc(int i) const { return (arcs >> i) & 1; }
    bool pt(int i) const { return (pts >> i) & 1; }
    bool empty() const { return arcs == 0 && pts == 0; }
    bool full() const;

    bool operator==(const DyadicOpen& o) const {
        return n == o.n && arcs == o.arcs && pts == o.pts;
    }

    /// Adds every breakpoint whose two neighbouring arcs are present.
    /// This is the support of the largest lambda element with these arcs.
    static DyadicOpen from_arcs(int n, uint64_t arc_mask);

    bool is_open() const;

    /// Subset as point sets.
    bool subset_of(const DyadicOpen& o) const {
        return (arcs & ~o.arcs) == 0 && (pts & ~o.pts) == 0;
    }

    /// Closure: adds the endpoints of every present arc. Returned mask pair
    /// is no longer an open set; pts carries the closure's breakpoints.
    DyadicOpen closure() const;

    /// Expands every connected component by k cells of width 1/2^n on each
    /// side (open thickening by exactly k/2^n). Wraps to the full circle when
    /// a component reaches length >= 1.
    DyadicOpen thicken_cells(int k) const;

    /// Shrinks by k cells per side: the largest open dyadic set V with
    /// V thickened by k cells still inside this set.
    DyadicOpen shrink_cells(int k) const;

    /// Connected components as (start breakpoint index, length in cells).
    /// A component of length 2^n is the full circle minus one breakpoint.
    /// The full circle itself yields the single component {0, 2^n} with
    /// full() true.
    std::vector<std::pair<int, int>> components() const;

    DyadicOpen refined(int m) const; // to finer resolution m >= n
};

/// A lower-semicontinuous step function T -> N u {inf} at dyadic resolution
/// n: constant on each open arc U_i, an explicit value at each breakpoint.
/// Lower semicontinuity pins pt[i] <= min(arc[i-1], arc[i]).
class StepLsc {
public:
    StepLsc() : n_(0), arc_(1), pt_(1) {}
    StepLsc(int n, std::vector<ExtNat> arc, std::vector<ExtNat> pt);

    static StepLsc constant(int n, ExtNat v);
    static StepLsc zero(int n) { return constant(n, ExtNat(0)); }
    static StepLsc one(int n) { return constant(n, ExtNat(1)); }
    /// Indicator of an open dyadic set.
    static StepLsc indicator(const DyadicOpen& s);

    int resolution() const { return n_; }
    int cells() const { return 1 << n_; }
    ExtNat arc(int i) const { return arc_[i]; }
    ExtNat pt(int i) const { return pt_[i]; }

    /// Pointwise value at an angle; the angle must be representable on some
    /// dyadic grid (used by tests and field sampling).
    ExtNat at(const Angle& a) const;

    bool is_lambda() const; // {0,1}-valued
    DyadicOpen support() const;

    /// Largest value attained; error if infinity is attained.
    ExtNat max() const;
    bool attains_inf() const;

    StepLsc refined(int m) const;
    static void common_resolution(StepLsc& f, StepLsc& g);

    /// Level set {f >= l} as an open dyadic set (open by semicontinuity).
    DyadicOpen level_set(ExtNat l) const;

    bool leq(const StepLsc& g) const;         // pointwise, auto-refining
    bool operator==(const StepLsc& g) const;  // pointwise equality
    StepLsc plus(const StepLsc& g) const;

private:
    int n_;
    std::vector<ExtNat> arc_;
    std::vector<ExtNat> pt_;
};

/// f << g in Lsc(T, N-bar): f finite-valued and, for every level l >= 1,
/// closure of {f >= l} contained in {g >= l}. Total on valid inputs.
bool way_below(const StepLsc& f, const StepLsc& g);

/// Levelwise open thickening by a dyadic radius r = m/2^p: the result g has
/// {g >= l} = ({f >= l})_r for every l; equivalently g(x) = sup of f over
/// the open ball B_r(x). r = 0 returns f unchanged.
StepLsc thicken(const StepLsc& f, const Rat& r);

/// The decreasing level indicators (1_{W_1}, ..., 1_{W_M}), W_l = {f >= l}.
/// Empty for f = 0; error if f attains infinity.
std::vector<StepLsc> chain_decomposition(const StepLsc& f);

/// One element of Lambda_n together with its support components.
struct LambdaElement {
    StepLsc fn;
    DyadicOpen supp;
    std::vector<std::pair<int, int>> components;
};

/// Visits every element of Lambda_n exactly once. Order: by arc mask, then
/// by the subset of optional breakpoints. The count grows like 2.62^(2^n);
/// callers should stay at n <= 4.
void for_each_lambda(int n, const std::function<void(const LambdaElement&)>& visit);

/// Materialized enumeration for small n (n <= 3 enforced).
std::vector<LambdaElement> lambda_generators(int n);

} // namespace culift
