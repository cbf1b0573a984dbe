#include "culift/circle.hpp"

#include <algorithm>
#include <ostream>

namespace culift {

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }
std::ostream& operator<<(std::ostream& os, const ExtNat& e) { return os << e.str(); }

Rat Rat::parse(const std::string& s) {
    auto bad = [&] { throw validation_error("malformed rational: '" + s + "'"); };
    if (s.empty()) bad();
    size_t slash = s.find('/');
    try {
        size_t used = 0;
        long long num = std::stoll(s.substr(0, slash), &used);
        if (used != (slash == std::string::npos ? s.size() : slash)) bad();
        long long den = 1;
        if (slash != std::string::npos) {
            den = std::stoll(s.substr(slash + 1), &used);
            if (used != s.size() - slash - 1) bad();
            if (den == 0) bad();
        }
        return Rat(num, den);
    } catch (const std::invalid_argument&) {
        bad();
    } catch (const std::out_of_range&) {
        bad();
    }
    return Rat(); // unreachable
}

Rat arc_dist(const Angle& a, const Angle& b) {
    Rat d = (a.value() - b.value()).abs();
    Rat other = Rat(1) - d;
    return d < other ? d : other;
}

bool in_open_arc(const Angle& a, const Rat& lo, const Rat& len) {
    if (len <= Rat(0) || len > Rat(1)) throw internal_error("arc length out of range");
    Rat rel = (a.value() - lo).frac();
    return Rat(0) < rel && rel < len;
}

// ---------------------------------------------------------------------------
// DyadicOpen

static uint64_t full_mask(int n) {
    int c = 1 << n;
    return c == 64 ? ~0ull : ((1ull << c) - 1);
}

bool DyadicOpen::full() const {
    return arcs == full_mask(n) && pts == full_mask(n);
}

DyadicOpen DyadicOpen::from_arcs(int n, uint64_t arc_mask) {
    if (n > 6) throw internal_error("DyadicOpen limited to resolution 6");
    DyadicOpen s;
    s.n = n;
    s.arcs = arc_mask & full_mask(n);
    int c = 1 << n;
    for (int i = 0; i < c; ++i) {
        int prev = (i + c - 1) % c;
        if (s.arc(prev) && s.arc(i)) s.pts |= 1ull << i;
    }
    return s;
}

bool DyadicOpen::is_open() const {
    int c = 1 << n;
    for (int i = 0; i < c; ++i) {
        int prev = (i + c - 1) % c;
        if (pt(i) && !(arc(prev) && arc(i))) return false;
    }
    return true;
}

DyadicOpen DyadicOpen::closure() const {
    DyadicOpen s = *this;
    int c = 1 << n;
    for (int i = 0; i < c; ++i) {
        if (arc(i)) {
            s.pts |= 1ull << i;
            s.pts |= 1ull << ((i + 1) % c);
        }
    }
    return s;
}

DyadicOpen DyadicOpen::thicken_cells(int k) const {
    if (k <= 0) return *this;
    int c = 1 << n;
    DyadicOpen s;
    s.n = n;
    if (empty()) return s;
    auto comps = components();
    for (auto [start, len] : comps) {
        int lo = start - k, hi = start + len + k; // arcs lo..hi-1, pts lo+1..hi-1
        if (hi - lo >= c) { s.arcs = full_mask(n); s.pts = full_mask(n); return s; }
        for (int a = lo; a < hi; ++a) s.arcs |= 1ull << ((a % c + c) % c);
        for (int p = lo + 1; p < hi; ++p) s.pts |= 1ull << ((p % c + c) % c);
    }
    // merged components regain interior breakpoints
    for (int i = 0; i < c; ++i) {
        int prev = (i + c - 1) % c;
        if (s.arc(prev) && s.arc(i)) s.pts |= 1ull << i;
    }
    return s;
}

DyadicOpen DyadicOpen::shrink_cells(int k) const {
    if (k <= 0) return *this;
    int c = 1 << n;
    DyadicOpen s;
    s.n = n;
    if (full()) return *this;
    auto comps = components();
    for (auto [start, len] : comps) {
        if (len > 2 * k) {
            int lo = start + k, hi = start + len - k;
            for (int a = lo; a < hi; ++a) s.arcs |= 1ull << (a % c);
            for (int p = lo + 1; p < hi; ++p) s.pts |= 1ull << (p % c);
        }
    }
    return s;
}

std::vector<std::pair<int, int>> DyadicOpen::components() const {
    std::vector<std::pair<int, int>> out;
    int c = 1 << n;
    if (empty()) return out;
    if (full()) { out.emplace_back(0, c); return out; }
    // walk arcs; a component continues through a contained breakpoint
    std::vector<bool> seen(c, false);
    for (int i = 0; i < c; ++i) {
        if (!arc(i) || seen[i]) continue;
        // extend left while the breakpoint at the arc start is included
        int start = i;
        while (pt(start % c) && arc((start + c - 1) % c)) {
            start = (start + c - 1) % c;
            if (start == i) break; // circle minus nothing handled by full()
        }
        int len = 0;
        int a = start;
        while (arc(a) && len < c) {
            seen[a] = true;
            ++len;
            int next = (a + 1) % c;
            if (!pt(next)) break;
            a = next;
        }
        out.emplace_back(start, len);
    }
    std::sort(out.begin(), out.end());
    return out;
}

DyadicOpen DyadicOpen::refined(int m) const {
    if (m < n) throw resolution_error("cannot coarsen a dyadic open set");
    if (m == n) return *this;
    if (m > 6) throw internal_error("DyadicOpen limited to resolution 6");
    int f = 1 << (m - n);
    DyadicOpen s;
    s.n = m;
    int c = 1 << n;
    for (int i = 0; i < c; ++i) {
        if (arc(i)) {
            for (int j = 0; j < f; ++j) s.arcs |= 1ull << (i * f + j);
            for (int j = 1; j < f; ++j) s.pts |= 1ull << (i * f + j);
        }
        if (pt(i)) s.pts |= 1ull << (i * f);
    }
    return s;
}

// ---------------------------------------------------------------------------
// StepLsc

StepLsc::StepLsc(int n, std::vector<ExtNat> arc, std::vector<ExtNat> pt)
    : n_(n), arc_(std::move(arc)), pt_(std::move(pt)) {
    size_t c = size_t(1) << n;
    if (arc_.size() != c || pt_.size() != c)
        throw validation_error("StepLsc: value arrays must have 2^n entries");
    for (size_t i = 0; i < c; ++i) {
        size_t prev = (i + c - 1) % c;
        if (pt_[i] > arc_[prev] || pt_[i] > arc_[i])
            throw validation_error(
                "StepLsc: lower semicontinuity fails at breakpoint " + std::to_string(i));
    }
}

StepLsc StepLsc::constant(int n, ExtNat v) {
    size_t c = size_t(1) << n;
    return StepLsc(n, std::vector<ExtNat>(c, v), std::vector<ExtNat>(c, v));
}

StepLsc StepLsc::indicator(const DyadicOpen& s) {
    if (!s.is_open()) throw validation_error("indicator of a non-open dyadic set");
    size_t c = size_t(1) << s.n;
    std::vector<ExtNat> arc(c), pt(c);
    for (size_t i = 0; i < c; ++i) {
        arc[i] = ExtNat(s.arc(int(i)) ? 1 : 0);
        pt[i] = ExtNat(s.pt(int(i)) ? 1 : 0);
    }
    return StepLsc(s.n, std::move(arc), std::move(pt));
}

ExtNat StepLsc::at(const Angle& a) const {
    Rat scaled = a.value() * Rat(cells());
    if (scaled.is_integer()) return pt_[size_t(scaled.floor()) % size_t(cells())];
    return arc_[size_t(scaled.floor()) % size_t(cells())];
}

bool StepLsc::is_lambda() const {
    ExtNat one(1);
    for (auto v : arc_) if (v > one) return false;
    for (auto v : pt_) if (v > one) return false;
    return true;
}

DyadicOpen StepLsc::support() const {
    if (n_ > 6) throw internal_error("support masks limited to resolution 6");
    DyadicOpen s;
    s.n = n_;
    for (int i = 0; i < cells(); ++i) {
        if (arc_[i] > ExtNat(0)) s.arcs |= 1ull << i;
        if (pt_[i] > ExtNat(0)) s.pts |= 1ull << i;
    }
    return s;
}

ExtNat StepLsc::max() const {
    ExtNat m(0);
    for (auto v : arc_) if (v > m) m = v;
    for (auto v : pt_) if (v > m) m = v;
    return m;
}

bool StepLsc::attains_inf() const {
    for (auto v : arc_) if (v.is_inf()) return true;
    for (auto v : pt_) if (v.is_inf()) return true;
    return false;
}

StepLsc StepLsc::refined(int m) const {
    if (m < n_) throw resolution_error("cannot coarsen a step function");
    if (m == n_) return *this;
    int f = 1 << (m - n_);
    size_t c = size_t(1) << m;
    std::vector<ExtNat> arc(c), pt(c);
    for (int i = 0; i < cells(); ++i) {
        for (int j = 0; j < f; ++j) {
            arc[size_t(i) * f + j] = arc_[i];
            pt[size_t(i) * f + j] = j == 0 ? pt_[i] : arc_[i];
        }
    }
    StepLsc r;
    r.n_ = m;
    r.arc_ = std::move(arc);
    r.pt_ = std::move(pt);
    return r;
}

void StepLsc::common_resolution(StepLsc& f, StepLsc& g) {
    int m = std::max(f.n_, g.n_);
    f = f.refined(m);
    g = g.refined(m);
}

DyadicOpen StepLsc::level_set(ExtNat l) const {
    if (n_ > 6) throw internal_error("level-set masks limited to resolution 6");
    DyadicOpen s;
    s.n = n_;
    for (int i = 0; i < cells(); ++i) {
        if (arc_[i] >= l) s.arcs |= 1ull << i;
        if (pt_[i] >= l) s.pts |= 1ull << i;
    }
    return s;
}

bool StepLsc::leq(const StepLsc& g) const {
    StepLsc a = *this, b = g;
    common_resolution(a, b);
    for (int i = 0; i < a.cells(); ++i)
        if (a.arc_[i] > b.arc_[i] || a.pt_[i] > b.pt_[i]) return false;
    return true;
}

bool StepLsc::operator==(const StepLsc& g) const {
    StepLsc a = *this, b = g;
    common_resolution(a, b);
    return a.arc_ == b.arc_ && a.pt_ == b.pt_;
}

StepLsc StepLsc::plus(const StepLsc& g) const {
    StepLsc a = *this, b = g;
    common_resolution(a, b);
    for (int i = 0; i < a.cells(); ++i) {
        a.arc_[i] += b.arc_[i];
        a.pt_[i] += b.pt_[i];
    }
    return a;
}

// ---------------------------------------------------------------------------
// operations

bool way_below(const StepLsc& f0, const StepLsc& g0) {
    if (f0.attains_inf()) return false;
    StepLsc f = f0, g = g0;
    StepLsc::common_resolution(f, g);
    unsigned long long m = f.max().value();
    for (unsigned long long l = 1; l <= m; ++l) {
        DyadicOpen w = f.level_set(ExtNat(l));
        DyadicOpen z = g.level_set(ExtNat(l));
        if (!w.closure().subset_of(z)) return false;
    }
    return true;
}

StepLsc thicken(const StepLsc& f, const Rat& r) {
    if (r < Rat(0)) throw validation_error("thicken: negative radius");
    if (r.is_zero()) return f;
    int p = 0;
    if (!r.dyadic_exponent(p))
        throw resolution_error("thicken: radius " + r.str() + " is not dyadic");
    int m = std::max(f.resolution(), p);
    StepLsc g = f.refined(m);
    int c = g.cells();
    long long k = (r * Rat(c)).floor(); // r = k/2^m exactly
    if (Rat(k, c) != r) throw internal_error("thicken: radius/grid mismatch");

    // g'(x) = sup f over the open ball B_r(x); computed on half-cell indices
    // 0..2c-1 where even = breakpoint, odd = arc interior.
    auto cell_value = [&](long long h) -> ExtNat {
        h = ((h % (2 * c)) + 2 * c) % (2 * c);
        return h % 2 == 0 ? g.pt(int(h / 2)) : g.arc(int(h / 2));
    };
    std::vector<ExtNat> arc(static_cast<size_t>(c)), pt(static_cast<size_t>(c));
    // ball around breakpoint i: (i - k, i + k)/2^m -> half-cells strictly
    // between 2(i-k) and 2(i+k); around arc i: (i - k, i + 1 + k)/2^m.
    for (int i = 0; i < c; ++i) {
        ExtNat best(0);
        long long lo = 2ll * (i - k), hi = 2ll * (i + k); // exclusive bounds
        for (long long h = lo + 1; h < hi && h - lo <= 2ll * 2 * c; ++h) {
            ExtNat v = cell_value(h);
            if (v > best) best = v;
        }
        pt[i] = best;
        best = ExtNat(0);
        lo = 2ll * i - 2ll * k;
        hi = 2ll * (i + 1) + 2ll * k;
        for (long long h = lo + 1; h < hi && h - lo <= 2ll * 2 * c + 2; ++h) {
            ExtNat v = cell_value(h);
            if (v > best) best = v;
        }
        arc[i] = best;
    }
    return StepLsc(m, std::move(arc), std::move(pt));
}

std::vector<StepLsc> chain_decomposition(const StepLsc& f) {
    if (f.attains_inf())
        throw validation_error("chain decomposition: function attains infinity");
    std::vector<StepLsc> out;
    unsigned long long m = f.max().value();
    for (unsigned long long l = 1; l <= m; ++l)
        out.push_back(StepLsc::indicator(f.level_set(ExtNat(l))));
    return out;
}

void for_each_lambda(int n, const std::function<void(const LambdaElement&)>& visit) {
    if (n > 4) throw validation_error("lambda enumeration limited to n <= 4");
    int c = 1 << n;
    uint64_t top = full_mask(n);
    for (uint64_t arcs = 0; ; ++arcs) {
        // breakpoints with both neighbours present are free; others forced 0
        std::vector<int> free_pts;
        for (int i = 0; i < c; ++i) {
            int prev = (i + c - 1) % c;
            if (((arcs >> prev) & 1) && ((arcs >> i) & 1)) free_pts.push_back(i);
        }
        uint64_t subsets = 1ull << free_pts.size();
        for (uint64_t sub = 0; sub < subsets; ++sub) {
            DyadicOpen s;
            s.n = n;
            s.arcs = arcs;
            for (size_t j = 0; j < free_pts.size(); ++j)
                if ((sub >> j) & 1) s.pts |= 1ull << free_pts[j];
            LambdaElement e;
            e.fn = StepLsc::indicator(s);
            e.supp = s;
            e.components = s.components();
            visit(e);
        }
        if (arcs == top) break;
    }
}

std::vector<LambdaElement> lambda_generators(int n) {
    if (n > 3) throw validation_error("materialized Lambda_n limited to n <= 3");
    std::vector<LambdaElement> out;
    for_each_lambda(n, [&](const LambdaElement& e) { out.push_back(e); });
    return out;
}

} // namespace culift
