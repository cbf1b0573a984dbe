#pragma once

#include "culift/rational.hpp"

#include <optional>
#include <string>

namespace culift {

/// An element of Cu(Z) = N disjoint-union (0,inf]: either Compact(n), n in N,
/// or Soft(x) with x rational > 0 or infinite. Mixed order: Soft(x) <=
/// Compact(n) iff x <= n, Compact(n) <= Soft(x) iff n < x. Any sum touching
/// a soft element is soft.
class CuZElement {
public:
    static CuZElement compact(unsigned long long n) {
        CuZElement e;
        e.soft_ = false;
        e.fin_ = Rat((long long)n);
        return e;
    }
    static CuZElement soft(const Rat& x) {
        if (!(x > Rat(0))) throw validation_error("CuZ: soft value must be positive");
        CuZElement e;
        e.soft_ = true;
        e.fin_ = x;
        return e;
    }
    static CuZElement soft_inf() {
        CuZElement e;
        e.soft_ = true;
        e.inf_ = true;
        return e;
    }
    static CuZElement zero() { return compact(0); }

    bool is_soft() const { return soft_; }
    bool is_compact() const { return !soft_; }
    bool is_inf() const { return inf_; }
    Rat value() const {
        if (inf_) throw internal_error("CuZ: finite value requested from infinity");
        return fin_;
    }

    friend CuZElement operator+(const CuZElement& a, const CuZElement& b) {
        if (a.soft_ || b.soft_) {
            if (a.inf_ || b.inf_) return soft_inf();
            Rat s = a.fin_ + b.fin_;
            if (!(s > Rat(0))) return b.soft_ ? b : a; // 0 + soft = soft
            return soft(s);
        }
        return compact((unsigned long long)(a.fin_ + b.fin_).num());
    }

    friend bool operator==(const CuZElement& a, const CuZElement& b) {
        return a.soft_ == b.soft_ && a.inf_ == b.inf_ && (a.inf_ || a.fin_ == b.fin_);
    }
    friend bool operator!=(const CuZElement& a, const CuZElement& b) { return !(a == b); }

    /// The mixed order of Cu(Z).
    friend bool leq(const CuZElement& a, const CuZElement& b) {
        if (a.is_compact() && b.is_compact()) return a.fin_ <= b.fin_;
        if (a.is_soft() && b.is_soft()) {
            if (b.inf_) return true;
            if (a.inf_) return false;
            return a.fin_ <= b.fin_;
        }
        if (a.is_soft() && b.is_compact()) return !a.inf_ && a.fin_ <= b.fin_;
        // compact <= soft iff n < x
        if (b.inf_) return true;
        return a.fin_ < b.fin_;
    }

    std::string str() const {
        if (soft_) return "soft(" + (inf_ ? std::string("inf") : fin_.str()) + ")";
        return "compact(" + fin_.str() + ")";
    }

private:
    bool soft_ = false;
    bool inf_ = false;
    Rat fin_; // compact count or soft value when finite
};

} // namespace culift
