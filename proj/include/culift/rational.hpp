#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <iosfwd>

namespace culift {

struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

struct validation_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct resolution_error : validation_error {
    using validation_error::validation_error;
};

/// Exact rational with 64-bit numerator/denominator. Every intermediate
/// product goes through 128-bit arithmetic and overflow is a hard error,
/// never silent wraparound.
class Rat {
public:
    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}
    Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_negative() const { return num_ < 0; }
    bool is_integer() const { return den_ == 1; }

    friend Rat operator+(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from128(n, d);
    }
    friend Rat operator-(const Rat& a, const Rat& b) {
        __int128 n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from128(n, d);
    }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from128((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw internal_error("rational division by zero");
        return from128((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rat operator-() const { return Rat(-num_, den_); }
    Rat& operator+=(const Rat& o) { return *this = *this + o; }
    Rat& operator-=(const Rat& o) { return *this = *this - o; }
    Rat& operator*=(const Rat& o) { return *this = *this * o; }
    Rat& operator/=(const Rat& o) { return *this = *this / o; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

    /// Largest integer <= value.
    long long floor() const {
        long long q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return q;
    }

    /// Fractional part in [0,1).
    Rat frac() const { return *this - Rat(floor()); }

    Rat abs() const { return num_ < 0 ? Rat(-num_, den_) : *this; }

    /// True when the denominator is a power of two; reports the exponent.
    bool dyadic_exponent(int& k) const {
        long long d = den_;
        k = 0;
        while (d % 2 == 0) { d /= 2; ++k; }
        return d == 1;
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "p/q" or "p". Throws validation_error on malformed input.
    static Rat parse(const std::string& s);

    double approx() const { return (double)num_ / (double)den_; }

private:
    long long num_;
    long long den_;

    void normalize() {
        if (den_ == 0) throw internal_error("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) { num_ /= g; den_ /= g; }
    }

    static Rat from128(__int128 n, __int128 d) {
        if (d == 0) throw internal_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        __int128 a = n < 0 ? -n : n;
        __int128 g = gcd128(a, d);
        if (g > 1) { n /= g; d /= g; }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw internal_error("rational overflow");
        Rat r;
        r.num_ = (long long)n;
        r.den_ = (long long)d;
        return r;
    }

    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) { __int128 t = a % b; a = b; b = t; }
        return a;
    }
};

std::ostream& operator<<(std::ostream& os, const Rat& r);

/// N u {infinity}. Addition saturates at infinity; order is the obvious one.
class ExtNat {
public:
    ExtNat() : v_(0) {}
    ExtNat(unsigned long long v) : v_(v) {
        if (v_ == INF_) throw internal_error("ExtNat value collides with infinity sentinel");
    }
    static ExtNat inf() { ExtNat e; e.v_ = INF_; return e; }

    bool is_inf() const { return v_ == INF_; }
    unsigned long long value() const {
        if (is_inf()) throw internal_error("finite value requested from infinity");
        return v_;
    }

    friend ExtNat operator+(ExtNat a, ExtNat b) {
        if (a.is_inf() || b.is_inf()) return inf();
        ExtNat r;
        r.v_ = a.v_ + b.v_;
        if (r.v_ < a.v_) throw internal_error("ExtNat overflow");
        return r;
    }
    ExtNat& operator+=(ExtNat o) { return *this = *this + o; }

    friend bool operator==(ExtNat a, ExtNat b) { return a.v_ == b.v_; }
    friend bool operator!=(ExtNat a, ExtNat b) { return a.v_ != b.v_; }
    friend bool operator<(ExtNat a, ExtNat b) {
        if (b.is_inf()) return !a.is_inf();
        if (a.is_inf()) return false;
        return a.v_ < b.v_;
    }
    friend bool operator<=(ExtNat a, ExtNat b) { return a == b || a < b; }
    friend bool operator>(ExtNat a, ExtNat b) { return b < a; }
    friend bool operator>=(ExtNat a, ExtNat b) { return b <= a; }

    std::string str() const { return is_inf() ? "inf" : std::to_string(v_); }

private:
    static constexpr unsigned long long INF_ = ~0ull;
    unsigned long long v_;
};

std::ostream& operator<<(std::ostream& os, const ExtNat& e);

} // namespace culift
