#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include "planarprob/errors.hpp"

namespace planarprob {

// Exact rational on 64-bit numerator/denominator, always reduced, den > 0.
// Intermediates are computed in 128 bits; anything that would not fit back
// into 64 bits throws instead of silently wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rational(std::int64_t n, std::int64_t d) {
        if (d == 0) throw ValidationError("Rational: zero denominator");
        __int128 nn = n, dd = d;
        if (dd < 0) { nn = -nn; dd = -dd; }
        reduce_assign(nn, dd);
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

    Rational operator-() const {
        Rational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }

    Rational& operator+=(const Rational& o) {
        __int128 n = (__int128)num_ * o.den_ + (__int128)o.num_ * den_;
        __int128 d = (__int128)den_ * o.den_;
        reduce_assign(n, d);
        return *this;
    }
    Rational& operator-=(const Rational& o) { return *this += -o; }
    Rational& operator*=(const Rational& o) {
        __int128 n = (__int128)num_ * o.num_;
        __int128 d = (__int128)den_ * o.den_;
        reduce_assign(n, d);
        return *this;
    }
    Rational& operator/=(const Rational& o) {
        if (o.num_ == 0) throw ValidationError("Rational: division by zero");
        __int128 n = (__int128)num_ * o.den_;
        __int128 d = (__int128)den_ * o.num_;
        if (d < 0) { n = -n; d = -d; }
        reduce_assign(n, d);
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

    static Rational factorial(int n) {
        Rational r(1);
        for (int i = 2; i <= n; ++i) r *= Rational(i);
        return r;
    }

    // a^e for integer e (e < 0 requires a != 0).
    static Rational pow(const Rational& a, int e) {
        if (e < 0) return Rational(1) / pow(a, -e);
        Rational r(1), base = a;
        int k = e;
        while (k > 0) {
            if (k & 1) r *= base;
            base *= base;
            k >>= 1;
        }
        return r;
    }

private:
    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    void reduce_assign(__int128 n, __int128 d) {
        if (n == 0) {
            num_ = 0;
            den_ = 1;
            return;
        }
        __int128 g = gcd128(n, d);
        n /= g;
        d /= g;
        constexpr __int128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d < lo || d > hi)
            throw ValidationError("Rational: 64-bit overflow after reduction");
        num_ = static_cast<std::int64_t>(n);
        den_ = static_cast<std::int64_t>(d);
    }

    std::int64_t num_;
    std::int64_t den_;
};

}  // namespace planarprob
