#pragma once

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "planarprob/rational.hpp"

namespace planarprob {

// Laurent polynomial in the loop parameter d (delta) with exact rational
// coefficients. Negative exponents occur through conditional-expectation
// normalisations, hence Laurent rather than plain polynomials. Zero
// coefficients are never stored.
class DeltaPoly {
public:
    DeltaPoly() = default;
    DeltaPoly(const Rational& c) {  // NOLINT: implicit by design
        if (!c.is_zero()) coeffs_[0] = c;
    }
    DeltaPoly(std::int64_t c) : DeltaPoly(Rational(c)) {}  // NOLINT

    static DeltaPoly delta_power(int exponent, const Rational& c = Rational(1)) {
        DeltaPoly p;
        if (!c.is_zero()) p.coeffs_[exponent] = c;
        return p;
    }

    const std::map<int, Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    int min_exponent() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    int max_exponent() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    Rational coeff(int exponent) const {
        auto it = coeffs_.find(exponent);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    void add_term(int exponent, const Rational& c) {
        if (c.is_zero()) return;
        auto it = coeffs_.find(exponent);
        if (it == coeffs_.end()) {
            coeffs_[exponent] = c;
        } else {
            it->second += c;
            if (it->second.is_zero()) coeffs_.erase(it);
        }
    }

    DeltaPoly& operator+=(const DeltaPoly& o) {
        for (const auto& [e, c] : o.coeffs_) add_term(e, c);
        return *this;
    }
    DeltaPoly& operator-=(const DeltaPoly& o) {
        for (const auto& [e, c] : o.coeffs_) add_term(e, -c);
        return *this;
    }
    DeltaPoly operator-() const {
        DeltaPoly r;
        for (const auto& [e, c] : coeffs_) r.coeffs_[e] = -c;
        return r;
    }
    DeltaPoly& operator*=(const DeltaPoly& o) {
        DeltaPoly r;
        for (const auto& [e1, c1] : coeffs_)
            for (const auto& [e2, c2] : o.coeffs_) r.add_term(e1 + e2, c1 * c2);
        coeffs_ = std::move(r.coeffs_);
        return *this;
    }
    DeltaPoly& operator*=(const Rational& s) {
        if (s.is_zero()) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [e, c] : coeffs_) c *= s;
        return *this;
    }

    friend DeltaPoly operator+(DeltaPoly a, const DeltaPoly& b) { return a += b; }
    friend DeltaPoly operator-(DeltaPoly a, const DeltaPoly& b) { return a -= b; }
    friend DeltaPoly operator*(DeltaPoly a, const DeltaPoly& b) { return a *= b; }
    friend DeltaPoly operator*(DeltaPoly a, const Rational& s) { return a *= s; }
    friend DeltaPoly operator*(const Rational& s, DeltaPoly a) { return a *= s; }

    friend bool operator==(const DeltaPoly& a, const DeltaPoly& b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const DeltaPoly& a, const DeltaPoly& b) { return !(a == b); }

    // Horner evaluation at a real delta > 0 (negative powers via the inverse).
    double eval(double delta) const {
        if (coeffs_.empty()) return 0.0;
        double acc = 0.0;
        int prev = max_exponent();
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            acc *= std::pow(delta, prev - it->first);
            acc += it->second.to_double();
            prev = it->first;
        }
        return acc * std::pow(delta, prev);
    }

    // Exact evaluation at a rational point (needed for integer-delta bridges).
    Rational eval_exact(const Rational& delta) const {
        Rational acc(0);
        for (const auto& [e, c] : coeffs_) acc += c * Rational::pow(delta, e);
        return acc;
    }

    std::string str() const {
        if (coeffs_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
            const auto& [e, c] = *it;
            Rational a = c;
            if (first) {
                if (a.sign() < 0) {
                    os << "-";
                    a = -a;
                }
            } else {
                os << (a.sign() < 0 ? " - " : " + ");
                if (a.sign() < 0) a = -a;
            }
            first = false;
            if (e == 0) {
                os << a.str();
            } else {
                if (!a.is_one()) os << a.str() << "*";
                os << "d";
                if (e != 1) os << "^" << e;
            }
        }
        return os.str();
    }

    friend std::ostream& operator<<(std::ostream& os, const DeltaPoly& p) { return os << p.str(); }

private:
    std::map<int, Rational> coeffs_;
};

}  // namespace planarprob
