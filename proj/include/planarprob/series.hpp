#pragma once

#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "planarprob/delta_poly.hpp"

namespace planarprob {

// Exponent vector (m_1, ..., m_n) of the coupling constants.
using MultiIndex = std::vector<int>;

// Laurent polynomial in the matrix size N with exact rational coefficients.
// Used by the finite-N oracle, where connected contributions carry even
// non-positive exponents and disconnected intermediate terms positive ones.
class NPoly {
public:
    NPoly() = default;
    NPoly(const Rational& c) {  // NOLINT: implicit by design
        if (!c.is_zero()) coeffs_[0] = c;
    }

    static NPoly n_power(int exponent, const Rational& c = Rational(1)) {
        NPoly p;
        if (!c.is_zero()) p.coeffs_[exponent] = c;
        return p;
    }

    const std::map<int, Rational>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }

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

    NPoly& operator+=(const NPoly& o) {
        for (const auto& [e, c] : o.coeffs_) add_term(e, c);
        return *this;
    }
    NPoly& operator-=(const NPoly& o) {
        for (const auto& [e, c] : o.coeffs_) add_term(e, -c);
        return *this;
    }
    NPoly& operator*=(const NPoly& o) {
        NPoly r;
        for (const auto& [e1, c1] : coeffs_)
            for (const auto& [e2, c2] : o.coeffs_) r.add_term(e1 + e2, c1 * c2);
        coeffs_ = std::move(r.coeffs_);
        return *this;
    }
    NPoly& operator*=(const Rational& s) {
        if (s.is_zero()) {
            coeffs_.clear();
            return *this;
        }
        for (auto& [e, c] : coeffs_) c *= s;
        return *this;
    }
    friend NPoly operator+(NPoly a, const NPoly& b) { return a += b; }
    friend NPoly operator-(NPoly a, const NPoly& b) { return a -= b; }
    friend NPoly operator*(NPoly a, const NPoly& b) { return a *= b; }
    friend NPoly operator*(NPoly a, const Rational& s) { return a *= s; }
    friend bool operator==(const NPoly& a, const NPoly& b) { return a.coeffs_ == b.coeffs_; }
    friend bool operator!=(const NPoly& a, const NPoly& b) { return !(a == b); }

    double eval(double n) const;

    // True when only exponents of the form -2g, g >= 0, appear.
    bool even_nonpositive() const {
        for (const auto& [e, c] : coeffs_)
            if (e > 0 || e % 2 != 0) return false;
        return true;
    }

    std::string str() const;
    friend std::ostream& operator<<(std::ostream& os, const NPoly& p) { return os << p.str(); }

private:
    std::map<int, Rational> coeffs_;
};

// A truncated jet of a free Gibbs law in the symbolic delta mode:
// multi-index -> delta-polynomial. No convergence claims attach to it.
struct DeltaSeries {
    MultiIndex orders;
    std::map<MultiIndex, DeltaPoly> coeffs;
};

// Same jet with plain rational coefficients (polynomial mode at a fixed K).
struct RationalSeries {
    MultiIndex orders;
    std::map<MultiIndex, Rational> coeffs;
};

// Finite-N jet from the Wick oracle: multi-index -> Laurent polynomial in N.
struct NSeries {
    MultiIndex orders;
    std::map<MultiIndex, NPoly> coeffs;
};

// All multi-indices with 0 <= m_j <= orders[j], in lexicographic order.
std::vector<MultiIndex> multi_indices_upto(const MultiIndex& orders);

}  // namespace planarprob
