#pragma once

#include <map>
#include <string>
#include <vector>

#include "planarprob/rational.hpp"
#include "planarprob/tl_element.hpp"

namespace planarprob {

// An alternating monomial X_{i1} X_{j1}* X_{i2} X_{j2}* ... of even degree:
// letters strictly alternate unstarred/starred starting unstarred. Indices
// are 1-based letter numbers up to some K fixed by the caller.
class AltMonomial {
public:
    struct Letter {
        int index;
        bool starred;
        auto operator<=>(const Letter&) const = default;
    };

    AltMonomial() = default;  // the empty monomial (the unit)
    explicit AltMonomial(std::vector<Letter> letters);

    int degree() const { return static_cast<int>(letters_.size()); }
    int half_degree() const { return degree() / 2; }
    const std::vector<Letter>& letters() const { return letters_; }

    // Token stream "X1 X1* X2 X2*"; the parser validates alternation.
    std::string str() const;
    static AltMonomial parse(const std::string& text);

    auto operator<=>(const AltMonomial&) const = default;

private:
    std::vector<Letter> letters_;
};

// A rational linear combination of alternating monomials.
class PolyElement {
public:
    PolyElement() = default;
    explicit PolyElement(const AltMonomial& m, const Rational& c = Rational(1)) {
        add_term(m, c);
    }

    static PolyElement unit() { return PolyElement(AltMonomial()); }

    const std::map<AltMonomial, Rational>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool homogeneous() const;
    // Common half-degree; throws when degrees are mixed.
    int half_degree() const;

    void add_term(const AltMonomial& m, const Rational& c);
    PolyElement& operator+=(const PolyElement& o);
    PolyElement& operator-=(const PolyElement& o);
    PolyElement& operator*=(const Rational& s);
    friend PolyElement operator+(PolyElement a, const PolyElement& b) { return a += b; }
    friend PolyElement operator-(PolyElement a, const PolyElement& b) { return a -= b; }
    friend PolyElement operator*(PolyElement a, const Rational& s) { return a *= s; }
    friend bool operator==(const PolyElement& a, const PolyElement& b) {
        return a.terms_ == b.terms_;
    }

    std::string str() const;

private:
    std::map<AltMonomial, Rational> terms_;
};

// Concatenation product; alternation is preserved by construction and
// re-validated on the result.
PolyElement poly_mul(const PolyElement& a, const PolyElement& b);

// The image of a TL element in the K-letter polynomial algebra: every strand
// of each diagram ranges over the K letters, paired points share the index,
// stars follow position parity. Delta-polynomial coefficients are evaluated
// exactly at delta = K.
PolyElement embed_tl(int K, const TLElement& x);

// Gaussian trace of a monomial: the number of non-crossing perfect
// matchings of the letter positions pairing each unstarred letter with a
// starred letter of the same index. Equals the Voiculescu trace at delta = K
// through an entirely separate computation.
Rational gaussian_trace_poly(const AltMonomial& w, int K);
Rational gaussian_trace_poly(const PolyElement& x, int K);

// Element specs used by configs and the command line: "1", "cup", "cup^p",
// "ncup" (the nested double cup) expand through embed_tl at the given K;
// otherwise a sum of monomials "X1 X1* + 2*X2 X2* ..." with optional
// rational prefixes.
PolyElement parse_element_spec(const std::string& spec, int K);

}  // namespace planarprob
