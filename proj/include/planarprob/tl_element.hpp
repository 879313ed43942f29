#pragma once

#include <map>
#include <set>
#include <string>

#include "planarprob/delta_poly.hpp"
#include "planarprob/tl_diagram.hpp"

namespace planarprob {

// A formal DeltaPoly-linear combination of TL diagrams. Mixed sizes are
// allowed (an element of the direct sum over k); the empty diagram of size 0
// is the unit. Zero coefficients are never stored.
class TLElement {
public:
    TLElement() = default;
    explicit TLElement(const TLDiagram& d, const DeltaPoly& c = DeltaPoly(1)) {
        add_term(d, c);
    }

    static TLElement unit() { return TLElement(TLDiagram()); }
    // The single size-1 diagram (the cup, also the identity of the size-1 algebra).
    static TLElement cup();
    // p concatenated cups: the size-p diagram {(1,2),(3,4),...}.
    static TLElement cup_power(int p);
    // The nested size-2 diagram {(1,4),(2,3)}.
    static TLElement nested_cup();
    // The rainbow {(j, 2k+1-j)}: the unit for the k-strand join product.
    static TLElement rainbow(int k);
    // Command-line spec: "1", "cup", "cup^p", "ncup", "id_k", or the
    // canonical diagram encoding "k:[(a,b),...]".
    static TLElement parse_spec(const std::string& spec);

    const std::map<TLDiagram, DeltaPoly>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::set<int> grades() const;
    // Size when homogeneous; throws on mixed grades.
    int grade() const;
    bool homogeneous() const { return grades().size() <= 1; }

    void add_term(const TLDiagram& d, const DeltaPoly& c);

    TLElement& operator+=(const TLElement& o);
    TLElement& operator-=(const TLElement& o);
    TLElement& operator*=(const DeltaPoly& s);
    friend TLElement operator+(TLElement a, const TLElement& b) { return a += b; }
    friend TLElement operator-(TLElement a, const TLElement& b) { return a -= b; }
    friend TLElement operator*(TLElement a, const DeltaPoly& s) { return a *= s; }
    friend TLElement operator*(const DeltaPoly& s, TLElement a) { return a *= s; }
    friend bool operator==(const TLElement& a, const TLElement& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const TLElement& a, const TLElement& b) { return !(a == b); }

    std::string str() const;

private:
    std::map<TLDiagram, DeltaPoly> terms_;
};

}  // namespace planarprob
