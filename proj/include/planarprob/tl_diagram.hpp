#pragma once

#include <compare>
#include <string>
#include <vector>

#include "planarprob/errors.hpp"

namespace planarprob {

// A Temperley-Lieb diagram of size k: a non-crossing perfect matching of 2k
// boundary points. Points are numbered 1..2k clockwise starting from the
// marked first point; internally matches are stored 0-based.
class TLDiagram {
public:
    TLDiagram() = default;  // the empty diagram of size 0

    // matching[i] = 0-based partner of point i; must be a fixed-point-free
    // non-crossing involution.
    explicit TLDiagram(std::vector<int> matching);

    int size() const { return static_cast<int>(match_.size() / 2); }
    int points() const { return static_cast<int>(match_.size()); }
    int partner(int i) const { return match_[i]; }
    const std::vector<int>& matching() const { return match_; }

    // Pairs (a, b) with a < b, 1-based, sorted: the canonical text order.
    std::vector<std::pair<int, int>> pairs() const;

    // Canonical encoding "k:[(a,b),...]" with 1-based sorted pairs.
    std::string encode() const;
    static TLDiagram decode(const std::string& text);

    auto operator<=>(const TLDiagram&) const = default;

private:
    std::vector<int> match_;
};

// True iff `matching` (0-based involution table) has no interleaved pairs
// a < c < b < d with (a,b) and (c,d) matched. Throws ValidationError when the
// table is not a fixed-point-free involution.
bool is_noncrossing(const std::vector<int>& matching);

// All size-k TL diagrams in lexicographic order on their pair lists; the
// count is the k-th Catalan number. `max_size` guards the exponential blowup.
std::vector<TLDiagram> enumerate_tl(int k, int max_size = 8);

// Reflection through the boundary interval ahead of the first point
// (point j -> 2k+1-j); this is the diagram part of the adjoint.
TLDiagram reflect(const TLDiagram& d);

}  // namespace planarprob
