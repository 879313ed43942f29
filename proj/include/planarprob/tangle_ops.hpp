#pragma once

#include <vector>

#include "planarprob/gluing.hpp"
#include "planarprob/tl_element.hpp"

namespace planarprob {

using TraceValue = DeltaPoly;

// Default ceiling for operations that sum over all TL diagrams of a grade.
inline constexpr int kDefaultMaxGrade = 8;

// The k-strand join product: the last k strands of `a` meet the first k
// strands of `b`, remaining strands pass to the output boundary in order
// (a's head, then b's tail). Associative; for k = 0 this is concatenation
// with the empty diagram as unit. Inputs of mixed grade are processed per
// homogeneous component; any component of grade < k is rejected.
TLElement wedge(int k, const TLElement& a, const TLElement& b);

// Conditional expectation toward the concatenation algebra: caps the k
// outer strand pairs (point j onto point 2n+1-j) and rescales by delta^-k,
// so units map to units.
TLElement eps(int k, const TLElement& x);

// The Voiculescu trace: close x with every TL diagram of the same grade and
// weight each closure by delta^loops. Normalised so the empty diagram has
// trace 1; mixed grades are summed per grade.
TraceValue trace_tl(const TLElement& x, int max_grade = kDefaultMaxGrade);

// Gram matrix of the size-k diagram basis: entry (S,T) = delta^l(S,T) where
// l counts the loops of S glued against the reflection of T.
std::vector<std::vector<DeltaPoly>> gram_matrix(int k, int max_grade = kDefaultMaxGrade);

// Reflects every diagram through the marked boundary interval and conjugates
// coefficients (identity on rationals). An involution.
TLElement adjoint(const TLElement& x);

// The enveloping-algebra product: k lines join the input disks; on diagram
// inputs resolved through the same gluing engine as wedge. Associative.
TLElement boxtimes(int k, const TLElement& a, const TLElement& b);

// The enveloping trace: the first k strands of x close onto the last k
// around the outside (the k encircling loops of the defining picture) and
// the middle is closed with the sum of all TL diagrams. Coincides with
// trace_tl at k = 0.
TraceValue trace_boxtimes(int k, const TLElement& x, int max_grade = kDefaultMaxGrade);

// Adds one through-strand around the element: P_k -> P_{k+1}, sending the
// unit to the single size-1 diagram. Multiplicative from the concatenation
// product into the 1-strand join product.
TLElement include_strand(const TLElement& x);

}  // namespace planarprob
