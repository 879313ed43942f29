#pragma once

#include <vector>

#include "planarprob/poly_pa.hpp"
#include "planarprob/series.hpp"
#include "planarprob/tl_element.hpp"

namespace planarprob {

// Moments of the free Poisson law: sum of delta^|pi| over all non-crossing
// partitions pi of {1..p}, by direct enumeration of set partitions. This is
// the independent cross-check for the trace computed through TL closures.
DeltaPoly nc_partition_moments(int p, int max_p = 12);

// One term beta_j * W_j of a potential. The body is either a homogeneous TL
// element (symbolic mode) or a homogeneous alternating poly element
// (polynomial mode); TL bodies must have grade >= 1.
struct PotentialTerm {
    TLElement tl;
    PolyElement poly;
    bool tl_mode = true;

    static PotentialTerm from_tl(TLElement body);
    static PotentialTerm from_poly(PolyElement body);
    int half_size() const;
};

struct MapsOptions {
    int max_half_edges = 24;  // total boundary points at the largest multi-index
    int threads = 0;          // 0 = hardware concurrency
};

// The planar-map expansion of the free Gibbs law in symbolic delta: the
// coefficient of the multi-index (m_j) collects (-1)^{m_j}/m_j! times
// delta^{loops} over all gluings of the observable disk with m_j copies of
// each potential disk that are connected to the observable and have genus 0.
DeltaSeries gibbs_series_tl(const TLElement& Q, const std::vector<TLElement>& potential,
                            const MultiIndex& orders, const MapsOptions& opts = {});

// Polynomial-mode expansion: disks carry monomials, strings must join an
// unstarred letter to a starred letter with the same index, and each
// surviving connected genus-0 gluing counts 1.
RationalSeries gibbs_series_poly(const PolyElement& Q, const std::vector<PolyElement>& potential,
                                 const MultiIndex& orders, const MapsOptions& opts = {});

// Exact finite-N Gaussian expectations with entry covariance 1/N: expands the
// exponential, sums over all Wick pairings with no planarity filter, divides
// by the partition-function series, and returns the normalized jet. Each
// coefficient is a polynomial in 1/N^2 whose constant term must match
// gibbs_series_poly.
NSeries wick_oracle(const PolyElement& Q, const std::vector<PolyElement>& potential,
                    const MultiIndex& orders, const MapsOptions& opts = {});

// The loop-model series: potential cup^2 and the nested double cup, with
// couplings (beta_1, beta_2). Coefficients stay polynomial in delta, which is
// what carries the model to non-integer loop parameter.
DeltaSeries on_model_series(const TLElement& Q, int beta1_order, int beta2_order,
                            const MapsOptions& opts = {});

}  // namespace planarprob
