#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "planarprob/graph_pa.hpp"
#include "planarprob/poly_pa.hpp"
#include "planarprob/rng.hpp"

namespace planarprob {

using Matrix = Eigen::MatrixXcd;

struct SamplerConfig {
    double step_size = 2e-4;
    int burn_in = 2000;
    int thinning = 20;
    int steps = 40000;  // post-burn-in proposals
};

struct EnsembleConfig {
    enum class Mode { GaussianPoly, GaussianGraph, GibbsPoly, GibbsGraph };
    Mode mode = Mode::GaussianPoly;
    int K = 1;
    std::optional<BipartiteGraph> graph;
    int N = 64;
    int N_prime = -1;  // -1 means square
    // Full potential including the quadratic part, e.g. (1, X1 X1*) + (beta, quartic).
    std::vector<std::pair<double, PolyElement>> potential;
    std::vector<std::pair<double, GraphElement>> graph_potential;
    double cutoff_R = 4.0;
    SamplerConfig sampler;
    long trials = 200;
    std::uint64_t seed = 1;
    int threads = 0;

    int n_prime() const { return N_prime > 0 ? N_prime : N; }
    void validate() const;

    std::string json() const;
    static EnsembleConfig from_json(const std::string& text);
    static EnsembleConfig load(const std::string& path);
};

struct EstimateResult {
    std::string observable;
    double mean = 0.0;
    double stderr_ = 0.0;
    long trials = 0;
    int N = 0;
    double wall_ms = 0.0;
};

struct SpectralHistogram {
    std::vector<double> bin_edges;
    std::vector<long> counts;
    std::vector<double> density;  // counts / (total * width); integrates to 1
    long total = 0;
    std::vector<double> moments;       // empirical moments 1..max
    std::vector<double> eigenvalues;   // pooled, sorted
    double mass_above(double x) const;
};

// One complex Gaussian matrix with independent entries of variance 1/N
// (so E (1/N) Tr A A* -> N'/N). Reproducible given the stream.
Matrix sample_gaussian(int N, int N_prime, RngStream& rng);

// Evaluates an alternating word in the sample matrices (starred letters act
// as adjoints) and returns its normalized trace.
std::complex<double> trace_word(const std::vector<AltMonomial::Letter>& word,
                                const std::vector<Matrix>& A);

// Monte Carlo mean of (1/N) Re Tr Q over independent Gaussian K-tuples.
// Trial t uses the derived stream (seed, t); results do not depend on the
// thread count.
EstimateResult estimate_trace_gaussian(const PolyElement& Q, const EnsembleConfig& cfg);

// Graph ensemble: edge matrices of size [N mu(v)] x [N mu(w)] with entry
// variance matching the graph Gaussian density; the estimator averages
// sum_v mu(v)/N Tr(Q_v) and divides by the empty-word normalization
// sum_v mu(v) [N mu(v)] / N over even vertices.
EstimateResult estimate_trace_graph(const GraphElement& Q, const EnsembleConfig& cfg,
                                    const BipartiteGraph& g, const PFData& pf);

// One cyclic-derivative word program: d/dt Tr V(A + t E_j) = Tr(E_j D_j V).
// `starred` selects derivatives with respect to the starred letters.
struct WordProgram {
    struct Term {
        Rational coeff;
        std::vector<AltMonomial::Letter> word;
    };
    std::vector<Term> terms;
};
WordProgram cyclic_derivative(const PolyElement& V, int letter, bool starred);

struct GibbsDiagnostics {
    double acceptance_rate = 0.0;
    long accepted = 0;
    long proposals = 0;
    bool rate_warning = false;
    std::string message;
};

// Metropolis-adjusted Langevin chain for the density
//   1{ ||A_j|| <= R } exp(-N Tr V(A_1..A_K, A_1*..A_K*)),
// drift from the cyclic gradient, operator-norm rejection implementing the
// cutoff. Calls `on_sample` for every kept state after burn-in/thinning.
GibbsDiagnostics gibbs_sample(const EnsembleConfig& cfg,
                              const std::function<void(const std::vector<Matrix>&)>& on_sample);

// Raw chain driver behind gibbs_sample, without the production size floor;
// the scalar detailed-balance check runs through this at N = 1.
GibbsDiagnostics run_mala_poly(int K, int N, int N_prime,
                               const std::vector<std::pair<double, PolyElement>>& potential,
                               double cutoff_R, const SamplerConfig& sampler, std::uint64_t seed,
                               const std::function<void(const std::vector<Matrix>&)>& on_sample);

// Chain-based estimate of (1/N) Re Tr Q under the Gibbs measure.
EstimateResult estimate_trace_gibbs(const PolyElement& Q, const EnsembleConfig& cfg,
                                    GibbsDiagnostics* diagnostics = nullptr);

// Pooled eigenvalue histogram of the self-adjoint word Q (validated
// numerically) over independent Gaussian trials.
SpectralHistogram spectral_histogram(const PolyElement& Q, const EnsembleConfig& cfg,
                                     int bins = 64, int max_moment = 3);

}  // namespace planarprob
