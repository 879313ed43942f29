#include "planarprob/rmt.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace planarprob {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// mean / stderr over a vector, reduced in index order.
std::pair<double, double> mean_stderr(const std::vector<double>& xs) {
    const long n = static_cast<long>(xs.size());
    if (n == 0) return {0.0, 0.0};
    double mean = 0.0, comp = 0.0;
    for (double x : xs) {  // compensated summation
        const double y = x - comp;
        const double t = mean + y;
        comp = (t - mean) - y;
        mean = t;
    }
    mean /= static_cast<double>(n);
    if (n == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    return {mean, sd / std::sqrt(static_cast<double>(n))};
}

int thread_count(int requested, long jobs) {
    long t = requested > 0 ? requested : static_cast<long>(std::thread::hardware_concurrency());
    return static_cast<int>(std::max(1L, std::min({t, jobs, 32L})));
}

// Runs fn(t) for t in [0, jobs) across threads, filling out[t]; the result
// does not depend on the thread count because every job owns its stream.
void parallel_trials(long jobs, int threads, std::vector<double>& out,
                     const std::function<double(long)>& fn) {
    out.assign(jobs, 0.0);
    const int nt = thread_count(threads, jobs);
    if (nt <= 1) {
        for (long t = 0; t < jobs; ++t) out[t] = fn(t);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(nt);
    for (int w = 0; w < nt; ++w) {
        futures.push_back(std::async(std::launch::async, [w, nt, jobs, &out, &fn] {
            for (long t = w; t < jobs; t += nt) out[t] = fn(t);
        }));
    }
    for (auto& f : futures) f.get();
}

double operator_norm(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

}  // namespace

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

void EnsembleConfig::validate() const {
    if (N < 8) throw ValidationError("EnsembleConfig: N must be at least 8");
    if (K < 1) throw ValidationError("EnsembleConfig: K must be positive");
    if (trials < 1) throw ValidationError("EnsembleConfig: trials must be positive");
    for (const auto& [c, e] : potential)
        if (!std::isfinite(c)) throw ValidationError("EnsembleConfig: non-finite coupling");
    const bool gibbs = mode == Mode::GibbsPoly || mode == Mode::GibbsGraph;
    if (gibbs && !(cutoff_R > 2.0))
        throw ValidationError("EnsembleConfig: Gibbs mode needs cutoff R > 2");
    if ((mode == Mode::GaussianGraph || mode == Mode::GibbsGraph) && !graph)
        throw ValidationError("EnsembleConfig: graph mode without a graph");
    if (gibbs && sampler.step_size <= 0)
        throw ValidationError("EnsembleConfig: step size must be positive");
}

namespace {

std::string mode_name(EnsembleConfig::Mode m) {
    switch (m) {
        case EnsembleConfig::Mode::GaussianPoly: return "gaussian-poly";
        case EnsembleConfig::Mode::GaussianGraph: return "gaussian-graph";
        case EnsembleConfig::Mode::GibbsPoly: return "gibbs-poly";
        case EnsembleConfig::Mode::GibbsGraph: return "gibbs-graph";
    }
    return "?";
}

EnsembleConfig::Mode mode_from(const std::string& s) {
    if (s == "gaussian-poly") return EnsembleConfig::Mode::GaussianPoly;
    if (s == "gaussian-graph") return EnsembleConfig::Mode::GaussianGraph;
    if (s == "gibbs-poly") return EnsembleConfig::Mode::GibbsPoly;
    if (s == "gibbs-graph") return EnsembleConfig::Mode::GibbsGraph;
    throw ValidationError("EnsembleConfig: unknown mode '" + s + "'");
}

}  // namespace

std::string EnsembleConfig::json() const {
    nlohmann::json j;
    j["mode"] = mode_name(mode);
    j["K"] = K;
    j["N"] = N;
    if (N_prime > 0) j["N_prime"] = N_prime;
    if (graph) j["graph"] = nlohmann::json::parse(graph->json());
    nlohmann::json pot = nlohmann::json::array();
    for (const auto& [c, e] : potential) {
        nlohmann::json term;
        term["coupling"] = c;
        term["element"] = e.str();
        pot.push_back(term);
    }
    j["potential"] = pot;
    j["cutoff_R"] = cutoff_R;
    j["sampler"] = {{"step_size", sampler.step_size},
                    {"burn_in", sampler.burn_in},
                    {"thinning", sampler.thinning},
                    {"steps", sampler.steps}};
    j["trials"] = trials;
    j["seed"] = seed;
    return j.dump(2);
}

EnsembleConfig EnsembleConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("EnsembleConfig JSON: ") + ex.what());
    }
    EnsembleConfig cfg;
    if (!j.contains("mode")) throw ValidationError("EnsembleConfig: missing mode");
    cfg.mode = mode_from(j["mode"].get<std::string>());
    cfg.K = j.value("K", 1);
    cfg.N = j.value("N", 64);
    cfg.N_prime = j.value("N_prime", -1);
    if (j.contains("graph")) cfg.graph = BipartiteGraph::from_json(j["graph"].dump());
    if (j.contains("potential")) {
        for (const auto& term : j["potential"]) {
            const double c = term.at("coupling").get<double>();
            const std::string spec = term.at("element").get<std::string>();
            cfg.potential.emplace_back(c, parse_element_spec(spec, cfg.K));
        }
    }
    if (j.contains("graph_potential")) {
        if (!cfg.graph) throw ValidationError("EnsembleConfig: graph_potential without graph");
        const PFData pf = pf_eigen(*cfg.graph);
        for (const auto& term : j["graph_potential"]) {
            const double c = term.at("coupling").get<double>();
            const std::string spec = term.at("element").get<std::string>();
            GraphElement e;
            if (spec == "cup") {
                e = cup_element(*cfg.graph, pf);
            } else if (spec.rfind("cup^", 0) == 0) {
                e = cup_power(*cfg.graph, pf, std::stoi(spec.substr(4)));
            } else {
                throw ValidationError("EnsembleConfig: unsupported graph element '" + spec +
                                      "' (loop elements beyond cup powers are not compiled)");
            }
            cfg.graph_potential.emplace_back(c, e);
        }
    }
    cfg.cutoff_R = j.value("cutoff_R", 4.0);
    if (j.contains("sampler")) {
        const auto& s = j["sampler"];
        cfg.sampler.step_size = s.value("step_size", cfg.sampler.step_size);
        cfg.sampler.burn_in = s.value("burn_in", cfg.sampler.burn_in);
        cfg.sampler.thinning = s.value("thinning", cfg.sampler.thinning);
        cfg.sampler.steps = s.value("steps", cfg.sampler.steps);
    }
    cfg.trials = j.value("trials", 200L);
    cfg.seed = j.value("seed", std::uint64_t{1});
    cfg.threads = j.value("threads", 0);
    cfg.validate();
    return cfg;
}

EnsembleConfig EnsembleConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

// ---------------------------------------------------------------------------
// Gaussian ensembles
// ---------------------------------------------------------------------------

Matrix sample_gaussian(int N, int N_prime, RngStream& rng) {
    if (N < 1 || N_prime < 1) throw ValidationError("sample_gaussian: bad dimensions");
    Matrix a(N, N_prime);
    const double var = 1.0 / static_cast<double>(N);
    for (int r = 0; r < N; ++r)
        for (int c = 0; c < N_prime; ++c) a(r, c) = rng.cgaussian(var);
    return a;
}

std::complex<double> trace_word(const std::vector<AltMonomial::Letter>& word,
                                const std::vector<Matrix>& A) {
    const int N = static_cast<int>(A.empty() ? 0 : A[0].rows());
    if (word.empty()) return {1.0, 0.0};
    Matrix m;
    bool started = false;
    for (const auto& l : word) {
        if (l.index < 1 || l.index > static_cast<int>(A.size()))
            throw ValidationError("trace_word: letter X" + std::to_string(l.index) +
                                  " has no matrix");
        const Matrix& x = A[l.index - 1];
        if (!started) {
            m = l.starred ? x.adjoint() : x;
            started = true;
        } else {
            m = l.starred ? (m * x.adjoint()).eval() : (m * x).eval();
        }
    }
    return m.trace() / static_cast<double>(N);
}

EstimateResult estimate_trace_gaussian(const PolyElement& Q, const EnsembleConfig& cfg) {
    cfg.validate();
    if (cfg.mode != EnsembleConfig::Mode::GaussianPoly)
        throw ValidationError("estimate_trace_gaussian: mode must be gaussian-poly");
    const auto t0 = Clock::now();
    std::vector<double> xs;
    parallel_trials(cfg.trials, cfg.threads, xs, [&](long t) {
        RngStream rng = RngStream::derive(cfg.seed, static_cast<std::uint64_t>(t));
        std::vector<Matrix> A;
        A.reserve(cfg.K);
        for (int j = 0; j < cfg.K; ++j) A.push_back(sample_gaussian(cfg.N, cfg.n_prime(), rng));
        double val = 0.0;
        for (const auto& [mono, coeff] : Q.terms())
            val += coeff.to_double() * trace_word(mono.letters(), A).real();
        return val;
    });
    EstimateResult res;
    res.observable = Q.str();
    std::tie(res.mean, res.stderr_) = mean_stderr(xs);
    res.trials = cfg.trials;
    res.N = cfg.N;
    res.wall_ms = ms_since(t0);
    return res;
}

// ---------------------------------------------------------------------------
// Graph ensemble
// ---------------------------------------------------------------------------

namespace {

// Entry variance of the edge matrix X_e, e = (v, w), from the graph Gaussian
// density exp(-N sum_{even v} mu(v) Tr(cup_v)): the Tr(X_e X_e*) coefficient
// is mu(v)^{3/2} mu(w)^{-1/2}, hence variance mu(w)^{1/2} / (N mu(v)^{3/2}).
double edge_variance(const BipartiteGraph& g, const PFData& pf, int e, int N) {
    const double mv = pf.mu[g.edges[e].first];
    const double mw = pf.mu[g.odd_global(g.edges[e].second)];
    return std::sqrt(mw) / (static_cast<double>(N) * mv * std::sqrt(mv));
}

Matrix eval_graph_word(const MatrixWordProgram::Term& term, const std::vector<Matrix>& X,
                       const std::vector<int>& block, int base) {
    Matrix m = Matrix::Identity(block[base], block[base]);
    for (const auto& [e, rev] : term.word) m = rev ? (m * X[e].adjoint()).eval() : (m * X[e]).eval();
    return m;
}

}  // namespace

EstimateResult estimate_trace_graph(const GraphElement& Q, const EnsembleConfig& cfg,
                                    const BipartiteGraph& g, const PFData& pf) {
    cfg.validate();
    if (cfg.mode != EnsembleConfig::Mode::GaussianGraph)
        throw ValidationError("estimate_trace_graph: mode must be gaussian-graph");
    const auto t0 = Clock::now();
    const MatrixWordProgram prog = compile(Q, cfg.N, g, pf);
    const int n_edges = static_cast<int>(g.edges.size());
    // Normalization: the empty word's estimator value over even vertices.
    double norm = 0.0;
    for (int v = 0; v < g.even_count(); ++v)
        norm += pf.mu[v] * static_cast<double>(prog.block[v]) / static_cast<double>(cfg.N);

    std::vector<double> xs;
    parallel_trials(cfg.trials, cfg.threads, xs, [&](long t) {
        RngStream rng = RngStream::derive(cfg.seed, static_cast<std::uint64_t>(t));
        std::vector<Matrix> X;
        X.reserve(n_edges);
        for (int e = 0; e < n_edges; ++e) {
            const int rows = prog.block[g.edges[e].first];
            const int cols = prog.block[g.odd_global(g.edges[e].second)];
            const double var = edge_variance(g, pf, e, cfg.N);
            Matrix m(rows, cols);
            for (int r = 0; r < rows; ++r)
                for (int c = 0; c < cols; ++c) m(r, c) = rng.cgaussian(var);
            X.push_back(std::move(m));
        }
        double val = 0.0;
        for (const auto& term : prog.terms) {
            const Matrix m = eval_graph_word(term, X, prog.block, term.base);
            val += term.coeff * pf.mu[term.base] * m.trace().real() / static_cast<double>(cfg.N);
        }
        return val / norm;
    });
    EstimateResult res;
    res.observable = "graph-element";
    std::tie(res.mean, res.stderr_) = mean_stderr(xs);
    res.trials = cfg.trials;
    res.N = cfg.N;
    res.wall_ms = ms_since(t0);
    return res;
}

// ---------------------------------------------------------------------------
// Cyclic gradients and the Gibbs sampler
// ---------------------------------------------------------------------------

WordProgram cyclic_derivative(const PolyElement& V, int letter, bool starred) {
    WordProgram out;
    for (const auto& [mono, coeff] : V.terms()) {
        const auto& ls = mono.letters();
        const int n = static_cast<int>(ls.size());
        for (int t = 0; t < n; ++t) {
            if (ls[t].index != letter || ls[t].starred != starred) continue;
            WordProgram::Term term;
            term.coeff = coeff;
            term.word.reserve(n - 1);
            for (int s = t + 1; s < n; ++s) term.word.push_back(ls[s]);
            for (int s = 0; s < t; ++s) term.word.push_back(ls[s]);
            out.terms.push_back(std::move(term));
        }
    }
    return out;
}

namespace {

// Uniform word model shared by the polynomial and graph Gibbs densities:
// U = N * sum_w weight_w * Re Tr(word_w), letters are matrices (id, adjoint?).
struct GibbsModel {
    struct Word {
        double weight;
        std::vector<std::pair<int, bool>> letters;
    };
    int n_letters = 0;
    std::vector<std::pair<int, int>> dims;  // per letter
    std::vector<Word> words;
};

Matrix eval_model_word(const std::vector<std::pair<int, bool>>& letters, size_t skip_from,
                       size_t skip_to, const std::vector<Matrix>& X) {
    // Product of letters [skip_to, end) + [0, skip_from); empty -> identity
    // sized by context (handled by caller).
    Matrix m;
    bool started = false;
    auto mul = [&](const std::pair<int, bool>& l) {
        const Matrix& x = X[l.first];
        if (!started) {
            m = l.second ? x.adjoint() : x;
            started = true;
        } else {
            m = l.second ? (m * x.adjoint()).eval() : (m * x).eval();
        }
    };
    for (size_t s = skip_to; s < letters.size(); ++s) mul(letters[s]);
    for (size_t s = 0; s < skip_from; ++s) mul(letters[s]);
    if (!started) return Matrix();  // caller substitutes identity
    return m;
}

double model_energy(const GibbsModel& model, const std::vector<Matrix>& X, int N) {
    double u = 0.0;
    for (const auto& w : model.words) {
        Matrix m = eval_model_word(w.letters, 0, 0, X);
        const double tr = w.letters.empty() ? 1.0 : m.trace().real();
        u += w.weight * tr;
    }
    return static_cast<double>(N) * u;
}

// dU/d(conj entry) packed as a complex matrix per letter:
// G_l = N * sum_w weight * [ sum_{t: (l,*) } rot_t + ( sum_{t: (l, )} rot_t )^dagger ].
std::vector<Matrix> model_gradient(const GibbsModel& model, const std::vector<Matrix>& X,
                                   int N) {
    std::vector<Matrix> grad(model.n_letters);
    for (int l = 0; l < model.n_letters; ++l)
        grad[l] = Matrix::Zero(model.dims[l].first, model.dims[l].second);
    for (const auto& w : model.words) {
        for (size_t t = 0; t < w.letters.size(); ++t) {
            const auto [l, star] = w.letters[t];
            Matrix rot = eval_model_word(w.letters, t, t + 1, X);
            if (rot.size() == 0) {
                const int d = star ? model.dims[l].second : model.dims[l].first;
                rot = Matrix::Identity(d, d);
            }
            if (star)
                grad[l] += w.weight * rot;
            else
                grad[l] += w.weight * rot.adjoint();
        }
    }
    for (auto& g : grad) g *= static_cast<double>(N);
    return grad;
}

// Graph Gibbs density: U = N sum_v mu(v) Tr((V)_v), letters are edge matrices.
GibbsModel build_graph_model(const EnsembleConfig& cfg, const BipartiteGraph& g,
                             const PFData& pf) {
    GibbsModel model;
    const int n_edges = static_cast<int>(g.edges.size());
    std::vector<int> block(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        block[v] = static_cast<int>(std::floor(cfg.N * pf.mu[v]));
        if (block[v] < 1) throw ValidationError("gibbs_sample: zero-dimension block");
    }
    model.n_letters = n_edges;
    for (int e = 0; e < n_edges; ++e)
        model.dims.emplace_back(block[g.edges[e].first], block[g.odd_global(g.edges[e].second)]);
    for (const auto& [coupling, elem] : cfg.graph_potential) {
        for (const auto& [loop, coeff] : elem.terms) {
            GibbsModel::Word w;
            w.weight = coupling * coeff * pf.mu[loop.base];
            w.letters = loop.steps;
            model.words.push_back(std::move(w));
        }
    }
    return model;
}

}  // namespace

namespace {

GibbsDiagnostics run_chain(const GibbsModel& model, int N, double R,
                           const SamplerConfig& sampler, std::uint64_t seed,
                           const std::function<void(const std::vector<Matrix>&)>& on_sample) {
    RngStream rng = RngStream::derive(seed, 0x6769626273ULL);  // chain stream
    const double h = sampler.step_size;

    auto inside_cutoff = [R](const std::vector<Matrix>& X) {
        for (const auto& x : X)
            if (operator_norm(x) > R) return false;
        return true;
    };

    // Start from an independent Gaussian draw inside the cutoff.
    std::vector<Matrix> X;
    for (int attempt = 0; attempt < 100; ++attempt) {
        X.clear();
        for (int l = 0; l < model.n_letters; ++l) {
            Matrix m(model.dims[l].first, model.dims[l].second);
            const double var = 1.0 / static_cast<double>(N);
            for (int r = 0; r < m.rows(); ++r)
                for (int c = 0; c < m.cols(); ++c) m(r, c) = rng.cgaussian(var);
            X.push_back(std::move(m));
        }
        if (inside_cutoff(X)) break;
        if (attempt == 99)
            throw ValidationError("gibbs_sample: could not find a starting point inside the cutoff");
    }

    double U = model_energy(model, X, N);
    std::vector<Matrix> G = model_gradient(model, X, N);

    GibbsDiagnostics diag;
    const long total_steps = sampler.burn_in + sampler.steps;
    for (long step = 0; step < total_steps; ++step) {
        // Langevin proposal on the real coordinates of all entries.
        std::vector<Matrix> Xp(model.n_letters);
        for (int l = 0; l < model.n_letters; ++l) {
            Matrix noise(model.dims[l].first, model.dims[l].second);
            for (int r = 0; r < noise.rows(); ++r)
                for (int c = 0; c < noise.cols(); ++c)
                    noise(r, c) = std::complex<double>(rng.gaussian(), rng.gaussian());
            Xp[l] = X[l] - h * G[l] + std::sqrt(2.0 * h) * noise;
        }
        const bool after_burn_in = step >= sampler.burn_in;
        if (after_burn_in) ++diag.proposals;

        bool accept = false;
        if (inside_cutoff(Xp)) {
            const double Up = model_energy(model, Xp, N);
            const std::vector<Matrix> Gp = model_gradient(model, Xp, N);
            double log_fwd = 0.0, log_rev = 0.0;
            for (int l = 0; l < model.n_letters; ++l) {
                log_fwd -= (Xp[l] - X[l] + h * G[l]).squaredNorm() / (4.0 * h);
                log_rev -= (X[l] - Xp[l] + h * Gp[l]).squaredNorm() / (4.0 * h);
            }
            const double log_alpha = U - Up + log_rev - log_fwd;
            if (std::log(std::max(rng.uniform(), 1e-300)) < log_alpha) {
                X = Xp;
                U = Up;
                G = Gp;
                accept = true;
            }
        }
        if (after_burn_in && accept) ++diag.accepted;
        if (after_burn_in && (step - sampler.burn_in) % sampler.thinning == 0) on_sample(X);
    }
    diag.acceptance_rate =
        diag.proposals > 0 ? static_cast<double>(diag.accepted) / diag.proposals : 0.0;
    if (diag.acceptance_rate < 0.1 || diag.acceptance_rate > 0.9) {
        diag.rate_warning = true;
        std::ostringstream os;
        os << "acceptance rate " << diag.acceptance_rate << " outside [0.1, 0.9]; try step_size "
           << (diag.acceptance_rate < 0.1 ? h / 4.0 : h * 4.0);
        diag.message = os.str();
    }
    return diag;
}

}  // namespace

GibbsDiagnostics run_mala_poly(int K, int N, int N_prime,
                               const std::vector<std::pair<double, PolyElement>>& potential,
                               double cutoff_R, const SamplerConfig& sampler, std::uint64_t seed,
                               const std::function<void(const std::vector<Matrix>&)>& on_sample) {
    GibbsModel model;
    model.n_letters = K;
    model.dims.assign(K, {N, N_prime > 0 ? N_prime : N});
    for (const auto& [coupling, elem] : potential) {
        for (const auto& [mono, coeff] : elem.terms()) {
            GibbsModel::Word w;
            w.weight = coupling * coeff.to_double();
            for (const auto& l : mono.letters()) w.letters.emplace_back(l.index - 1, l.starred);
            model.words.push_back(std::move(w));
        }
    }
    return run_chain(model, N, cutoff_R, sampler, seed, on_sample);
}

GibbsDiagnostics gibbs_sample(const EnsembleConfig& cfg,
                              const std::function<void(const std::vector<Matrix>&)>& on_sample) {
    cfg.validate();
    const bool graph_mode = cfg.mode == EnsembleConfig::Mode::GibbsGraph;
    if (cfg.mode != EnsembleConfig::Mode::GibbsPoly && !graph_mode)
        throw ValidationError("gibbs_sample: mode must be gibbs-poly or gibbs-graph");
    if (!graph_mode)
        return run_mala_poly(cfg.K, cfg.N, cfg.n_prime(), cfg.potential, cfg.cutoff_R,
                             cfg.sampler, cfg.seed, on_sample);
    BipartiteGraph graph = *cfg.graph;
    PFData pf = pf_eigen(graph);
    GibbsModel model = build_graph_model(cfg, graph, pf);
    return run_chain(model, cfg.N, cfg.cutoff_R, cfg.sampler, cfg.seed, on_sample);
}

EstimateResult estimate_trace_gibbs(const PolyElement& Q, const EnsembleConfig& cfg,
                                    GibbsDiagnostics* diagnostics) {
    const auto t0 = Clock::now();
    std::vector<double> xs;
    GibbsDiagnostics diag = gibbs_sample(cfg, [&](const std::vector<Matrix>& X) {
        double val = 0.0;
        for (const auto& [mono, coeff] : Q.terms())
            val += coeff.to_double() * trace_word(mono.letters(), X).real();
        xs.push_back(val);
    });
    if (diagnostics) *diagnostics = diag;
    EstimateResult res;
    res.observable = Q.str();
    std::tie(res.mean, res.stderr_) = mean_stderr(xs);
    res.trials = static_cast<long>(xs.size());
    res.N = cfg.N;
    res.wall_ms = ms_since(t0);
    return res;
}

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------

double SpectralHistogram::mass_above(double x) const {
    if (total == 0) return 0.0;
    const auto it = std::upper_bound(eigenvalues.begin(), eigenvalues.end(), x);
    return static_cast<double>(eigenvalues.end() - it) / static_cast<double>(total);
}

SpectralHistogram spectral_histogram(const PolyElement& Q, const EnsembleConfig& cfg, int bins,
                                     int max_moment) {
    cfg.validate();
    if (bins < 1) throw ValidationError("spectral_histogram: bins must be positive");
    SpectralHistogram h;
    for (long t = 0; t < cfg.trials; ++t) {
        RngStream rng = RngStream::derive(cfg.seed, static_cast<std::uint64_t>(t));
        std::vector<Matrix> A;
        for (int j = 0; j < cfg.K; ++j) A.push_back(sample_gaussian(cfg.N, cfg.n_prime(), rng));
        // Full matrix of the observable.
        Matrix m = Matrix::Zero(cfg.N, cfg.N);
        for (const auto& [mono, coeff] : Q.terms()) {
            Matrix w = Matrix::Identity(cfg.N, cfg.N);
            for (const auto& l : mono.letters())
                w = l.starred ? (w * A[l.index - 1].adjoint()).eval() : (w * A[l.index - 1]).eval();
            m += coeff.to_double() * w;
        }
        const double asym = (m - m.adjoint()).norm();
        if (asym > 1e-9 * std::max(1.0, m.norm()))
            throw ValidationError("spectral_histogram: observable is not self-adjoint");
        Eigen::SelfAdjointEigenSolver<Matrix> es((0.5 * (m + m.adjoint())).eval(),
                                                 Eigen::EigenvaluesOnly);
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            h.eigenvalues.push_back(es.eigenvalues()(i));
    }
    std::sort(h.eigenvalues.begin(), h.eigenvalues.end());
    h.total = static_cast<long>(h.eigenvalues.size());
    const double lo = h.eigenvalues.front();
    const double hi = h.eigenvalues.back();
    const double pad = 1e-9 * std::max(1.0, std::abs(hi));
    const double width = (hi - lo + 2 * pad) / bins;
    h.bin_edges.resize(bins + 1);
    for (int b = 0; b <= bins; ++b) h.bin_edges[b] = lo - pad + b * width;
    h.counts.assign(bins, 0);
    for (double x : h.eigenvalues) {
        int b = static_cast<int>((x - h.bin_edges.front()) / width);
        b = std::clamp(b, 0, bins - 1);
        ++h.counts[b];
    }
    h.density.resize(bins);
    for (int b = 0; b < bins; ++b)
        h.density[b] = static_cast<double>(h.counts[b]) / (static_cast<double>(h.total) * width);
    h.moments.assign(max_moment, 0.0);
    for (double x : h.eigenvalues) {
        double p = 1.0;
        for (int q = 0; q < max_moment; ++q) {
            p *= x;
            h.moments[q] += p;
        }
    }
    for (int q = 0; q < max_moment; ++q) h.moments[q] /= static_cast<double>(h.total);
    return h;
}

}  // namespace planarprob
