// planarprob: exact planar-algebra arithmetic, planar-map series, and random
// matrix Monte Carlo from one binary. Subcommands: tl, moments, series,
// onmodel, rmt, spectrum. Exit codes: 0 ok, 1 numeric-tolerance failure,
// 2 usage/validation errors.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "json.hpp"

#include "planarprob/graph_pa.hpp"
#include "planarprob/maps_engine.hpp"
#include "planarprob/rmt.hpp"
#include "planarprob/tangle_ops.hpp"

namespace pp = planarprob;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "planarprob 0.1.0";

std::string now_iso8601() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%FT%TZ", std::gmtime(&t));
    return buf;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Stable under key reordering: nlohmann objects iterate in sorted key order.
std::string config_hash(const json& j) {
    std::ostringstream os;
    os << std::hex << fnv1a(j.dump());
    return os.str();
}

struct ManifestInfo {
    std::string command_line;
    std::string hash;
    std::uint64_t seed = 0;
    std::string started;
};

void write_manifest(const ManifestInfo& info, const std::vector<std::string>& outputs) {
    if (outputs.empty()) return;
    json m;
    m["command_line"] = info.command_line;
    m["config_hash"] = info.hash;
    m["seed"] = info.seed;
    m["version"] = kVersion;
    m["started"] = info.started;
    m["finished"] = now_iso8601();
    m["outputs"] = outputs;
    std::ofstream out(outputs.front() + ".manifest.json");
    out << m.dump(2) << "\n";
}

std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("PLANARPROB_SEED");
    if (s == nullptr) return std::nullopt;
    return std::strtoull(s, nullptr, 10);
}

json delta_poly_json(const pp::DeltaPoly& p) {
    json out = json::array();
    for (const auto& [e, c] : p.coeffs()) out.push_back({e, c.num(), c.den()});
    return out;
}

json npoly_json(const pp::NPoly& p) {
    json out = json::array();
    for (const auto& [e, c] : p.coeffs()) out.push_back({e, c.num(), c.den()});
    return out;
}

json rational_json(const pp::Rational& r) { return json::array({r.num(), r.den()}); }

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 0; i < argc; ++i) {
        if (i) s += " ";
        s += argv[i];
    }
    return s;
}

pp::MultiIndex parse_orders(const std::string& s) {
    pp::MultiIndex m;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) m.push_back(std::stoi(tok));
    return m;
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw pp::ValidationError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw pp::ValidationError(std::string("JSON parse error in ") + path + ": " + ex.what());
    }
    return j;
}

// ---------------------------------------------------------------------------
// tl subcommand
// ---------------------------------------------------------------------------

int run_tl_dim(int k) {
    std::cout << pp::enumerate_tl(k).size() << "\n";
    return 0;
}

int run_tl_trace(const std::string& spec) {
    const pp::TLElement x = pp::TLElement::parse_spec(spec);
    std::cout << pp::trace_tl(x).str() << "\n";
    return 0;
}

int run_tl_gram(int k, double delta, const std::string& out_path, const ManifestInfo& info) {
    const auto gram = pp::gram_matrix(k);
    const int n = static_cast<int>(gram.size());
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = gram[i][j].eval(delta);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    std::ostringstream csv;
    csv << "# gram matrix k=" << k << " delta=" << delta << "\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) csv << (j ? "," : "") << m(i, j);
        csv << "\n";
    }
    csv << "# eigenvalues (descending)\n";
    for (int i = n - 1; i >= 0; --i) csv << es.eigenvalues()(i) << (i ? "," : "\n");
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        out << csv.str();
        write_manifest(info, {out_path});
    }
    return 0;
}

// ---------------------------------------------------------------------------
// series / onmodel
// ---------------------------------------------------------------------------

json delta_series_json(const pp::DeltaSeries& s, const std::string& observable) {
    json j;
    j["mode"] = "tl";
    j["observable"] = observable;
    j["orders"] = s.orders;
    j["coefficients"] = json::array();
    for (const auto& [m, c] : s.coeffs)
        j["coefficients"].push_back({{"index", m}, {"delta", delta_poly_json(c)}});
    return j;
}

json rational_series_json(const pp::RationalSeries& s, const std::string& observable, int K) {
    json j;
    j["mode"] = "poly";
    j["K"] = K;
    j["observable"] = observable;
    j["orders"] = s.orders;
    j["coefficients"] = json::array();
    for (const auto& [m, c] : s.coeffs)
        j["coefficients"].push_back({{"index", m}, {"rational", rational_json(c)}});
    return j;
}

void emit(const json& j, const std::string& out_path, const ManifestInfo& info) {
    if (out_path.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        out << j.dump(2) << "\n";
        write_manifest(info, {out_path});
    }
}

int run_series_gibbs(const std::string& config_path, const std::string& out_path, bool oracle,
                     int threads, ManifestInfo info) {
    const json cfg = load_json(config_path);
    info.hash = config_hash(cfg);
    const std::string mode = cfg.value("mode", "tl");
    pp::MapsOptions opts;
    opts.max_half_edges = cfg.value("max_half_edges", 24);
    opts.threads = threads;
    pp::MultiIndex orders;
    for (int v : cfg.at("orders")) orders.push_back(v);
    const std::string qspec = cfg.value("observable", "cup");

    if (mode == "tl") {
        std::vector<pp::TLElement> pot;
        for (const auto& t : cfg.at("potential"))
            pot.push_back(pp::TLElement::parse_spec(t.at("element").get<std::string>()));
        const auto series =
            pp::gibbs_series_tl(pp::TLElement::parse_spec(qspec), pot, orders, opts);
        emit(delta_series_json(series, qspec), out_path, info);
        return 0;
    }
    if (mode != "poly") throw pp::ValidationError("series gibbs: mode must be tl or poly");
    const int K = cfg.value("K", 1);
    std::vector<pp::PolyElement> pot;
    for (const auto& t : cfg.at("potential"))
        pot.push_back(pp::parse_element_spec(t.at("element").get<std::string>(), K));
    const pp::PolyElement Q = pp::parse_element_spec(qspec, K);
    const auto series = pp::gibbs_series_poly(Q, pot, orders, opts);
    json j = rational_series_json(series, qspec, K);
    int status = 0;
    if (oracle) {
        const auto ns = pp::wick_oracle(Q, pot, orders, opts);
        j["oracle"] = json::array();
        j["diff_planar"] = json::array();
        for (const auto& [m, np] : ns.coeffs) {
            j["oracle"].push_back({{"index", m}, {"npoly", npoly_json(np)}});
            pp::Rational planar = np.coeff(0);
            pp::Rational enumerated(0);
            auto it = series.coeffs.find(m);
            if (it != series.coeffs.end()) enumerated = it->second;
            const pp::Rational diff = planar - enumerated;
            j["diff_planar"].push_back({{"index", m}, {"rational", rational_json(diff)}});
            if (!diff.is_zero()) status = 1;
        }
    }
    emit(j, out_path, info);
    return status;
}

int run_onmodel(const std::string& orders_str, const std::string& qspec, const std::string& delta,
                const std::string& out_path, int threads, ManifestInfo info) {
    const pp::MultiIndex orders = parse_orders(orders_str);
    if (orders.size() != 2)
        throw pp::ValidationError("onmodel: --orders expects two comma-separated bounds");
    pp::MapsOptions opts;
    opts.threads = threads;
    const auto series =
        pp::on_model_series(pp::TLElement::parse_spec(qspec), orders[0], orders[1], opts);
    json j = delta_series_json(series, qspec);
    j["model"] = "on";
    if (!delta.empty()) {
        const double d = std::stod(delta);
        j["delta"] = d;
        json evals = json::array();
        for (const auto& [m, c] : series.coeffs)
            evals.push_back({{"index", m}, {"value", c.eval(d)}});
        j["evaluated"] = evals;
    }
    emit(j, out_path, info);
    return 0;
}

// ---------------------------------------------------------------------------
// rmt / spectrum
// ---------------------------------------------------------------------------

struct CheckSpec {
    json series;
    double allowance = 0.02;
    std::vector<double> couplings;
    double delta_or_k = 1.0;
};

double series_jet_value(const json& series, const std::vector<double>& couplings,
                        double delta_or_k) {
    double total = 0.0;
    for (const auto& row : series.at("coefficients")) {
        const auto idx = row.at("index").get<std::vector<int>>();
        if (idx.size() != couplings.size())
            throw pp::ValidationError("--check: series multi-index arity differs from couplings");
        double beta = 1.0;
        for (size_t i = 0; i < idx.size(); ++i)
            for (int q = 0; q < idx[i]; ++q) beta *= couplings[i];
        double coeff = 0.0;
        if (row.contains("rational")) {
            coeff = pp::Rational(row["rational"][0].get<std::int64_t>(),
                                 row["rational"][1].get<std::int64_t>())
                        .to_double();
        } else {
            for (const auto& term : row.at("delta")) {
                const double c = pp::Rational(term[1].get<std::int64_t>(),
                                              term[2].get<std::int64_t>())
                                     .to_double();
                coeff += c * std::pow(delta_or_k, term[0].get<int>());
            }
        }
        total += beta * coeff;
    }
    return total;
}

int run_rmt(const std::string& kind, const std::string& config_path, const std::string& out_path,
            const std::string& check_path, double allowance, int threads, ManifestInfo info) {
    const json raw = load_json(config_path);
    info.hash = config_hash(raw);
    pp::EnsembleConfig cfg = pp::EnsembleConfig::from_json(raw.dump());
    if (auto s = env_seed()) cfg.seed = *s;
    info.seed = cfg.seed;
    if (threads > 0) cfg.threads = threads;

    const auto expect_mode = [&kind]() {
        if (kind == "gaussian") return std::vector<pp::EnsembleConfig::Mode>{
            pp::EnsembleConfig::Mode::GaussianPoly};
        if (kind == "graph") return std::vector<pp::EnsembleConfig::Mode>{
            pp::EnsembleConfig::Mode::GaussianGraph};
        return std::vector<pp::EnsembleConfig::Mode>{pp::EnsembleConfig::Mode::GibbsPoly,
                                                     pp::EnsembleConfig::Mode::GibbsGraph};
    }();
    if (std::find(expect_mode.begin(), expect_mode.end(), cfg.mode) == expect_mode.end())
        throw pp::ValidationError("rmt " + kind + ": config mode mismatch");

    std::vector<std::pair<std::string, pp::EstimateResult>> rows;
    if (cfg.mode == pp::EnsembleConfig::Mode::GaussianPoly) {
        for (const auto& ospec : raw.at("observables")) {
            const auto Q = pp::parse_element_spec(ospec.get<std::string>(), cfg.K);
            rows.emplace_back(ospec.get<std::string>(), pp::estimate_trace_gaussian(Q, cfg));
        }
    } else if (cfg.mode == pp::EnsembleConfig::Mode::GaussianGraph) {
        const pp::PFData pf = pp::pf_eigen(*cfg.graph);
        for (const auto& ospec : raw.at("observables")) {
            const std::string spec = ospec.get<std::string>();
            pp::GraphElement Q;
            if (spec == "cup")
                Q = pp::cup_element(*cfg.graph, pf);
            else if (spec.rfind("cup^", 0) == 0)
                Q = pp::cup_power(*cfg.graph, pf, std::stoi(spec.substr(4)));
            else
                throw pp::ValidationError("rmt graph: unsupported observable '" + spec + "'");
            rows.emplace_back(spec, pp::estimate_trace_graph(Q, cfg, *cfg.graph, pf));
        }
    } else {
        for (const auto& ospec : raw.at("observables")) {
            const auto Q = pp::parse_element_spec(ospec.get<std::string>(), cfg.K);
            pp::GibbsDiagnostics diag;
            rows.emplace_back(ospec.get<std::string>(), pp::estimate_trace_gibbs(Q, cfg, &diag));
            if (diag.rate_warning) std::cerr << "warning: " << diag.message << "\n";
        }
    }

    std::ostringstream csv;
    csv << "observable,N,trials,mean,stderr,seed,wall_ms\n";
    csv.precision(12);
    for (const auto& [name, r] : rows)
        csv << name << "," << r.N << "," << r.trials << "," << r.mean << "," << r.stderr_ << ","
            << cfg.seed << "," << r.wall_ms << "\n";
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        out << csv.str();
        write_manifest(info, {out_path});
    }

    if (check_path.empty()) return 0;
    const json series = load_json(check_path);
    const std::string sobs = series.value("observable", "");
    std::vector<double> couplings;
    if (raw.contains("check_couplings"))
        for (double b : raw["check_couplings"]) couplings.push_back(b);
    const double dk = raw.value("check_delta", static_cast<double>(cfg.K));
    int status = 0;
    bool matched = false;
    for (const auto& [name, r] : rows) {
        if (name != sobs) continue;
        matched = true;
        const double jet = series_jet_value(series, couplings, dk);
        const double tol = 3.0 * r.stderr_ + allowance * std::abs(jet);
        const double diff = std::abs(r.mean - jet);
        std::cout << "check " << name << ": mc=" << r.mean << " jet=" << jet
                  << " |diff|=" << diff << " tol=" << tol
                  << (diff <= tol ? " PASS" : " FAIL") << "\n";
        if (diff > tol) status = 1;
    }
    if (!matched)
        throw pp::ValidationError("--check: series observable '" + sobs +
                                  "' does not match any configured observable");
    return status;
}

int run_spectrum(const std::string& config_path, const std::string& out_path, int bins,
                 ManifestInfo info) {
    const json raw = load_json(config_path);
    info.hash = config_hash(raw);
    pp::EnsembleConfig cfg = pp::EnsembleConfig::from_json(raw.dump());
    if (auto s = env_seed()) cfg.seed = *s;
    info.seed = cfg.seed;
    const std::string ospec = raw.value("observable", "cup");
    const auto Q = pp::parse_element_spec(ospec, cfg.K);
    const auto h = pp::spectral_histogram(Q, cfg, bins);
    std::ostringstream csv;
    csv << "bin_left,bin_right,density\n";
    csv.precision(12);
    for (size_t b = 0; b + 1 < h.bin_edges.size(); ++b)
        csv << h.bin_edges[b] << "," << h.bin_edges[b + 1] << "," << h.density[b] << "\n";
    if (out_path.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(out_path);
        out << csv.str();
        write_manifest(info, {out_path});
    }
    std::cout << "# moments:";
    for (double m : h.moments) std::cout << " " << m;
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{kVersion};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "worker thread cap (0 = hardware)");

    ManifestInfo info;
    info.command_line = join_args(argc, argv);
    info.started = now_iso8601();

    // tl
    auto* tl = app.add_subcommand("tl", "Temperley-Lieb arithmetic");
    tl->require_subcommand(1);
    auto* tl_dim = tl->add_subcommand("dim", "dimension of the size-k diagram space");
    int dim_k = 0;
    tl_dim->add_option("--k", dim_k, "size")->required();
    auto* tl_trace = tl->add_subcommand("trace", "Voiculescu trace of an element");
    std::string trace_spec;
    tl_trace->add_option("--element", trace_spec, "element spec")->required();
    auto* tl_gram = tl->add_subcommand("gram", "Gram matrix and eigenvalues as CSV");
    int gram_k = 0;
    std::string gram_delta, gram_out;
    tl_gram->add_option("--k", gram_k, "size")->required();
    tl_gram->add_option("--delta", gram_delta, "loop parameter (number)")->required();
    tl_gram->add_option("--out", gram_out, "output CSV path");

    // moments
    auto* moments = app.add_subcommand("moments", "free Poisson moments from NC partitions");
    int moments_p = 1;
    std::string moments_delta;
    moments->add_option("--p", moments_p, "moment order")->required();
    moments->add_option("--delta", moments_delta, "optional numeric evaluation point");

    // series
    auto* series = app.add_subcommand("series", "planar-map expansions");
    series->require_subcommand(1);
    auto* series_gibbs = series->add_subcommand("gibbs", "free Gibbs law jet");
    std::string sg_config, sg_out;
    bool sg_oracle = false;
    series_gibbs->add_option("--config", sg_config, "JSON config")->required();
    series_gibbs->add_option("--out", sg_out, "output JSON path");
    series_gibbs->add_flag("--oracle", sg_oracle, "also run the finite-N oracle and diff");
    auto* series_onmodel = series->add_subcommand("onmodel", "loop-model series");
    std::string so_orders, so_q = "cup", so_delta, so_out;
    series_onmodel->add_option("--orders", so_orders, "m1,m2 bounds")->required();
    series_onmodel->add_option("--q", so_q, "observable spec");
    series_onmodel->add_option("--delta", so_delta, "optional evaluation point");
    series_onmodel->add_option("--out", so_out, "output JSON path");

    // onmodel (top-level alias)
    auto* onmodel = app.add_subcommand("onmodel", "loop-model series");
    std::string om_orders, om_q = "cup", om_delta, om_out;
    onmodel->add_option("--orders", om_orders, "m1,m2 bounds")->required();
    onmodel->add_option("--q", om_q, "observable spec");
    onmodel->add_option("--delta", om_delta, "optional evaluation point");
    onmodel->add_option("--out", om_out, "output JSON path");

    // rmt
    auto* rmt = app.add_subcommand("rmt", "random matrix Monte Carlo");
    rmt->require_subcommand(1);
    std::string rmt_config, rmt_out, rmt_check;
    double rmt_allowance = 0.02;
    for (const char* kind : {"gaussian", "graph", "gibbs"}) {
        auto* sub = rmt->add_subcommand(kind, std::string("run the ") + kind + " ensemble");
        sub->add_option("--config", rmt_config, "EnsembleConfig JSON")->required();
        sub->add_option("--out", rmt_out, "output CSV path");
        sub->add_option("--check", rmt_check, "series JSON to compare against");
        sub->add_option("--allowance", rmt_allowance, "relative truncation allowance");
    }

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "pooled eigenvalue histogram");
    std::string sp_config, sp_out;
    int sp_bins = 64;
    spectrum->add_option("--config", sp_config, "EnsembleConfig JSON")->required();
    spectrum->add_option("--out", sp_out, "output CSV path");
    spectrum->add_option("--bins", sp_bins, "bin count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (tl_dim->parsed()) return run_tl_dim(dim_k);
        if (tl_trace->parsed()) return run_tl_trace(trace_spec);
        if (tl_gram->parsed()) return run_tl_gram(gram_k, std::stod(gram_delta), gram_out, info);
        if (moments->parsed()) {
            const auto p = pp::nc_partition_moments(moments_p);
            std::cout << p.str() << "\n";
            if (!moments_delta.empty())
                std::cout << "at delta=" << moments_delta << ": " << p.eval(std::stod(moments_delta))
                          << "\n";
            return 0;
        }
        if (series_gibbs->parsed())
            return run_series_gibbs(sg_config, sg_out, sg_oracle, threads, info);
        if (series_onmodel->parsed())
            return run_onmodel(so_orders, so_q, so_delta, so_out, threads, info);
        if (onmodel->parsed()) return run_onmodel(om_orders, om_q, om_delta, om_out, threads, info);
        for (const char* kind : {"gaussian", "graph", "gibbs"}) {
            if (rmt->parsed() && rmt->get_subcommand(kind)->parsed())
                return run_rmt(kind, rmt_config, rmt_out, rmt_check, rmt_allowance, threads, info);
        }
        if (spectrum->parsed()) return run_spectrum(sp_config, sp_out, sp_bins, info);
        std::cerr << "no subcommand\n";
        return 2;
    } catch (const pp::ResourceError& ex) {
        std::cerr << "resource limit: " << ex.what() << "\n";
        return 2;
    } catch (const pp::ValidationError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
}
