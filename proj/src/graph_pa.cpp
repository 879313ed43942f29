#include "planarprob/graph_pa.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace planarprob {

bool BipartiteGraph::connected() const {
    const int n = vertex_count();
    if (n == 0) return false;
    std::vector<std::vector<int>> adj(n);
    for (const auto& [e, o] : edges) {
        adj[e].push_back(odd_global(o));
        adj[odd_global(o)].push_back(e);
    }
    std::vector<bool> seen(n, false);
    std::vector<int> stack{0};
    seen[0] = true;
    int reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adj[v]) {
            if (!seen[w]) {
                seen[w] = true;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

void BipartiteGraph::validate() const {
    if (edges.empty()) throw ValidationError("BipartiteGraph: no edges");
    for (const auto& [e, o] : edges) {
        if (e < 0 || e >= even_count()) throw ValidationError("BipartiteGraph: bad even index");
        if (o < 0 || o >= static_cast<int>(odd.size()))
            throw ValidationError("BipartiteGraph: bad odd index");
    }
    if (!connected()) throw ValidationError("BipartiteGraph: not connected");
}

std::string BipartiteGraph::json() const {
    nlohmann::json j;
    j["even"] = even;
    j["odd"] = odd;
    j["edges"] = nlohmann::json::array();
    for (const auto& [e, o] : edges) j["edges"].push_back({even[e], odd[o]});
    return j.dump(2);
}

BipartiteGraph BipartiteGraph::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ValidationError(std::string("graph JSON: ") + ex.what());
    }
    BipartiteGraph g;
    if (!j.contains("even") || !j.contains("odd") || !j.contains("edges"))
        throw ValidationError("graph JSON: expected keys even/odd/edges");
    for (const auto& v : j["even"]) g.even.push_back(v.get<std::string>());
    for (const auto& v : j["odd"]) g.odd.push_back(v.get<std::string>());
    auto find = [](const std::vector<std::string>& names, const std::string& n) {
        auto it = std::find(names.begin(), names.end(), n);
        return it == names.end() ? -1 : static_cast<int>(it - names.begin());
    };
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2)
            throw ValidationError("graph JSON: edge must be a [even, odd] pair");
        const int a = find(g.even, e[0].get<std::string>());
        const int b = find(g.odd, e[1].get<std::string>());
        if (a < 0 || b < 0)
            throw ValidationError("graph JSON: edge endpoint not among the vertices");
        g.edges.emplace_back(a, b);
    }
    g.validate();
    return g;
}

BipartiteGraph BipartiteGraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open graph file " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json(buf.str());
}

BipartiteGraph BipartiteGraph::single_edge() {
    BipartiteGraph g;
    g.even = {"v"};
    g.odd = {"w"};
    g.edges = {{0, 0}};
    return g;
}

BipartiteGraph BipartiteGraph::path(int vertices) {
    if (vertices < 2) throw ValidationError("path: need at least two vertices");
    BipartiteGraph g;
    for (int i = 0; i < vertices; ++i) {
        const std::string name = "v" + std::to_string(i + 1);
        if (i % 2 == 0)
            g.even.push_back(name);
        else
            g.odd.push_back(name);
    }
    for (int i = 0; i + 1 < vertices; ++i) {
        if (i % 2 == 0)
            g.edges.emplace_back(i / 2, i / 2);
        else
            g.edges.emplace_back((i + 1) / 2, (i - 1) / 2);
    }
    return g;
}

BipartiteGraph BipartiteGraph::star(int K) {
    if (K < 1) throw ValidationError("star: K must be positive");
    BipartiteGraph g;
    g.odd = {"hub"};
    for (int i = 0; i < K; ++i) {
        g.even.push_back("leaf" + std::to_string(i + 1));
        g.edges.emplace_back(i, 0);
    }
    return g;
}

PFData pf_eigen(const BipartiteGraph& g) {
    g.validate();
    const int n = g.vertex_count();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [e, o] : g.edges) {
        a(e, g.odd_global(o)) += 1.0;
        a(g.odd_global(o), e) += 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw ValidationError("pf_eigen: eigensolve failed");
    const int top = n - 1;  // eigenvalues sorted ascending
    PFData pf;
    pf.delta = solver.eigenvalues()(top);
    Eigen::VectorXd v = solver.eigenvectors().col(top);
    if (v.sum() < 0) v = -v;
    const double lo = v.minCoeff();
    if (lo <= 0) throw ValidationError("pf_eigen: eigenvector not positive (graph connected?)");
    v /= lo;  // min_v mu(v) = 1
    pf.mu.assign(v.data(), v.data() + n);
    const double residual = (a * v - pf.delta * v).lpNorm<Eigen::Infinity>();
    if (residual > 1e-12 * std::max(1.0, pf.delta))
        throw ValidationError("pf_eigen: residual " + std::to_string(residual) +
                              " above tolerance");
    return pf;
}

void GraphLoop::validate(const BipartiteGraph& g) const {
    if (steps.size() % 2 != 0) throw ValidationError("GraphLoop: odd length");
    int cur = base;
    for (const auto& [e, rev] : steps) {
        if (e < 0 || e >= static_cast<int>(g.edges.size()))
            throw ValidationError("GraphLoop: bad edge index");
        const int ev = g.edges[e].first;
        const int od = g.odd_global(g.edges[e].second);
        if (!rev) {
            if (cur != ev) throw ValidationError("GraphLoop: broken chain");
            cur = od;
        } else {
            if (cur != od) throw ValidationError("GraphLoop: broken chain");
            cur = ev;
        }
    }
    if (cur != base) throw ValidationError("GraphLoop: path does not close");
}

std::string GraphLoop::str(const BipartiteGraph& g) const {
    std::ostringstream os;
    const int n = g.even_count();
    os << (base < n ? g.even[base] : g.odd[base - n]) << ":";
    for (const auto& [e, rev] : steps) os << " e" << e << (rev ? "*" : "");
    return os.str();
}

std::vector<GraphLoop> enumerate_loops(const BipartiteGraph& g, int k, int base,
                                       int max_length) {
    g.validate();
    if (base < 0 || base >= g.vertex_count())
        throw ValidationError("enumerate_loops: bad base vertex");
    if (k < 0) throw ValidationError("enumerate_loops: negative length");
    if (2 * k > max_length)
        throw ResourceError("enumerate_loops: length " + std::to_string(2 * k) +
                            " exceeds limit " + std::to_string(max_length));
    std::vector<GraphLoop> out;
    GraphLoop cur;
    cur.base = base;
    // Incident edge lists per vertex, in edge-index order.
    std::vector<std::vector<int>> at_even(g.even_count()), at_odd(g.odd.size());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        at_even[g.edges[e].first].push_back(e);
        at_odd[g.edges[e].second].push_back(e);
    }
    const int n = g.even_count();
    auto dfs = [&](auto&& self, int vertex, int remaining) -> void {
        if (remaining == 0) {
            if (vertex == base) out.push_back(cur);
            return;
        }
        if (vertex < n) {
            for (int e : at_even[vertex]) {
                cur.steps.emplace_back(e, false);
                self(self, g.odd_global(g.edges[e].second), remaining - 1);
                cur.steps.pop_back();
            }
        } else {
            for (int e : at_odd[vertex - n]) {
                cur.steps.emplace_back(e, true);
                self(self, g.edges[e].first, remaining - 1);
                cur.steps.pop_back();
            }
        }
    };
    dfs(dfs, base, 2 * k);
    return out;
}

GraphElement cup_element(const BipartiteGraph& g, const PFData& pf) {
    g.validate();
    if (static_cast<int>(pf.mu.size()) != g.vertex_count())
        throw ValidationError("cup_element: PF data does not match graph");
    GraphElement out;
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
        const int v = g.edges[e].first;
        const int w = g.odd_global(g.edges[e].second);
        GraphLoop loop;
        loop.base = v;
        loop.steps = {{e, false}, {e, true}};
        out.add_term(loop, std::sqrt(pf.mu[v] / pf.mu[w]));
    }
    return out;
}

GraphElement cup_power(const BipartiteGraph& g, const PFData& pf, int p) {
    if (p < 1) throw ValidationError("cup_power: p must be positive");
    GraphElement out;
    std::vector<std::vector<int>> at_even(g.even_count());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        at_even[g.edges[e].first].push_back(e);
    for (int v = 0; v < g.even_count(); ++v) {
        const auto& incident = at_even[v];
        if (incident.empty()) continue;
        std::vector<int> pick(p, 0);
        while (true) {
            GraphLoop loop;
            loop.base = v;
            double coeff = 1.0;
            for (int i = 0; i < p; ++i) {
                const int e = incident[pick[i]];
                const int w = g.odd_global(g.edges[e].second);
                loop.steps.emplace_back(e, false);
                loop.steps.emplace_back(e, true);
                coeff *= std::sqrt(pf.mu[v] / pf.mu[w]);
            }
            out.add_term(loop, coeff);
            int pos = p - 1;
            while (pos >= 0 && pick[pos] + 1 == static_cast<int>(incident.size())) {
                pick[pos] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++pick[pos];
        }
    }
    return out;
}

MatrixWordProgram compile(const GraphElement& e, int N, const BipartiteGraph& g,
                          const PFData& pf) {
    if (N < 1) throw ValidationError("compile: N must be positive");
    MatrixWordProgram prog;
    prog.N = N;
    prog.block.resize(g.vertex_count());
    for (int v = 0; v < g.vertex_count(); ++v) {
        prog.block[v] = static_cast<int>(std::floor(N * pf.mu[v]));
        if (prog.block[v] < 1) {
            const std::string name =
                v < g.even_count() ? g.even[v] : g.odd[v - g.even_count()];
            throw ValidationError("compile: zero-dimension block at vertex " + name);
        }
    }
    for (const auto& [loop, coeff] : e.terms) {
        loop.validate(g);
        prog.terms.push_back({coeff, loop.base, loop.steps});
    }
    return prog;
}

}  // namespace planarprob
