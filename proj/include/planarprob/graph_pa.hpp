#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "planarprob/errors.hpp"

namespace planarprob {

// A connected bipartite graph. Vertices are indexed globally: even vertices
// first (0..E-1), then odd vertices (E..E+O-1); edges join an even vertex to
// an odd one. "Even" is the side loops are based on for cup-type elements.
struct BipartiteGraph {
    std::vector<std::string> even;
    std::vector<std::string> odd;
    std::vector<std::pair<int, int>> edges;  // (even index, odd index)

    int even_count() const { return static_cast<int>(even.size()); }
    int vertex_count() const { return static_cast<int>(even.size() + odd.size()); }
    int odd_global(int odd_index) const { return even_count() + odd_index; }
    bool connected() const;
    void validate() const;

    std::string json() const;
    static BipartiteGraph from_json(const std::string& text);
    static BipartiteGraph load(const std::string& path);

    static BipartiteGraph single_edge();
    static BipartiteGraph path(int vertices);  // A_n: path graph, ends even
    static BipartiteGraph star(int K);         // K_{1,K}, hub odd
};

// Perron-Frobenius data of the bipartite adjacency: the graph norm delta and
// the positive eigenvector mu indexed by global vertex, scaled to min 1.
struct PFData {
    double delta = 0.0;
    std::vector<double> mu;
    double mu_even(const BipartiteGraph& g, int e) const { return mu[e]; }
    double mu_odd(const BipartiteGraph& g, int o) const { return mu[g.odd_global(o)]; }
};

// Dense symmetric eigensolve; residual ||A mu - delta mu||_inf must come out
// below 1e-12 or the solve is rejected. Disconnected graphs are refused.
PFData pf_eigen(const BipartiteGraph& g);

// A closed path of even length: base vertex plus steps (edge, reversed);
// a non-reversed step walks even -> odd.
struct GraphLoop {
    int base = 0;  // global vertex index
    std::vector<std::pair<int, bool>> steps;
    auto operator<=>(const GraphLoop&) const = default;

    void validate(const BipartiteGraph& g) const;
    std::string str(const BipartiteGraph& g) const;
};

// Depth-first enumeration of the closed paths of length 2k from `base`
// (global vertex index), in edge-index order.
std::vector<GraphLoop> enumerate_loops(const BipartiteGraph& g, int k, int base,
                                       int max_length = 12);

// A real linear combination of loops.
struct GraphElement {
    std::map<GraphLoop, double> terms;

    void add_term(const GraphLoop& l, double c) {
        if (c == 0.0) return;
        auto [it, fresh] = terms.emplace(l, c);
        if (!fresh) {
            it->second += c;
            if (it->second == 0.0) terms.erase(it);
        }
    }
};

// The cup element: sum over positively oriented edges e = (v,w) of
// sqrt(mu(v)/mu(w)) X_e X_e*, one length-2 loop based at each even start.
GraphElement cup_element(const BipartiteGraph& g, const PFData& pf);

// Per-vertex p-th power of the cup: all p-tuples of edges from each even
// base, with the product of the per-edge sqrt weights. This is the element
// whose matrix evaluation is (cup_v)^p blockwise.
GraphElement cup_power(const BipartiteGraph& g, const PFData& pf, int p);

// A loop element compiled to matrix words: block sizes are the integer parts
// [N mu(v)], each step contributes the edge matrix or its adjoint.
struct MatrixWordProgram {
    struct Term {
        double coeff;
        int base;  // global vertex index
        std::vector<std::pair<int, bool>> word;
    };
    int N = 0;
    std::vector<int> block;  // per global vertex
    std::vector<Term> terms;
};

MatrixWordProgram compile(const GraphElement& e, int N, const BipartiteGraph& g,
                          const PFData& pf);

}  // namespace planarprob
