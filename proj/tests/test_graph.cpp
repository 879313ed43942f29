#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>

#include "planarprob/graph_pa.hpp"

using namespace planarprob;

namespace {

std::string data_path(const std::string& name) {
    const char* root = std::getenv("PLANARPROB_DATA");
    if (root != nullptr) return std::string(root) + "/graphs/" + name;
    return "data/graphs/" + name;
}

double pf_residual(const BipartiteGraph& g, const PFData& pf) {
    const int n = g.vertex_count();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const auto& [e, o] : g.edges) {
        a(e, g.odd_global(o)) += 1.0;
        a(g.odd_global(o), e) += 1.0;
    }
    Eigen::Map<const Eigen::VectorXd> mu(pf.mu.data(), n);
    return (a * mu - pf.delta * mu).lpNorm<Eigen::Infinity>();
}

}  // namespace

TEST_CASE("Perron-Frobenius data for the small graphs") {
    const auto single = BipartiteGraph::single_edge();
    const PFData pf1 = pf_eigen(single);
    CHECK(pf1.delta == doctest::Approx(1.0));
    CHECK(pf1.mu[0] == doctest::Approx(1.0));
    CHECK(pf1.mu[1] == doctest::Approx(1.0));

    const auto a3 = BipartiteGraph::path(3);
    const PFData pf3 = pf_eigen(a3);
    CHECK(pf3.delta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    // global order: even v1, v3 then odd v2
    CHECK(pf3.mu[0] == doctest::Approx(1.0));
    CHECK(pf3.mu[1] == doctest::Approx(1.0));
    CHECK(pf3.mu[2] == doctest::Approx(std::sqrt(2.0)));

    const auto a4 = BipartiteGraph::path(4);
    const PFData pf4 = pf_eigen(a4);
    CHECK(pf4.delta == doctest::Approx(2.0 * std::cos(M_PI / 5.0)).epsilon(1e-12));
    CHECK(pf4.delta == doctest::Approx((1.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-12));

    for (int K = 1; K <= 4; ++K) {
        const PFData pfs = pf_eigen(BipartiteGraph::star(K));
        CHECK(pfs.delta == doctest::Approx(std::sqrt(double(K))).epsilon(1e-12));
    }
}

TEST_CASE("disconnected graphs are rejected") {
    BipartiteGraph g;
    g.even = {"a", "b"};
    g.odd = {"c", "d"};
    g.edges = {{0, 0}, {1, 1}};
    CHECK_FALSE(g.connected());
    CHECK_THROWS_AS(pf_eigen(g), ValidationError);
    BipartiteGraph empty;
    CHECK_THROWS_AS(empty.validate(), ValidationError);
}

TEST_CASE("bundled graph files load and satisfy the residual bound") {
    for (const std::string name : {"single_edge.json", "a3.json", "a4.json", "k1k.json"}) {
        const auto g = BipartiteGraph::load(data_path(name));
        const PFData pf = pf_eigen(g);
        CHECK(pf_residual(g, pf) < 1e-12 * std::max(1.0, pf.delta));
        double lo = 1e300;
        for (double m : pf.mu) lo = std::min(lo, m);
        CHECK(lo == doctest::Approx(1.0));
    }
    CHECK_THROWS_AS(BipartiteGraph::load("no_such_file.json"), ValidationError);
    CHECK_THROWS_AS(BipartiteGraph::from_json("{\"even\": []}"), ValidationError);
}

TEST_CASE("loop enumeration and the transfer-matrix identity") {
    const auto single = BipartiteGraph::single_edge();
    CHECK(enumerate_loops(single, 1, 0).size() == 1);
    CHECK(enumerate_loops(single, 0, 0).size() == 1);
    CHECK(enumerate_loops(single, 0, 0)[0].steps.empty());

    const auto a3 = BipartiteGraph::path(3);
    CHECK(enumerate_loops(a3, 1, 2).size() == 2);  // middle vertex, global index 2

    for (const auto* g : {&single, &a3}) {
        const int n = g->vertex_count();
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        for (const auto& [e, o] : g->edges) {
            a(e, g->odd_global(o)) += 1.0;
            a(g->odd_global(o), e) += 1.0;
        }
        for (int k = 0; k <= 3; ++k) {
            Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
            for (int i = 0; i < 2 * k; ++i) power = (power * a).eval();
            for (int v = 0; v < n; ++v) {
                const auto loops = enumerate_loops(*g, k, v);
                for (const auto& l : loops) l.validate(*g);
                CHECK(static_cast<double>(loops.size()) == doctest::Approx(power(v, v)));
            }
        }
    }
    CHECK_THROWS_AS(enumerate_loops(a3, 9, 0), ResourceError);
    CHECK_THROWS_AS(enumerate_loops(a3, 1, 99), ValidationError);
}

TEST_CASE("cup element weights") {
    const auto single = BipartiteGraph::single_edge();
    const auto cup1 = cup_element(single, pf_eigen(single));
    REQUIRE(cup1.terms.size() == 1);
    CHECK(cup1.terms.begin()->second == doctest::Approx(1.0));

    const auto a3 = BipartiteGraph::path(3);
    const auto cup3 = cup_element(a3, pf_eigen(a3));
    CHECK(cup3.terms.size() == a3.edges.size());
    for (const auto& [loop, c] : cup3.terms) {
        CHECK(loop.base < a3.even_count());  // based at even starts
        CHECK(c == doctest::Approx(std::sqrt(1.0 / std::sqrt(2.0))));
    }
}

TEST_CASE("compilation to matrix words") {
    const auto single = BipartiteGraph::single_edge();
    const PFData pf1 = pf_eigen(single);
    const auto prog = compile(cup_element(single, pf1), 10, single, pf1);
    CHECK(prog.block[0] == 10);
    CHECK(prog.block[1] == 10);
    REQUIRE(prog.terms.size() == 1);
    CHECK(prog.terms[0].word.size() == 2);

    const auto a3 = BipartiteGraph::path(3);
    const PFData pf3 = pf_eigen(a3);
    const auto prog3 = compile(cup_element(a3, pf3), 10, a3, pf3);
    CHECK(prog3.block[2] == 14);  // [10 sqrt(2)]

    CHECK(compile(GraphElement{}, 10, a3, pf3).terms.empty());

    PFData tiny = pf3;
    for (auto& m : tiny.mu) m *= 0.05;
    CHECK_THROWS_AS(compile(cup_element(a3, pf3), 10, a3, tiny), ValidationError);

    // Broken chains are rejected.
    GraphElement bad;
    GraphLoop l;
    l.base = 0;
    l.steps = {{1, false}, {1, true}};  // edge 1 does not start at vertex 0
    bad.terms[l] = 1.0;
    CHECK_THROWS_AS(compile(bad, 10, a3, pf3), ValidationError);
}

TEST_CASE("cup powers expand per base vertex") {
    const auto a3 = BipartiteGraph::path(3);
    const PFData pf = pf_eigen(a3);
    const auto p2 = cup_power(a3, pf, 2);
    // Each end vertex has a single incident edge, so one length-4 loop each.
    CHECK(p2.terms.size() == 2);
    for (const auto& [loop, c] : p2.terms) {
        CHECK(loop.steps.size() == 4);
        loop.validate(a3);
        CHECK(c == doctest::Approx(1.0 / std::sqrt(2.0)));
    }
}
