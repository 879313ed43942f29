#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "planarprob/maps_engine.hpp"
#include "planarprob/tangle_ops.hpp"

using namespace planarprob;

namespace {

long long catalan(int n) {
    std::vector<long long> c(n + 1, 0);
    c[0] = 1;
    for (int i = 1; i <= n; ++i)
        for (int j = 0; j < i; ++j) c[i] += c[j] * c[i - 1 - j];
    return c[n];
}

const DeltaPoly kD1 = DeltaPoly::delta_power(1);
const DeltaPoly kD2 = DeltaPoly::delta_power(2);

PolyElement one_letter_word(int p) {  // (X1 X1*)^p
    std::vector<AltMonomial::Letter> ls;
    for (int i = 0; i < p; ++i) {
        ls.push_back({1, false});
        ls.push_back({1, true});
    }
    return PolyElement(AltMonomial(ls));
}

}  // namespace

TEST_CASE("noncrossing partition moments") {
    CHECK(nc_partition_moments(1) == kD1);
    CHECK(nc_partition_moments(2) == kD2 + kD1);
    CHECK(nc_partition_moments(3) ==
          DeltaPoly::delta_power(3) + DeltaPoly::delta_power(2, Rational(3)) + kD1);
    for (int p = 1; p <= 8; ++p) {
        // Total partition count is Catalan, via the independent recursion.
        const DeltaPoly moments = nc_partition_moments(p);
        Rational total(0);
        for (const auto& [e, c] : moments.coeffs()) total += c;
        CHECK(total == Rational(catalan(p)));
    }
    CHECK_THROWS_AS(nc_partition_moments(13), ResourceError);
    CHECK_THROWS_AS(nc_partition_moments(0), ValidationError);
}

TEST_CASE("order-0 expansion reduces to the trace") {
    // Two different planarity decisions (face counting vs TL enumeration)
    // must produce the same closure sums.
    for (int k = 0; k <= 3; ++k) {
        for (const auto& d : enumerate_tl(k)) {
            const TLElement q(d);
            const auto series = gibbs_series_tl(q, {}, {});
            REQUIRE(series.coeffs.size() == 1);
            CHECK(series.coeffs.at(MultiIndex{}) == trace_tl(q));
        }
    }
}

TEST_CASE("quadratic potential sums the geometric series") {
    // V = cup + beta cup: tau(cup) = delta/(1+beta), jet delta * (-beta)^m.
    const auto series = gibbs_series_tl(TLElement::cup(), {TLElement::cup()}, {3});
    CHECK(series.coeffs.at({0}) == kD1);
    CHECK(series.coeffs.at({1}) == -kD1);
    CHECK(series.coeffs.at({2}) == kD1);
    CHECK(series.coeffs.at({3}) == -kD1);
}

TEST_CASE("quartic first order, frozen by hand and by the oracle") {
    // TL mode: the two connected planar parity-respecting gluings of the
    // 2-point disk with one 4-point disk give -(2 delta^2 + 2 delta)... the
    // four gluings split two with two loops and two with one.
    const auto series = gibbs_series_tl(TLElement::cup(), {TLElement::cup_power(2)}, {1});
    CHECK(series.coeffs.at({0}) == kD1);
    CHECK(series.coeffs.at({1}) == -(kD2 * Rational(2) + kD1 * Rational(2)));

    // Polynomial mode at K=1 and the finite-N oracle agree: coefficient -4.
    const PolyElement q = one_letter_word(1);
    const std::vector<PolyElement> pot{one_letter_word(2)};
    const auto poly = gibbs_series_poly(q, pot, {1});
    CHECK(poly.coeffs.at({1}) == Rational(-4));
    const auto oracle = wick_oracle(q, pot, {1});
    CHECK(oracle.coeffs.at({1}).coeff(0) == Rational(-4));
    // The planar disconnected gluings would add two more; keeping them would
    // give -6 and break the arbitration.
    CHECK(oracle.coeffs.at({1}) == NPoly(Rational(-4)));

    // Specializing the TL jet at delta=1 meets the one-letter model.
    CHECK(series.coeffs.at({1}).eval_exact(Rational(1)) == Rational(-4));
}

TEST_CASE("wick oracle: exact square-case moments") {
    const std::vector<PolyElement> no_potential{};
    const auto m1 = wick_oracle(one_letter_word(1), no_potential, {});
    CHECK(m1.coeffs.at({}) == NPoly(Rational(1)));  // exactly 1 for all N

    const auto m2 = wick_oracle(one_letter_word(2), no_potential, {});
    CHECK(m2.coeffs.at({}) == NPoly(Rational(2)));  // both pairings planar

    auto expected3 = NPoly(Rational(5));
    expected3.add_term(-2, Rational(1));  // one genus-one pairing
    const auto m3 = wick_oracle(one_letter_word(3), no_potential, {});
    CHECK(m3.coeffs.at({}) == expected3);

    for (int p = 1; p <= 5; ++p) {
        const auto mp = wick_oracle(one_letter_word(p), no_potential, {});
        CHECK(mp.coeffs.at({}).coeff(0) == Rational(catalan(p)));
        CHECK(mp.coeffs.at({}).even_nonpositive());
        CHECK(mp.coeffs.at({}).coeff(0) ==
              nc_partition_moments(p).eval_exact(Rational(1)));
    }
}

TEST_CASE("oracle arbitration through total order two") {
    const std::vector<PolyElement> pot{one_letter_word(2)};
    for (int deg = 1; deg <= 2; ++deg) {
        const PolyElement q = one_letter_word(deg);
        const auto planar = gibbs_series_poly(q, pot, {2});
        const auto oracle = wick_oracle(q, pot, {2});
        for (const auto& [m, np] : oracle.coeffs) {
            CHECK(np.even_nonpositive());
            Rational enumerated(0);
            auto it = planar.coeffs.find(m);
            if (it != planar.coeffs.end()) enumerated = it->second;
            CHECK(np.coeff(0) == enumerated);
        }
    }
}

TEST_CASE("symmetry factor: labeled over m! equals the unlabeled count") {
    // Q = cup, W = cup, m = 2: the two labeled gluings swap under relabeling
    // the two potential disks, so the stored coefficient is the one unlabeled
    // configuration's weight delta.
    const auto series = gibbs_series_tl(TLElement::cup(), {TLElement::cup()}, {2});
    CHECK(series.coeffs.at({2}) == kD1);
    // And at m = 1 a single gluing survives (the straight join).
    CHECK(series.coeffs.at({1}) == -kD1);
}

TEST_CASE("loop model series") {
    const auto series = on_model_series(TLElement::cup(), 1, 1);
    CHECK(series.coeffs.at({0, 0}) == kD1);

    // Coefficients are polynomial in delta: no negative powers anywhere.
    for (const auto& [m, c] : series.coeffs) CHECK(c.min_exponent() >= 0);

    // delta = K specialization against the polynomial mode, K in {1, 2}.
    for (int K = 1; K <= 2; ++K) {
        const PolyElement q = embed_tl(K, TLElement::cup());
        const std::vector<PolyElement> pot{embed_tl(K, TLElement::cup_power(2)),
                                           embed_tl(K, TLElement::nested_cup())};
        const auto poly = gibbs_series_poly(q, pot, {1, 1});
        for (const auto& [m, c] : poly.coeffs) {
            auto it = series.coeffs.find(m);
            const Rational tl_val =
                it == series.coeffs.end() ? Rational(0) : it->second.eval_exact(Rational(K));
            CHECK(tl_val == c);
        }
        // Indices where the TL jet vanishes at delta=K must be absent or zero
        // on the polynomial side too.
        for (const auto& [m, c] : series.coeffs) {
            if (poly.coeffs.count(m)) continue;
            CHECK(c.eval_exact(Rational(K)) == Rational(0));
        }
    }

    // beta2 = 0 column at delta = 1 equals the one-letter quartic series.
    const auto quartic = gibbs_series_poly(one_letter_word(1), {one_letter_word(2)}, {2});
    const auto on22 = on_model_series(TLElement::cup(), 2, 0);
    for (const auto& [m, c] : on22.coeffs) {
        Rational expect(0);
        auto it = quartic.coeffs.find({m[0]});
        if (it != quartic.coeffs.end()) expect = it->second;
        CHECK(c.eval_exact(Rational(1)) == expect);
    }
}

TEST_CASE("budget and validation errors") {
    CHECK_THROWS_AS(gibbs_series_tl(TLElement::cup(), {TLElement::cup_power(2)}, {10}),
                    ResourceError);
    CHECK_THROWS_AS(gibbs_series_tl(TLElement::cup() + TLElement::unit(), {}, {}),
                    ValidationError);  // inhomogeneous observable
    CHECK_THROWS_AS(gibbs_series_tl(TLElement::cup(), {TLElement::unit()}, {1}),
                    ValidationError);  // potential of grade 0
    CHECK_THROWS_AS(gibbs_series_tl(TLElement::cup(), {TLElement::cup()}, {1, 1}),
                    ValidationError);  // arity mismatch
}
