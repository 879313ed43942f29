#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "planarprob/maps_engine.hpp"
#include "planarprob/poly_pa.hpp"
#include "planarprob/tangle_ops.hpp"

using namespace planarprob;

namespace {

AltMonomial mono(const std::string& s) { return AltMonomial::parse(s); }

TLElement random_diagram_element(std::mt19937& gen, int grade) {
    const auto basis = enumerate_tl(grade);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(basis.size()) - 1);
    return TLElement(basis[pick(gen)]);
}

}  // namespace

TEST_CASE("alternating monomials validate and round-trip") {
    CHECK(mono("X1 X1*").degree() == 2);
    CHECK(mono("1").degree() == 0);
    CHECK(mono("X1 X2* X3 X1*").str() == "X1 X2* X3 X1*");
    CHECK_THROWS_AS(mono("X1 X2"), ValidationError);   // missing star
    CHECK_THROWS_AS(mono("X1* X1"), ValidationError);  // starts starred
    CHECK_THROWS_AS(mono("X1"), ValidationError);      // odd degree
    CHECK_THROWS_AS(mono("Y1 Y1*"), ValidationError);
    CHECK_THROWS_AS(AltMonomial({{0, false}, {1, true}}), ValidationError);
}

TEST_CASE("embed_tl produces the invariant sums") {
    // cup -> sum_i Xi Xi*
    PolyElement cup2 = embed_tl(2, TLElement::cup());
    PolyElement expect;
    expect.add_term(mono("X1 X1*"), Rational(1));
    expect.add_term(mono("X2 X2*"), Rational(1));
    CHECK(cup2 == expect);

    // nested double cup -> sum_{i,j} Xi Xj* Xj Xi*
    PolyElement ncup = embed_tl(2, TLElement::nested_cup());
    PolyElement expect_n;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            std::vector<AltMonomial::Letter> ls = {
                {i, false}, {j, true}, {j, false}, {i, true}};
            expect_n.add_term(AltMonomial(ls), Rational(1));
        }
    CHECK(ncup == expect_n);

    // side-by-side double cup -> sum_{i,j} Xi Xi* Xj Xj*
    PolyElement cupcup = embed_tl(2, TLElement::cup_power(2));
    PolyElement expect_cc;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            std::vector<AltMonomial::Letter> ls = {
                {i, false}, {i, true}, {j, false}, {j, true}};
            expect_cc.add_term(AltMonomial(ls), Rational(1));
        }
    CHECK(cupcup == expect_cc);

    // Delta-polynomial coefficients evaluate at delta = K.
    const TLElement scaled = TLElement::cup() * DeltaPoly::delta_power(1);
    const PolyElement img = embed_tl(3, scaled);
    CHECK(img.terms().at(mono("X1 X1*")) == Rational(3));
}

TEST_CASE("poly_mul concatenates and embed_tl is a homomorphism") {
    const PolyElement a(mono("X1 X1*"));
    const PolyElement b(mono("X2 X2*"));
    CHECK(poly_mul(a, b) == PolyElement(mono("X1 X1* X2 X2*")));
    CHECK(poly_mul(PolyElement::unit(), a) == a);
    CHECK(poly_mul(a, PolyElement::unit()) == a);

    CHECK(poly_mul(embed_tl(2, TLElement::cup()), embed_tl(2, TLElement::cup())) ==
          embed_tl(2, TLElement::cup_power(2)));

    std::mt19937 gen(47);
    for (int K = 1; K <= 3; ++K) {
        for (int trial = 0; trial < 15; ++trial) {
            std::uniform_int_distribution<int> g(0, 3);
            const TLElement x = random_diagram_element(gen, g(gen));
            const TLElement y = random_diagram_element(gen, g(gen));
            CHECK(embed_tl(K, wedge(0, x, y)) == poly_mul(embed_tl(K, x), embed_tl(K, y)));
        }
    }
}

TEST_CASE("gaussian trace counts label-compatible noncrossing matchings") {
    CHECK(gaussian_trace_poly(mono("X1 X1*"), 1) == Rational(1));
    CHECK(gaussian_trace_poly(mono("X1 X1* X1 X1*"), 1) == Rational(2));
    CHECK(gaussian_trace_poly(mono("X1 X2* X2 X1*"), 2) == Rational(1));
    CHECK(gaussian_trace_poly(mono("X1 X2* X1 X2*"), 2) == Rational(0));
    CHECK(gaussian_trace_poly(AltMonomial(), 1) == Rational(1));
    CHECK_THROWS_AS(gaussian_trace_poly(mono("X3 X3*"), 2), ValidationError);
}

TEST_CASE("two independent trace paths agree at integer delta") {
    std::mt19937 gen(53);
    for (int K = 1; K <= 3; ++K) {
        for (int k = 0; k <= 3; ++k) {
            for (const auto& d : enumerate_tl(k)) {
                const TLElement x(d);
                const Rational via_poly = gaussian_trace_poly(embed_tl(K, x), K);
                const Rational via_tl = trace_tl(x).eval_exact(Rational(K));
                CHECK(via_poly == via_tl);
            }
        }
    }
}

TEST_CASE("free Poisson at integer parameter") {
    for (int K = 1; K <= 3; ++K) {
        PolyElement power = PolyElement::unit();
        const PolyElement cup = embed_tl(K, TLElement::cup());
        for (int p = 1; p <= 5; ++p) {
            power = poly_mul(power, cup);
            CHECK(gaussian_trace_poly(power, K) ==
                  nc_partition_moments(p).eval_exact(Rational(K)));
        }
    }
}

TEST_CASE("element specs parse") {
    CHECK(parse_element_spec("cup", 2) == embed_tl(2, TLElement::cup()));
    CHECK(parse_element_spec("cup^3", 1) == embed_tl(1, TLElement::cup_power(3)));
    CHECK(parse_element_spec("ncup", 2) == embed_tl(2, TLElement::nested_cup()));
    CHECK(parse_element_spec("1", 5) == PolyElement::unit());
    PolyElement sum;
    sum.add_term(mono("X1 X1*"), Rational(1));
    sum.add_term(mono("X2 X2*"), Rational(3, 2));
    CHECK(parse_element_spec("X1 X1* + 3/2*X2 X2*", 2) == sum);
    CHECK_THROWS_AS(parse_element_spec("X3 X3*", 2), ValidationError);
    CHECK_THROWS_AS(parse_element_spec("", 1), ValidationError);
}
