#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "planarprob/maps_engine.hpp"
#include "planarprob/tangle_ops.hpp"

using namespace planarprob;

namespace {

TLElement random_element(std::mt19937& gen, int grade, int terms = 2) {
    const auto basis = enumerate_tl(grade);
    std::uniform_int_distribution<int> pick(0, static_cast<int>(basis.size()) - 1);
    std::uniform_int_distribution<int> coeff(-3, 3);
    TLElement x;
    for (int t = 0; t < terms; ++t) x.add_term(basis[pick(gen)], DeltaPoly(Rational(coeff(gen))));
    return x;
}

const DeltaPoly kDelta = DeltaPoly::delta_power(1);

}  // namespace

TEST_CASE("wedge: concatenation, units, golden joins") {
    const TLElement cup = TLElement::cup();
    const TLElement unit = TLElement::unit();

    CHECK(wedge(0, cup, unit) == cup);
    CHECK(wedge(0, unit, cup) == cup);
    CHECK(wedge(0, cup, cup) == TLElement::cup_power(2));

    // The size-1 diagram is the unit of the 1-strand join, so x ^_1 x = x
    // (golden value from the gluing engine: the joined strands do not close).
    CHECK(wedge(1, cup, cup) == cup);

    // Grade-2 cap element squares to delta times itself under the 2-strand join.
    const TLElement e = TLElement::cup_power(2);
    CHECK(wedge(2, e, e) == e * kDelta);
    // ...and the rainbow is the unit there.
    const TLElement id2 = TLElement::rainbow(2);
    CHECK(wedge(2, id2, e) == e);
    CHECK(wedge(2, e, id2) == e);
    CHECK(wedge(2, id2, id2) == id2);

    CHECK_THROWS_AS(wedge(1, unit, cup), ValidationError);  // grade below k
}

TEST_CASE("wedge is associative for k in {0,1,2}") {
    std::mt19937 gen(23);
    for (int k = 0; k <= 2; ++k) {
        for (int trial = 0; trial < 20; ++trial) {
            std::uniform_int_distribution<int> g(k, 4);
            const TLElement a = random_element(gen, g(gen));
            const TLElement b = random_element(gen, g(gen));
            const TLElement c = random_element(gen, g(gen));
            CHECK(wedge(k, wedge(k, a, b), c) == wedge(k, a, wedge(k, b, c)));
        }
    }
}

TEST_CASE("eps caps strands with the delta^-k normalization") {
    const TLElement cup = TLElement::cup();
    std::mt19937 gen(29);
    const TLElement x = random_element(gen, 3);
    CHECK(eps(0, x) == x);
    CHECK(eps(1, cup) == TLElement::unit());
    for (int k = 1; k <= 3; ++k) CHECK(eps(k, TLElement::rainbow(k)) == TLElement::unit());

    // Capping the outer pair of the double cup leaves a cup over delta.
    const TLElement dd = eps(1, TLElement::cup_power(2));
    CHECK(dd == cup * DeltaPoly::delta_power(-1));

    CHECK_THROWS_AS(eps(2, cup), ValidationError);

    // Linearity.
    const TLElement y = random_element(gen, 3);
    CHECK(eps(1, x + y) == eps(1, x) + eps(1, y));
}

TEST_CASE("Voiculescu trace calibration") {
    CHECK(trace_tl(TLElement::unit()) == DeltaPoly(1));
    CHECK(trace_tl(TLElement::cup()) == kDelta);
    CHECK(trace_tl(TLElement::cup_power(2)) == DeltaPoly::delta_power(2) + kDelta);
    // Nested and side-by-side double cups have equal closures.
    CHECK(trace_tl(TLElement::nested_cup()) == trace_tl(TLElement::cup_power(2)));
    // Linear across mixed grades.
    const TLElement mixed = TLElement::unit() + TLElement::cup();
    CHECK(trace_tl(mixed) == DeltaPoly(1) + kDelta);
    CHECK_THROWS_AS(trace_tl(TLElement::cup_power(9), 8), ResourceError);
}

TEST_CASE("free Poisson moments through two code paths") {
    for (int p = 1; p <= 6; ++p)
        CHECK(trace_tl(TLElement::cup_power(p)) == nc_partition_moments(p));
}

TEST_CASE("traciality of the trace, exactly") {
    for (int ka = 0; ka <= 3; ++ka) {
        for (int kb = 0; kb <= 3; ++kb) {
            for (const auto& da : enumerate_tl(ka)) {
                for (const auto& db : enumerate_tl(kb)) {
                    const TLElement a(da), b(db);
                    CHECK(trace_tl(wedge(0, a, b)) == trace_tl(wedge(0, b, a)));
                }
            }
        }
    }
    std::mt19937 gen(31);
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> g(0, 3);
        const TLElement a = random_element(gen, g(gen));
        const TLElement b = random_element(gen, g(gen));
        CHECK(trace_tl(wedge(0, a, b)) == trace_tl(wedge(0, b, a)));
    }
}

TEST_CASE("trace after eps is a trace for the k-strand join") {
    std::mt19937 gen(37);
    for (int k = 1; k <= 2; ++k) {
        for (int trial = 0; trial < 100; ++trial) {
            std::uniform_int_distribution<int> g(k, k + 1);
            const TLElement a = random_element(gen, g(gen));
            const TLElement b = random_element(gen, g(gen));
            CHECK(trace_tl(eps(k, wedge(k, a, b))) == trace_tl(eps(k, wedge(k, b, a))));
        }
    }
}

TEST_CASE("gram matrices match the strand-following golden values") {
    const auto g0 = gram_matrix(0);
    REQUIRE(g0.size() == 1);
    CHECK(g0[0][0] == DeltaPoly(1));

    const auto g1 = gram_matrix(1);
    REQUIRE(g1.size() == 1);
    CHECK(g1[0][0] == kDelta);

    const auto g2 = gram_matrix(2);
    REQUIRE(g2.size() == 2);
    const DeltaPoly d2 = DeltaPoly::delta_power(2);
    CHECK(g2[0][0] == d2);
    CHECK(g2[1][1] == d2);
    CHECK(g2[0][1] == kDelta);
    CHECK(g2[1][0] == kDelta);

    // Self-gluing closes every strand onto itself: diagonal delta^k, and the
    // matrix is symmetric.
    for (int k = 1; k <= 4; ++k) {
        const auto g = gram_matrix(k);
        for (size_t i = 0; i < g.size(); ++i) {
            CHECK(g[i][i] == DeltaPoly::delta_power(k));
            for (size_t j = 0; j < g.size(); ++j) CHECK(g[i][j] == g[j][i]);
        }
    }
}

TEST_CASE("adjoint reflects diagrams and is an involution") {
    CHECK(adjoint(TLElement::unit()) == TLElement::unit());
    const TLElement e = TLElement::cup_power(2);
    CHECK(adjoint(e) == e);  // reflection-symmetric
    for (int k = 0; k <= 5; ++k)
        for (const auto& d : enumerate_tl(k)) {
            const TLElement x(d);
            CHECK(adjoint(adjoint(x)) == x);
        }
}

TEST_CASE("trace positivity on starred squares at an admissible delta") {
    std::mt19937 gen(59);
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> g(0, 3);
        const TLElement x = random_element(gen, g(gen), 3);
        const DeltaPoly val = trace_tl(wedge(0, adjoint(x), x));
        CHECK(val.eval(2.5) >= -1e-8);
    }
}

TEST_CASE("enveloping product and trace") {
    const TLElement cup = TLElement::cup();
    const TLElement unit = TLElement::unit();
    std::mt19937 gen(41);

    // k = 0 is planar juxtaposition with the empty diagram as unit.
    CHECK(boxtimes(0, unit, cup) == cup);
    CHECK(boxtimes(0, cup, unit) == cup);
    CHECK(boxtimes(0, cup, cup) == TLElement::cup_power(2));

    // Golden value from the gluing engine.
    CHECK(boxtimes(1, cup, cup) == cup);

    // Associativity on random grade-2 elements, exact.
    for (int trial = 0; trial < 30; ++trial) {
        const TLElement a = random_element(gen, 2);
        const TLElement b = random_element(gen, 2);
        const TLElement c = random_element(gen, 2);
        CHECK(boxtimes(1, boxtimes(1, a, b), c) == boxtimes(1, a, boxtimes(1, b, c)));
        CHECK(boxtimes(2, boxtimes(2, a, b), c) == boxtimes(2, a, boxtimes(2, b, c)));
    }

    // Trace normalization and the k encircling loops on the join unit.
    CHECK(trace_boxtimes(0, unit) == DeltaPoly(1));
    CHECK(trace_boxtimes(0, cup) == trace_tl(cup));
    CHECK(trace_boxtimes(1, cup) == kDelta);
    CHECK(trace_boxtimes(2, TLElement::rainbow(2)) == DeltaPoly::delta_power(2));

    // Trace property for the enveloping product.
    for (int k = 0; k <= 2; ++k) {
        for (int trial = 0; trial < 40; ++trial) {
            std::uniform_int_distribution<int> g(std::max(k, 1), k + 1);
            const TLElement a = random_element(gen, g(gen));
            const TLElement b = random_element(gen, g(gen));
            CHECK(trace_boxtimes(k, boxtimes(k, a, b)) == trace_boxtimes(k, boxtimes(k, b, a)));
        }
    }

    CHECK_THROWS_AS(boxtimes(1, unit, cup), ValidationError);
    CHECK_THROWS_AS(trace_boxtimes(1, unit), ValidationError);
}

TEST_CASE("inclusion adds a through-strand") {
    CHECK(include_strand(TLElement::unit()) == TLElement::cup());

    // Multiplicative from concatenation into the 1-strand join.
    std::mt19937 gen(43);
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<int> g(0, 2);
        const TLElement a = random_element(gen, g(gen));
        const TLElement b = random_element(gen, g(gen));
        CHECK(include_strand(wedge(0, a, b)) ==
              wedge(1, include_strand(a), include_strand(b)));
    }

    // Trace compatibility: against the 1-strand-join trace (trace after the
    // 1-cap expectation) the inclusion preserves traces with a constant
    // measured once on the unit. No constant works for the bare trace: the
    // included cup is the nested double cup, whose closure picks up an extra
    // delta + 1 rather than delta.
    const DeltaPoly c = trace_tl(eps(1, include_strand(TLElement::unit())));
    CHECK(c == DeltaPoly(1));
    for (int trial = 0; trial < 40; ++trial) {
        std::uniform_int_distribution<int> g(0, 3);
        const TLElement x = random_element(gen, g(gen));
        CHECK(trace_tl(eps(1, include_strand(x))) == c * trace_tl(x));
    }
    CHECK(trace_tl(include_strand(TLElement::cup())) ==
          DeltaPoly::delta_power(2) + kDelta);  // not delta * trace(cup)
}
