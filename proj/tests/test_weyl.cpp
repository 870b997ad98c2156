#include "oracles.hpp"

#include "fedosov/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fedosov;

namespace {
ChartPtr chart_g111(int n_work = 6) {
    SymmetricGamma g;
    g.set(1, 1, 1, Poly::variable(2));
    return make_chart(2, g, n_work, 2);
}
ChartPtr chart_generic(int n_work = 6) {
    SymmetricGamma g;
    g.set(1, 1, 1, Poly::variable(2));
    g.set(1, 1, 2, Poly::variable(1));
    g.set(2, 2, 2, Poly::variable(1) * Poly::variable(2));
    return make_chart(2, g, n_work, 2);
}
} // namespace

TEST_CASE("delta on simple sections") {
    ChartPtr chart = flat_chart(2, 6, 2);
    WeylForm y1 = WeylForm::monomial(chart, 0, {1}, {}, Poly::one());
    WeylForm dx1 = WeylForm::monomial(chart, 0, {}, {1}, Poly::one());
    CHECK(delta(y1) == dx1);
    WeylForm f = WeylForm::central(chart, Poly::variable(1, 3));
    CHECK(delta(f).is_zero());
    CHECK(delta_inv(dx1) == y1);
    CHECK(delta_inv(f).is_zero());
}

TEST_CASE("delta and its homotopy inverse are nilpotent") {
    ChartPtr chart = chart_g111();
    verify::Rng rng(23);
    for (int q = 0; q < 25; ++q) {
        WeylForm a = rng.weyl(chart, 5);
        CHECK(delta(delta(a)).is_zero());
        CHECK(delta_inv(delta_inv(a)).is_zero());
        WeylForm rebuilt = a.central_part() + delta(delta_inv(a)) + delta_inv(delta(a));
        CHECK(rebuilt == a);
    }
}

TEST_CASE("both formulas for delta agree") {
    ChartPtr chart = chart_generic();
    WeylForm omega = omega_one_form(chart);
    verify::Rng rng(29);
    for (int q = 0; q < 25; ++q) {
        WeylForm a = rng.weyl(chart, 5);
        WeylForm via_commutator = -commutator_i_over_h(omega, a);
        CHECK((delta(a) - via_commutator).is_zero());
        // and the commutator itself is (I h) delta a
        WeylForm lhs = graded_commutator(omega, a);
        WeylForm rhs = delta(a).scaled(Scalar::i()).shifted_h(1);
        CHECK((lhs - rhs).is_zero());
    }
}

TEST_CASE("degree filter selects the graded parts") {
    ChartPtr chart = flat_chart(2, 6, 2);
    WeylForm a(chart);
    a.insert(1, {}, {}, Poly::one());     // h
    a.insert(0, {1, 1}, {}, Poly::one()); // y1 y2
    a.insert(0, {1}, {}, Poly::one());    // y1
    WeylForm p2 = a.degree_part(2);
    CHECK(p2.terms().size() == 2);
    CHECK(a.degree_part(1) ==
          WeylForm::monomial(chart, 0, {1}, {}, Poly::one()));
    WeylForm f = WeylForm::central(chart, Poly::variable(1));
    CHECK(f.degree_part(0) == f);
    WeylForm sum(chart);
    for (long long m = 0; m <= 2; ++m)
        sum += a.degree_part(m);
    CHECK(sum == a);
}

TEST_CASE("fiberwise product has the unit and the canonical commutator") {
    ChartPtr chart = flat_chart(2, 6, 2);
    WeylForm one = WeylForm::unit(chart);
    WeylForm y1 = WeylForm::monomial(chart, 0, {1}, {}, Poly::one());
    WeylForm y2 = WeylForm::monomial(chart, 0, {0, 1}, {}, Poly::one());
    CHECK(fiberwise_product(one, y1) == y1);
    CHECK(fiberwise_product(y1, one) == y1);
    // y1 o y2 - y2 o y1 = -I h omega^{12} = I h for the standard block form
    WeylForm comm = fiberwise_product(y1, y2) - fiberwise_product(y2, y1);
    WeylForm expected = one.shifted_h(1).scaled(Scalar::i());
    CHECK(comm == expected);
    CHECK(graded_commutator(y1, y2) == expected);
}

TEST_CASE("fiberwise product matches the explicit multi-index expansion") {
    ChartPtr chart = chart_generic();
    verify::Rng rng(31);
    for (int q = 0; q < 15; ++q) {
        WeylForm a = rng.weyl(chart, 4, -1, 3);
        WeylForm b = rng.weyl(chart, 4, -1, 3);
        CHECK((fiberwise_product(a, b) - oracles::reference_fiberwise(a, b))
                  .is_zero());
    }
}

TEST_CASE("fiberwise product is associative and degree additive") {
    ChartPtr chart = chart_g111();
    verify::Rng rng(37);
    for (int q = 0; q < 10; ++q) {
        WeylForm a = rng.weyl(chart, 4, -1, 3);
        WeylForm b = rng.weyl(chart, 4, -1, 3);
        WeylForm c = rng.weyl(chart, 4, -1, 3);
        CHECK((fiberwise_product(fiberwise_product(a, b), c) -
               fiberwise_product(a, fiberwise_product(b, c)))
                  .is_zero());
        WeylForm ab = fiberwise_product(a, b);
        for (long long m = 0; m <= 6; ++m) {
            WeylForm sum(chart);
            for (long long p = 0; p <= m; ++p)
                sum += fiberwise_product(a.degree_part(p), b.degree_part(m - p));
            CHECK(sum == ab.degree_part(m));
        }
    }
}

TEST_CASE("commutators vanish exactly on central elements") {
    ChartPtr chart = chart_generic();
    verify::Rng rng(41);
    for (int q = 0; q < 15; ++q) {
        WeylForm a = rng.weyl(chart, 5);
        WeylForm f = WeylForm::central(chart, rng.poly(2));
        CHECK(graded_commutator(a, f).is_zero());
        CHECK(graded_commutator(f, a).is_zero());
    }
    // a y-carrying element always has a commutator witness
    WeylForm a = WeylForm::monomial(chart, 0, {1}, {1}, Poly::one()); // y1 dx1
    WeylForm y2 = WeylForm::monomial(chart, 0, {0, 1}, {}, Poly::one());
    CHECK(!graded_commutator(a, y2).is_zero());
}

TEST_CASE("delta satisfies the graded Leibniz rule") {
    ChartPtr chart = chart_g111();
    verify::Rng rng(43);
    for (int q = 0; q < 15; ++q) {
        int k = (int)rng.pick(0, 2);
        WeylForm a = rng.weyl(chart, 4, -1, 3, k);
        WeylForm b = rng.weyl(chart, 4);
        WeylForm lhs = delta(fiberwise_product(a, b));
        WeylForm rhs =
            fiberwise_product(delta(a), b) +
            fiberwise_product(a, delta(b)).scaled(Scalar(k % 2 == 0 ? 1 : -1));
        CHECK((lhs - rhs).is_zero());
    }
}

TEST_CASE("covariant derivative reduces to d in the flat cases") {
    ChartPtr chart = flat_chart(2, 6, 2);
    WeylForm f = WeylForm::central(chart, Poly::variable(1, 2)); // x1^2
    WeylForm df = covariant_derivative(chart, chart->gamma(), f);
    WeylForm expected =
        WeylForm::monomial(chart, 0, {}, {1}, Poly::variable(1).scaled(Scalar(2)));
    CHECK(df == expected);
    verify::Rng rng(47);
    for (int q = 0; q < 10; ++q) {
        WeylForm a = rng.weyl(chart, 4);
        CHECK((covariant_derivative(chart, chart->gamma(), a) - exterior_d(a))
                  .is_zero());
    }
}

TEST_CASE("covariant derivative of a central function is its gradient") {
    ChartPtr chart = chart_generic();
    WeylForm f = WeylForm::central(chart, Poly::variable(1) * Poly::variable(2));
    WeylForm df = covariant_derivative(chart, chart->gamma(), f);
    CHECK(df == exterior_d(f));
}

TEST_CASE("covariant derivative squares to the curvature commutator") {
    for (ChartPtr chart : {chart_g111(), chart_generic()}) {
        WeylForm G = gamma_one_form(chart, chart->gamma());
        WeylForm R = curvature_form(chart);
        verify::Rng rng(53);
        for (int q = 0; q < 20; ++q) {
            WeylForm a = rng.weyl(chart, 4);
            WeylForm lhs = covariant_derivative(G, covariant_derivative(G, a));
            WeylForm rhs = commutator_i_over_h(R, a);
            CHECK((lhs - rhs).is_zero());
        }
    }
}

TEST_CASE("commutator route matches the tensorial covariant derivative") {
    ChartPtr chart = chart_generic();
    verify::Rng rng(59);
    for (int q = 0; q < 15; ++q) {
        WeylForm a = rng.weyl(chart, 4, 0); // pure W-section
        WeylForm lhs = covariant_derivative(chart, chart->gamma(), a);
        WeylForm rhs = verify::tensorial_covariant(chart, chart->gamma(), a);
        CHECK((lhs - rhs).is_zero());
    }
}

TEST_CASE("curvature vanishes for a flat connection") {
    ChartPtr chart = flat_chart(4, 6, 2);
    CHECK(curvature_form(chart).is_zero());
}

TEST_CASE("constant coefficients leave only the quadratic curvature terms") {
    SymmetricGamma g;
    g.set(1, 1, 1, Poly::one());
    g.set(1, 2, 2, Poly::constant(Scalar(2)));
    ChartPtr chart = make_chart(2, g, 6, 2);
    WeylForm R = curvature_form(chart);
    // derivative terms vanish; compare against the literal quadratic sums
    WeylForm expected(chart);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j)
            for (int k = 1; k <= 2; ++k)
                for (int l = 1; l <= 2; ++l) {
                    Poly c = oracles::curvature_t(*chart, i, j, k, l, Poly::one());
                    if (c.is_zero())
                        continue;
                    std::vector<unsigned> y((size_t)std::max(i, j), 0u);
                    y[(size_t)i - 1] += 1;
                    y[(size_t)j - 1] += 1;
                    expected.insert(0, std::move(y), {k, l},
                                    c.scaled(Scalar(Rational(1, 4))));
                }
    CHECK(R == expected);
    REQUIRE(!R.is_zero());
    // and the operational pin still holds
    WeylForm G = gamma_one_form(chart, chart->gamma());
    verify::Rng rng(61);
    WeylForm a = rng.weyl(chart, 4);
    CHECK((covariant_derivative(G, covariant_derivative(G, a)) -
           commutator_i_over_h(R, a))
              .is_zero());
}

TEST_CASE("chart mismatch is rejected") {
    ChartPtr c1 = chart_g111();
    ChartPtr c2 = chart_generic();
    WeylForm a = WeylForm::unit(c1);
    WeylForm b = WeylForm::unit(c2);
    CHECK_THROWS_AS(fiberwise_product(a, b), chart_mismatch_error);
    // equal content on a distinct pointer is accepted
    ChartPtr c3 = chart_g111();
    CHECK(fiberwise_product(a, WeylForm::unit(c3)) == a);
}

TEST_CASE("grading truncation bounds stored terms") {
    ChartPtr chart = chart_g111();
    verify::Rng rng(67);
    WeylForm a = rng.weyl(chart, 6);
    WeylForm t = a.truncated(3);
    for (auto &[k, p] : t.terms())
        CHECK(k.degree() <= 3);
    CHECK(t.trunc() == 3);
}
