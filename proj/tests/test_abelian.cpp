#include "oracles.hpp"
#include <thread>

#include "fedosov/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fedosov;

namespace {
ChartPtr chart_g111(int n_work = 6, int k = 2) {
    SymmetricGamma g;
    g.set(1, 1, 1, Poly::variable(2));
    return make_chart(2, g, n_work, k);
}
} // namespace

TEST_CASE("flat connection has r = 0 and D = d - delta") {
    ChartPtr chart = flat_chart(2, 6, 2);
    AbelianConnection conn = AbelianConnection::build(chart);
    CHECK(conn.r().is_zero());
    verify::Rng rng(71);
    for (int q = 0; q < 10; ++q) {
        WeylForm a = rng.weyl(chart, 4);
        CHECK((conn.apply_D(a) - (exterior_d(a) - delta(a))).is_zero());
    }
}

TEST_CASE("r is normalized and starts with the curvature contraction") {
    ChartPtr chart = chart_g111();
    AbelianConnection conn = AbelianConnection::build(chart);
    CHECK(delta_inv(conn.r()).is_zero());
    CHECK(conn.r().min_degree() >= 3);
    CHECK(conn.r().degree_part(3) == delta_inv(conn.curvature()));
}

TEST_CASE("r matches two manual iterations of its fixed-point map") {
    ChartPtr chart = chart_g111(6);
    AbelianConnection conn = AbelianConnection::build(chart);
    WeylForm lead = delta_inv(conn.curvature());
    auto sweep = [&](const WeylForm &r) {
        WeylForm quad = commutator_i_over_h(r, r).scaled(Scalar(Rational(1, 2)));
        return lead + delta_inv(conn.cov(r) + quad);
    };
    WeylForm r2 = sweep(sweep(lead));
    // degree m is frozen after enough sweeps; two sweeps fix everything <= 5
    for (long long m = 0; m <= 5; ++m)
        CHECK(conn.r().degree_part(m) == r2.truncated(conn.cap()).degree_part(m));
}

TEST_CASE("the Abelian connection is flat on lifts and squares to zero") {
    ChartPtr chart = chart_g111();
    AbelianConnection conn = AbelianConnection::build(chart);
    verify::Rng rng(73);
    for (int q = 0; q < 20; ++q) {
        StarFunction f = rng.star_function(2);
        CHECK(conn.apply_D(quantize(conn, f)).is_zero());
        WeylForm a = rng.weyl(chart, 4);
        CHECK(conn.apply_D(conn.apply_D(a)).is_zero());
    }
}

TEST_CASE("total curvature form is the standard central 2-form") {
    ChartPtr chart = chart_g111();
    AbelianConnection conn = AbelianConnection::build(chart);
    const WeylForm &g = conn.gamma_total();
    WeylForm curv =
        exterior_d(g) + commutator_i_over_h(g, g).scaled(Scalar(Rational(1, 2)));
    WeylForm expected(chart);
    expected.insert(0, {}, {1, 2}, Poly::constant(Scalar(-1)));
    CHECK((curv - expected).is_zero());
}

TEST_CASE("flat-chart lifts are Taylor expansions") {
    ChartPtr chart = flat_chart(2, 6, 2);
    AbelianConnection conn = AbelianConnection::build(chart);
    // Q(x^i) = x^i + y^i
    for (int i = 1; i <= 2; ++i) {
        WeylForm lift = quantize(conn, StarFunction::variable(i));
        WeylForm expected = WeylForm::central(chart, Poly::variable(i));
        std::vector<unsigned> y((size_t)i, 0u);
        y[(size_t)i - 1] = 1;
        expected += WeylForm::monomial(chart, 0, y, {}, Poly::one());
        CHECK(lift == expected.truncated(lift.trunc()));
    }
    // Q((x1)^2) = x1^2 + 2 x1 y1 + y1^2
    WeylForm lift = quantize(conn, StarFunction(Poly::variable(1, 2)));
    WeylForm expected = WeylForm::central(chart, Poly::variable(1, 2));
    expected += WeylForm::monomial(chart, 0, {1}, {},
                                   Poly::variable(1).scaled(Scalar(2)));
    expected += WeylForm::monomial(chart, 0, {2}, {}, Poly::one());
    CHECK(lift == expected.truncated(lift.trunc()));
    verify::Rng rng(79);
    for (int q = 0; q < 10; ++q) {
        StarFunction f = rng.star_function(2);
        WeylForm a = quantize(conn, f);
        CHECK((a - oracles::taylor_lift(chart, f, a.trunc())).is_zero());
    }
}

TEST_CASE("Q(1) is the unit and the center projection inverts Q") {
    ChartPtr chart = chart_g111();
    AbelianConnection conn = AbelianConnection::build(chart);
    CHECK(quantize(conn, StarFunction::one()) == WeylForm::unit(chart));
    verify::Rng rng(83);
    for (int q = 0; q < 20; ++q) {
        StarFunction f = rng.star_function(2);
        StarFunction back = project_center(quantize(conn, f));
        CHECK(back == f.truncated(back.order()));
        WeylForm a = quantize(conn, f);
        CHECK((quantize(conn, project_center(a)) - a).is_zero());
    }
}

TEST_CASE("center projection drops fiber terms and rejects form input") {
    ChartPtr chart = flat_chart(2, 6, 2);
    WeylForm a(chart);
    a.insert(0, {}, {}, Poly::variable(1));
    a.insert(0, {1}, {}, Poly::one());
    StarFunction f = project_center(a); // x1 + y1 -> x1
    CHECK(f == StarFunction(Poly::variable(1)));
    WeylForm b(chart);
    b.insert(1, {1, 1}, {}, Poly::one()); // h y1 y2
    b.insert(2, {}, {}, Poly::one());     // h^2
    StarFunction g = project_center(b);
    CHECK(g == StarFunction(std::vector<Poly>{Poly{}, Poly{}, Poly::one()},
                            kUnbounded));
    WeylForm c = WeylForm::monomial(chart, 0, {}, {1}, Poly::one());
    CHECK_THROWS_AS(project_center(c), domain_error);
}

TEST_CASE("star product is unital with the expected first correction") {
    ChartPtr chart = flat_chart(2, 6, 2);
    AbelianConnection conn = AbelianConnection::build(chart);
    StarFunction x1 = StarFunction::variable(1), x2 = StarFunction::variable(2);
    StarFunction prod = star_product(conn, x1, x2);
    // x1 * x2 = x1 x2 - (I h / 2) omega^{12} = x1 x2 + (I/2) h
    StarFunction expected(
        std::vector<Poly>{Poly::variable(1) * Poly::variable(2),
                          Poly::constant(Scalar(Rational(0), Rational(1, 2)))},
        prod.order());
    CHECK(prod == expected);
    StarFunction f = StarFunction(Poly::variable(1, 2));
    CHECK(star_product(conn, f, StarFunction::one()) ==
          f.truncated(chart->n_work() / 2));
}

TEST_CASE("flat-chart star product equals the base-variable Moyal product") {
    ChartPtr chart = flat_chart(2, 8, 3);
    AbelianConnection conn = AbelianConnection::build(chart);
    verify::Rng rng(89);
    for (int q = 0; q < 15; ++q) {
        StarFunction f = rng.star_function(2, 2, 3);
        StarFunction g = rng.star_function(2, 2, 3);
        StarFunction lhs = star_product(conn, f, g);
        StarFunction rhs = verify::moyal_product(*chart, f, g, lhs.order());
        CHECK(lhs == rhs.truncated(lhs.order()));
    }
}

TEST_CASE("star bracket starts at the Poisson bracket") {
    ChartPtr chart = chart_g111();
    AbelianConnection conn = AbelianConnection::build(chart);
    verify::Rng rng(97);
    for (int q = 0; q < 20; ++q) {
        StarFunction f = rng.star_function(2);
        StarFunction g = rng.star_function(2);
        StarFunction br = star_bracket_i_over_h(conn, f, g);
        Poly expected;
        for (int i = 1; i <= 2; ++i) {
            int j = symplectic_partner(i);
            expected += (f.coeff(0).diff_x(i) * g.coeff(0).diff_x(j))
                            .scaled(Scalar((long)chart->omega_upper(i, j)));
        }
        CHECK(br.coeff(0) == expected);
        CHECK(star_product(conn, f, g).coeff(0) == f.coeff(0) * g.coeff(0));
    }
}

TEST_CASE("star product is associative through the computed orders") {
    ChartPtr chart = chart_g111();
    AbelianConnection conn = AbelianConnection::build(chart);
    verify::Rng rng(101);
    for (int q = 0; q < 10; ++q) {
        StarFunction f(rng.poly(2));
        StarFunction g(rng.poly(2));
        StarFunction w(rng.poly(2));
        CHECK(star_product(conn, star_product(conn, f, g), w) ==
              star_product(conn, f, star_product(conn, g, w)));
    }
}

TEST_CASE("refining the truncation preserves computed coefficients") {
    ChartPtr chart = chart_g111(6);
    ChartPtr wider_chart = chart_g111(8);
    AbelianConnection conn = AbelianConnection::build(chart);
    AbelianConnection wider = AbelianConnection::build(wider_chart);
    CHECK(wider.r().truncated(conn.cap()) == conn.r());
    verify::Rng rng(103);
    StarFunction f(rng.poly(2)), g(rng.poly(2));
    StarFunction narrow = star_product(conn, f, g);
    StarFunction wide = star_product(wider, f, g);
    CHECK(wide.truncated(narrow.order()) == narrow);
}

TEST_CASE("the D-equation solver inverts D on closed forms") {
    ChartPtr chart = chart_g111();
    AbelianConnection conn = AbelianConnection::build(chart);
    WeylForm zero1(chart);
    zero1.insert(0, {}, {1}, Poly{}); // stays empty
    CHECK(solve_D(conn, WeylForm(chart)).is_zero());
    verify::Rng rng(107);
    for (int q = 0; q < 10; ++q) {
        WeylForm c = rng.weyl(chart, 3, 0);
        WeylForm b = conn.apply_D(c);
        if (b.is_zero())
            continue;
        WeylForm a = solve_D(conn, b);
        CHECK((conn.apply_D(a) - b).is_zero());
    }
    WeylForm obstructed = WeylForm::monomial(chart, 0, {}, {1}, Poly::variable(2));
    CHECK_THROWS_AS(solve_D(conn, obstructed), solvability_error);
    WeylForm zero_form = WeylForm::central(chart, Poly::variable(1));
    CHECK_THROWS_AS(solve_D(conn, zero_form), domain_error);
}

TEST_CASE("parallel use of shared immutable values is deterministic") {
    ChartPtr chart = chart_g111();
    AbelianConnection conn = AbelianConnection::build(chart);
    StarFunction f(Poly::variable(1, 2)), g(Poly::variable(2));
    StarFunction reference = star_product(conn, f, g);
    std::vector<StarFunction> results(4);
    std::vector<std::thread> workers;
    for (auto &slot : results)
        workers.emplace_back(
            [&conn, &f, &g, &slot] { slot = star_product(conn, f, g); });
    for (auto &w : workers)
        w.join();
    for (auto &r : results)
        CHECK(r == reference);
}

TEST_CASE("building a nontrivial connection needs grading room") {
    SymmetricGamma g;
    g.set(1, 1, 1, Poly::one());
    CHECK_THROWS_AS(AbelianConnection::build(make_chart(2, g, 2, 0)),
                    validation_error);
}
