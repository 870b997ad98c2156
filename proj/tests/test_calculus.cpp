#include "oracles.hpp"

#include "fedosov/verify.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace fedosov;

namespace {
ChartPtr chart_two_term(int n_work = 6, int k = 2) {
    SymmetricGamma g;
    g.set(1, 1, 1, Poly::variable(2));
    g.set(2, 2, 2, Poly::variable(1));
    return make_chart(2, g, n_work, k);
}

Frame build_frame(ChartPtr chart) {
    AbelianConnection conn = AbelianConnection::build(chart);
    TrivializationMap triv = TrivializationMap::build(Homotopy::build(conn));
    return Frame::build(conn, triv);
}
} // namespace

TEST_CASE("flat frame is the undeformed one") {
    Frame frame = build_frame(flat_chart(2, 6, 2));
    // lambda_i = omega_ij x^j: lambda_1 = x2, lambda_2 = -x1
    CHECK(frame.lambda(1) == StarFunction(Poly::variable(2)));
    CHECK(frame.lambda(2) == StarFunction(-Poly::variable(1)));
    verify::Rng rng(127);
    for (int q = 0; q < 10; ++q) {
        StarFunction f = rng.star_function(2);
        for (int i = 1; i <= 2; ++i) {
            StarFunction xi = frame.derive(i, f);
            CHECK(xi == f.diff_x(i).truncated(xi.order()));
        }
    }
}

TEST_CASE("frame functions close the constant commutation relations") {
    ChartPtr chart = chart_two_term();
    Frame frame = build_frame(chart);
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            if (i == j)
                continue;
            StarFunction br = frame.bracket(frame.lambda_extended(i),
                                            frame.lambda_extended(j));
            StarFunction expected(
                Poly::constant(Scalar(-(long)chart->omega_lower(i, j))));
            CHECK(br == expected.truncated(br.order()));
        }
}

TEST_CASE("frame functions deform the coordinates at second order") {
    ChartPtr chart = chart_two_term();
    Frame frame = build_frame(chart);
    for (int i = 1; i <= 2; ++i) {
        const StarFunction &li = frame.lambda(i);
        Poly expected0;
        for (int j = 1; j <= 2; ++j)
            if (chart->omega_lower(i, j) != 0)
                expected0 +=
                    Poly::variable(j).scaled(Scalar((long)chart->omega_lower(i, j)));
        CHECK(li.coeff(0) == expected0);
        CHECK(li.coeff(1).is_zero());
        Poly h2;
        oracles::for_tuples(2, 3, [&](std::vector<int> &idx) {
            h2 += chart->gamma().get(idx[0], idx[1], idx[2]).diff_x(i) *
                  oracles::gamma_raised3(*chart, idx[0], idx[1], idx[2]);
        });
        CHECK(li.coeff(2) == h2.scaled(Scalar(Rational(-1, 48))));
        // the correction is nontrivial on this chart
        CHECK(!li.coeff(2).is_zero());
    }
}

TEST_CASE("frame derivations commute and satisfy the Leibniz rule") {
    Frame frame = build_frame(chart_two_term());
    verify::Rng rng(131);
    for (int q = 0; q < 6; ++q) {
        StarFunction f(rng.poly(2));
        StarFunction g(rng.poly(2));
        CHECK(frame.derive(1, frame.derive(2, f)) ==
              frame.derive(2, frame.derive(1, f)));
        StarFunction fg = frame.star(f, g);
        for (int i = 1; i <= 2; ++i) {
            StarFunction lhs = frame.derive(i, fg);
            StarFunction rhs = frame.star(frame.derive(i, f), g) +
                               frame.star(f, frame.derive(i, g));
            long long m = std::min(lhs.order(), rhs.order());
            CHECK(lhs.truncated(m) == rhs.truncated(m));
        }
        CHECK(frame.derive(1, StarFunction::one()).is_zero());
    }
}

TEST_CASE("commutator route agrees with the trivialization route") {
    Frame frame = build_frame(chart_two_term());
    verify::Rng rng(137);
    for (int q = 0; q < 4; ++q) {
        StarFunction f(rng.poly(2));
        for (int i = 1; i <= 2; ++i) {
            StarFunction a = frame.derive(i, f);
            StarFunction b = frame.derive_via_trivialization(i, f);
            long long m = std::min(a.order(), b.order());
            CHECK(a.truncated(m) == b.truncated(m));
        }
    }
}

TEST_CASE("coframe components are Kronecker deltas") {
    ChartPtr chart = chart_two_term();
    Frame frame = build_frame(chart);
    for (int j = 1; j <= 2; ++j) {
        StarFunction comb;
        for (int k = 1; k <= 2; ++k)
            if (chart->omega_upper(j, k) != 0)
                comb += frame.lambda_extended(k).scaled(
                    Scalar((long)chart->omega_upper(j, k)));
        for (int i = 1; i <= 2; ++i) {
            StarFunction v = frame.derive(i, comb);
            StarFunction expected =
                i == j ? StarFunction::one() : StarFunction::zero();
            CHECK(v == expected.truncated(v.order()));
        }
    }
    StarForm t1 = theta(frame, 1);
    CHECK(t1.eval({1}) == StarFunction::one());
    CHECK(t1.eval({2}).is_zero());
}

TEST_CASE("tensor product evaluates componentwise") {
    Frame frame = build_frame(chart_two_term());
    StarTensor t1 = form_to_tensor(theta(frame, 1));
    StarTensor t2 = form_to_tensor(theta(frame, 2));
    StarTensor prod = tensor_star(frame, t1, t2);
    CHECK(prod.get({1, 2}) == StarFunction::one());
    CHECK(prod.get({2, 1}).is_zero());
    verify::Rng rng(139);
    StarFunction f = rng.star_function(2);
    StarTensor S(1, 2), T(1, 2), U(1, 2);
    for (int i = 1; i <= 2; ++i) {
        S.set({i}, rng.star_function(2));
        T.set({i}, rng.star_function(2));
        U.set({i}, rng.star_function(2));
    }
    CHECK(tensor_star(frame, module_mul(frame, Side::left, f, S), T) ==
          module_mul(frame, Side::left, f, tensor_star(frame, S, T)));
    CHECK(tensor_star(frame, tensor_star(frame, S, T), U) ==
          tensor_star(frame, S, tensor_star(frame, T, U)));
    CHECK(tensor_star(frame, module_mul(frame, Side::right, f, S), T) ==
          tensor_star(frame, S, module_mul(frame, Side::left, f, T)));
}

TEST_CASE("alternation projects onto forms") {
    ChartPtr chart = chart_two_term();
    Frame frame = build_frame(chart);
    verify::Rng rng(149);
    StarFunction f = rng.star_function(2);
    StarTensor sym(2, 2);
    sym.set({1, 2}, f);
    sym.set({2, 1}, f);
    CHECK(alt(sym).is_zero());
    StarForm eta(2, 2);
    eta.set({1, 2}, rng.star_function(2));
    CHECK(alt(form_to_tensor(eta)) == eta);
    StarTensor T(2, 2);
    std::vector<int> idx;
    detail::for_each_tuple(2, 2, idx, [&](const std::vector<int> &I) {
        T.set(I, rng.star_function(2));
    });
    StarForm once = alt(T);
    CHECK(alt(form_to_tensor(once)) == once);
    StarFunction g = rng.star_function(2);
    CHECK(alt(module_mul(frame, Side::left, f, T) +
              module_mul(frame, Side::right, g, T)) ==
          module_mul(frame, Side::left, f, alt(T)) +
              module_mul(frame, Side::right, g, alt(T)));
}

TEST_CASE("wedge product anticommutes on the coframe") {
    Frame frame = build_frame(chart_two_term());
    StarForm t1 = theta(frame, 1), t2 = theta(frame, 2);
    StarForm w12 = wedge_star(frame, t1, t2);
    CHECK(w12.eval({1, 2}) == StarFunction::one());
    CHECK(wedge_star(frame, t2, t1) == -w12);
    CHECK(wedge_star(frame, t1, t1).is_zero());
    verify::Rng rng(151);
    StarFunction f = rng.star_function(2);
    CHECK(module_mul(frame, Side::left, f, t1) ==
          module_mul(frame, Side::right, f, t1));
}

TEST_CASE("wedge matches the alternation route and is bimodule compatible") {
    Frame frame = build_frame(chart_two_term());
    verify::Rng rng(157);
    auto one_form = [&] {
        StarForm eta(1, 2);
        for (int i = 1; i <= 2; ++i)
            eta.set({i}, StarFunction(rng.poly(2)));
        return eta;
    };
    for (int q = 0; q < 4; ++q) {
        StarForm eta = one_form(), xi = one_form();
        StarForm direct = wedge_star(frame, eta, xi);
        StarForm via =
            alt(tensor_star(frame, form_to_tensor(eta), form_to_tensor(xi)));
        CHECK(direct == via + via);
        StarFunction f = rng.star_function(2);
        CHECK(wedge_star(frame, module_mul(frame, Side::left, f, eta), xi) ==
              module_mul(frame, Side::left, f, wedge_star(frame, eta, xi)));
        CHECK(wedge_star(frame, eta, module_mul(frame, Side::right, f, xi)) ==
              module_mul(frame, Side::right, f, wedge_star(frame, eta, xi)));
        CHECK(wedge_star(frame, module_mul(frame, Side::right, f, eta), xi) ==
              wedge_star(frame, eta, module_mul(frame, Side::left, f, xi)));
    }
}

TEST_CASE("exterior derivative is nilpotent and Leibniz") {
    Frame frame = build_frame(chart_two_term());
    verify::Rng rng(163);
    for (int q = 0; q < 4; ++q) {
        StarFunction f(rng.poly(2));
        StarFunction g(rng.poly(2));
        StarForm df = d_star(frame, f);
        for (int i = 1; i <= 2; ++i)
            CHECK(df.eval({i}) == frame.derive(i, f));
        CHECK(d_star(frame, df).is_zero());
        StarForm eta(1, 2);
        for (int i = 1; i <= 2; ++i)
            eta.set({i}, StarFunction(rng.poly(2)));
        CHECK(d_star(frame, d_star(frame, eta)).is_zero());
        // 2-forms map beyond the top degree
        StarForm top(2, 2);
        top.set({1, 2}, StarFunction(rng.poly(2)));
        CHECK(d_star(frame, top).is_zero());
        StarForm lhs = d_star(frame, frame.star(f, g));
        StarForm rhs = module_mul(frame, Side::right, g, d_star(frame, f)) +
                       module_mul(frame, Side::left, f, d_star(frame, g));
        CHECK(lhs == rhs);
        StarForm l2 = d_star(frame, wedge_star(frame, f, eta));
        StarForm r2 = wedge_star(frame, d_star(frame, f), eta) +
                      module_mul(frame, Side::left, f, d_star(frame, eta));
        CHECK(l2 == r2);
        StarForm l3 = d_star(frame, wedge_star(frame, eta, g));
        StarForm r3 = wedge_star(frame, d_star(frame, eta), g) -
                      wedge_star(frame, eta, d_star(frame, g));
        CHECK(l3 == r3);
    }
}

TEST_CASE("exterior derivative is representative independent") {
    // rank 2 below the top degree needs dimension 4
    ChartPtr chart = flat_chart(4, 6, 2);
    Frame frame = build_frame(chart);
    verify::Rng rng(167);
    StarTensor T(2, 4), S(2, 4);
    std::vector<int> idx;
    detail::for_each_tuple(4, 2, idx, [&](const std::vector<int> &I) {
        T.set(I, StarFunction(rng.poly(4, 1, 2)));
    });
    for (int i = 1; i <= 4; ++i)
        for (int j = i; j <= 4; ++j) {
            StarFunction f(rng.poly(4, 1, 1));
            S.set({i, j}, S.get({i, j}) + f);
            S.set({j, i}, S.get({j, i}) + f);
        }
    auto d_raw = [&](const StarTensor &X) {
        StarTensor full(X.rank() + 1, X.n());
        std::vector<int> jdx;
        detail::for_each_tuple(X.n(), X.rank() + 1, jdx,
                               [&](const std::vector<int> &I) {
                                   std::vector<int> rest(I.begin() + 1, I.end());
                                   StarFunction v = frame.derive(I[0], X.get(rest));
                                   if (!v.is_zero())
                                       full.set(I, std::move(v));
                               });
        StarForm a = alt(full);
        StarForm out(a.rank(), a.n());
        for (auto &[key, v] : a.components())
            out.set(key, v.scaled(Scalar((long)X.rank() + 1)));
        return out;
    };
    StarTensor T2 = T + S;
    CHECK(alt(T) == alt(T2));
    CHECK(d_raw(T) == d_raw(T2));
    CHECK(d_raw(T) == d_star(frame, alt(T)));
}

TEST_CASE("evaluation applies antisymmetry and module rules") {
    Frame frame = build_frame(chart_two_term());
    verify::Rng rng(173);
    StarForm eta(2, 2);
    StarFunction v = rng.star_function(2);
    eta.set({1, 2}, v);
    CHECK(eta.eval({2, 1}) == -v);
    CHECK(eta.eval({1, 1}).is_zero());
    CHECK_THROWS_AS(eta.eval({1, 3}), index_error);
    StarFunction f = rng.star_function(2);
    StarForm feta = module_mul(frame, Side::left, f, eta);
    CHECK(feta.eval({1, 2}) == frame.star(f, v));
    StarTensor T(1, 2);
    T.set({1}, v);
    CHECK(module_mul(frame, Side::left, StarFunction::one(), T) == T);
    StarFunction g = rng.star_function(2);
    StarForm a = module_mul(frame, Side::right, g,
                            module_mul(frame, Side::left, f, eta));
    StarForm b = module_mul(frame, Side::left, f,
                            module_mul(frame, Side::right, g, eta));
    CHECK(a == b);
}

TEST_CASE("frame construction enforces the working budget") {
    ChartPtr chart = chart_two_term(4, 2); // needs 2K+2 = 6
    AbelianConnection conn = AbelianConnection::build(chart);
    TrivializationMap triv = TrivializationMap::build(Homotopy::build(conn));
    CHECK_THROWS_AS(Frame::build(conn, triv), validation_error);
}

TEST_CASE("basis expansion recovers coefficients") {
    Frame frame = build_frame(chart_two_term());
    verify::Rng rng(179);
    std::map<std::vector<int>, StarFunction> coeffs;
    std::vector<int> idx;
    detail::for_each_tuple(2, 2, idx, [&](const std::vector<int> &I) {
        coeffs[I] = StarFunction(rng.poly(2));
    });
    StarTensor combo(2, 2);
    for (auto &[I, rI] : coeffs) {
        StarTensor th = tensor_star(frame, form_to_tensor(theta(frame, I[0])),
                                    form_to_tensor(theta(frame, I[1])));
        combo += module_mul(frame, Side::left, rI, th);
    }
    for (auto &[I, rI] : coeffs) {
        StarFunction got = combo.get(I);
        CHECK(got == rI.truncated(got.order()));
    }
}
