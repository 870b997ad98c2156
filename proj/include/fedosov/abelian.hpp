#pragma once

#include "fedosov/star_function.hpp"

namespace fedosov {

/// The Abelian connection D = -delta + cov + (i/h)[r, .] generated by a
/// symplectic connection, with r the normalized solution of
///   r = delta^{-1} R + delta^{-1}(cov r + (i/h) r o r),
/// computed by grading-degree iteration up to the working cap.
class AbelianConnection {
  public:
    static AbelianConnection build(ChartPtr chart, long long cap = -1) {
        return build_with_gamma(chart, chart->gamma(), cap);
    }

    /// Build over an explicit coefficient table (used by connection
    /// homotopies, where the table carries the parameter t).
    static AbelianConnection build_with_gamma(ChartPtr chart, SymmetricGamma gamma,
                                              long long cap = -1) {
        AbelianConnection c(std::move(chart), std::move(gamma), cap);
        c.iterate_r();
        return c;
    }

    static AbelianConnection trivial(ChartPtr chart, long long cap = -1) {
        return build_with_gamma(chart, SymmetricGamma{}, cap);
    }

    const ChartPtr &chart() const { return chart_; }
    const SymmetricGamma &gamma() const { return gamma_; }
    long long cap() const { return cap_; }
    const WeylForm &r() const { return r_; }
    const WeylForm &gamma_total() const { return gamma_total_; }
    const WeylForm &gamma_form() const { return gamma_form_; }
    const WeylForm &curvature() const { return curvature_; }
    bool is_trivial() const { return gamma_.empty(); }

    /// Symplectic covariant derivative on W (x) Lambda. An out_cap bounds the
    /// computed grading degree for callers that truncate anyway.
    WeylForm cov(const WeylForm &a, long long out_cap = kUnbounded) const {
        return exterior_d(a) + commutator_i_over_h(gamma_form_, a, out_cap);
    }

    /// D a = -delta a + cov a + (i/h)[r, a].
    WeylForm apply_D(const WeylForm &a, long long out_cap = kUnbounded) const {
        WeylForm d = cov(a, out_cap) - delta(a);
        if (!r_.is_zero())
            d += commutator_i_over_h(r_, a, out_cap);
        return d;
    }

    /// Same connection through its total 1-form, d + (i/h)[gamma_total, .];
    /// kept as an independent route for consistency checks.
    WeylForm apply_D_via_gamma(const WeylForm &a) const {
        return exterior_d(a) + commutator_i_over_h(gamma_total_, a);
    }

  private:
    AbelianConnection(ChartPtr chart, SymmetricGamma gamma, long long cap)
        : chart_(std::move(chart)), gamma_(std::move(gamma)),
          gamma_form_(gamma_one_form(chart_, gamma_)),
          omega_form_(omega_one_form(chart_)),
          curvature_(curvature_form(chart_, gamma_)), r_(WeylForm::zero(chart_)),
          gamma_total_(WeylForm::zero(chart_)),
          cap_(cap < 0 ? chart_->n_work() : cap) {
        if (!gamma_.empty() && cap_ < 3)
            throw validation_error("building a nontrivial Abelian connection needs "
                                   "working degree >= 3");
    }

    void iterate_r() {
        WeylForm lead = delta_inv(curvature_);
        WeylForm r = WeylForm::zero(chart_);
        for (long long pass = 0; pass <= cap_ + 4; ++pass) {
            // (i/h) r o r = 1/2 (i/h)[r,r]; r is a 1-form, so the h-free part
            // of r o r cancels pairwise and the division is exact
            WeylForm quad =
                fiberwise_capped(r, r, cap_ + 1).scaled(Scalar::i()).divided_h(1);
            WeylForm next = (lead + delta_inv(cov(r, cap_ - 1) + quad)).truncated(cap_);
            if (next == r) {
                r_ = std::move(next);
                gamma_total_ = omega_form_ + gamma_form_ + r_;
                if (!delta_inv(r_).is_zero())
                    throw consistency_error("Abelian connection lost its normalization");
                if (!r_.is_zero() && r_.min_degree() < 3)
                    throw consistency_error("Abelian connection r has degree < 3");
                return;
            }
            r = std::move(next);
        }
        throw consistency_error("Abelian connection iteration failed to stabilize");
    }

    ChartPtr chart_;
    SymmetricGamma gamma_;
    WeylForm gamma_form_;
    WeylForm omega_form_;
    WeylForm curvature_;
    WeylForm r_;
    WeylForm gamma_total_;
    long long cap_;
};

/// Central embedding of a deformed function; with pretend_exact the missing
/// high h-orders are treated as zero, which is only legitimate inside
/// commutators (the unknown central tail cancels there up to one extra order).
inline WeylForm embed(const ChartPtr &chart, const StarFunction &f,
                      bool pretend_exact = false) {
    long long trunc = (pretend_exact || f.order() >= kUnbounded)
                          ? kUnbounded
                          : 2 * f.order() + 1;
    WeylForm w(chart, trunc);
    for (size_t k = 0; k < f.coeff_count(); ++k)
        w.add_term(WeylKey{(unsigned)k, {}, {}}, f.coeff(k));
    return w;
}

/// Q: solves b = a + delta^{-1}((D + delta) b) by degree iteration. The
/// iteration operator is linear and raises the grading degree, so the sums
/// telescope: only the shrinking increments are re-fed. For a central 0-form
/// input the solution is the flat section with that central part; for general
/// form input it is the section used by the D-equation solver.
inline WeylForm quantize(const AbelianConnection &conn, const WeylForm &a,
                         long long cap = -1) {
    if (cap < 0)
        cap = conn.cap();
    WeylForm b = a.truncated(cap);
    WeylForm inc = b;
    for (long long pass = 0; pass <= cap + 4; ++pass) {
        if (inc.is_zero())
            return b;
        WeylForm step = conn.cov(inc, cap - 1);
        if (!conn.r().is_zero())
            step += commutator_i_over_h(conn.r(), inc, cap - 1);
        inc = delta_inv(step).truncated(cap);
        b += inc;
    }
    throw consistency_error("flat-section iteration failed to stabilize");
}

inline WeylForm quantize(const AbelianConnection &conn, const StarFunction &f,
                         long long cap = -1) {
    return quantize(conn, embed(conn.chart(), f), cap);
}

/// Q^{-1} on flat sections: the central (y-free, dx-free) part.
inline StarFunction project_center(const WeylForm &a) {
    if (a.max_form_degree() > 0)
        throw domain_error("central projection expects a 0-form section");
    std::vector<Poly> coeffs;
    for (auto &[k, p] : a.terms())
        if (k.y.empty()) {
            if (coeffs.size() <= k.h)
                coeffs.resize(k.h + 1);
            coeffs[k.h] = p;
        }
    long long ord = a.trunc() >= kUnbounded ? kUnbounded : a.trunc() / 2;
    return StarFunction(std::move(coeffs), ord);
}

/// A flat lift bundled with the h-order its central data was exact to.
/// Componentwise operations lift each factor once and reuse it.
struct LiftedFunction {
    WeylForm lift;
    long long order;
};

/// Honest lift: unknown h-tail of f marks the matching grading degrees
/// unknown. Valid for products.
inline LiftedFunction lift_for_star(const AbelianConnection &conn,
                                    const StarFunction &f) {
    return {quantize(conn, embed(conn.chart(), f)), f.order()};
}

/// Commutator lift: the missing central tail is set to zero; legitimate only
/// inside commutators, where that tail cancels up to one extra order.
inline LiftedFunction lift_for_bracket(const AbelianConnection &conn,
                                       const StarFunction &f) {
    return {quantize(conn, embed(conn.chart(), f, true)), f.order()};
}

inline StarFunction star_product(const AbelianConnection &conn,
                                 const LiftedFunction &f, const LiftedFunction &g) {
    StarFunction s = project_center(fiberwise_product(f.lift, g.lift));
    return s.truncated(std::min(f.order, g.order));
}

/// f * g = Q^{-1}(Q f o Q g).
inline StarFunction star_product(const AbelianConnection &conn, const StarFunction &f,
                                 const StarFunction &g) {
    return star_product(conn, lift_for_star(conn, f), lift_for_star(conn, g));
}

/// (i/h)(f*g - g*f) on bracket lifts. The unknown central tails of the
/// factors cancel in the commutator, so the bracket is exact through
/// min(order)+1 before the division (capped by the engine budget cap/2).
inline StarFunction star_bracket_i_over_h(const AbelianConnection &conn,
                                          const LiftedFunction &f,
                                          const LiftedFunction &g) {
    WeylForm diff =
        fiberwise_product(f.lift, g.lift) - fiberwise_product(g.lift, f.lift);
    StarFunction c = project_center(diff);
    if (!c.coeff(0).is_zero())
        throw consistency_error("star commutator has an h-free part");
    std::vector<Poly> shifted;
    for (size_t k = 1; k < c.coeff_count(); ++k)
        shifted.push_back(c.coeff(k).scaled(Scalar::i()));
    long long pre =
        std::min(sat_add(std::min(f.order, g.order), 1), conn.cap() / 2);
    return StarFunction(std::move(shifted), pre >= kUnbounded ? kUnbounded : pre - 1);
}

inline StarFunction star_bracket_i_over_h(const AbelianConnection &conn,
                                          const StarFunction &f,
                                          const StarFunction &g) {
    return star_bracket_i_over_h(conn, lift_for_bracket(conn, f),
                                 lift_for_bracket(conn, g));
}

/// Solves D a = b for a given D-closed b of positive form degree, as
/// a = -Q delta^{-1} b. Raises when the input is obstructed (D b != 0) or is
/// not a form of positive degree.
inline WeylForm solve_D(const AbelianConnection &conn, const WeylForm &b) {
    for (auto &[k, p] : b.terms())
        if (k.form_degree() == 0)
            throw domain_error("D-equation solver expects form degree > 0");
    if (!conn.apply_D(b).is_zero())
        throw solvability_error("D b != 0: the equation D a = b has no solution");
    return -quantize(conn, delta_inv(b));
}

} // namespace fedosov
