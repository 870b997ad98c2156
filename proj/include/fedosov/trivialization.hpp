#pragma once

#include "fedosov/abelian.hpp"

namespace fedosov {

/// Linear-in-t family of Abelian connections joining the trivial connection
/// (t = 0) to a given one (t = 1): Gamma(t) = f(t) Gamma with f(0) = 0,
/// f(1) = 1, together with its t-dependent normalized r(t). Built with one
/// degree of slack over the endpoint so the transport maps keep the full
/// working accuracy.
class Homotopy {
  public:
    static Homotopy build(const AbelianConnection &endpoint,
                          Poly profile = Poly::var_t(), long long cap = -1) {
        if (!profile.subst_t_value(Scalar(0)).is_zero())
            throw validation_error("homotopy profile must vanish at t = 0");
        if (profile.subst_t_value(Scalar(1)) != Poly::one())
            throw validation_error("homotopy profile must be 1 at t = 1");
        if (cap < 0)
            cap = endpoint.cap() + 1;
        AbelianConnection conn_t = AbelianConnection::build_with_gamma(
            endpoint.chart(), endpoint.gamma().scaled(profile), cap);
        return Homotopy(endpoint, std::move(conn_t), std::move(profile));
    }

    const AbelianConnection &endpoint() const { return endpoint_; }
    const AbelianConnection &conn_t() const { return conn_t_; }
    const Poly &profile() const { return profile_; }

    WeylForm gamma_dot() const { return ddt(conn_t_.gamma_total()); }

  private:
    Homotopy(AbelianConnection endpoint, AbelianConnection conn_t, Poly profile)
        : endpoint_(std::move(endpoint)), conn_t_(std::move(conn_t)),
          profile_(std::move(profile)) {}

    AbelianConnection endpoint_;
    AbelianConnection conn_t_;
    Poly profile_;
};

/// Trivialization data: the Hamiltonian H(t) = -Q_t delta^{-1} gamma_dot(t)
/// generating the isochronous flow da/dt + (i/h)[H, a] = 0, and the two
/// transport maps obtained by integrating it forwards (T^{-1}: trivial
/// algebra -> W_D) and backwards (T: W_D -> trivial algebra).
class TrivializationMap {
  public:
    static TrivializationMap build(Homotopy homotopy) {
        const AbelianConnection &ct = homotopy.conn_t();
        WeylForm gdot = homotopy.gamma_dot();
        WeylForm H = -quantize(ct, delta_inv(gdot), ct.cap());
        // Flow hypotheses: D_t H - gamma_dot is a y-free 1-form and H starts
        // at grading degree 3.
        WeylForm residual = ct.apply_D(H) - gdot;
        for (auto &[k, p] : residual.terms())
            if (k.y_total() > 0)
                throw consistency_error("Hamiltonian does not reproduce gamma_dot "
                                        "up to a scalar form");
        if (!H.is_zero() && H.min_degree() < 3)
            throw consistency_error("Hamiltonian has grading degree < 3");
        AbelianConnection trivial =
            AbelianConnection::trivial(ct.chart(), homotopy.endpoint().cap());
        return TrivializationMap(std::move(homotopy), std::move(H), std::move(trivial));
    }

    const Homotopy &homotopy() const { return homotopy_; }
    const WeylForm &hamiltonian() const { return H_; }
    const AbelianConnection &trivial_connection() const { return trivial_; }

    /// T^{-1}: transports a D_0-flat section along the homotopy to a D-flat
    /// one, a(1) with a(t) = a0 - (i/h) int_0^t [H(tau), a(tau)] dtau.
    WeylForm apply_T_inv(const WeylForm &a0) const {
        if (!a0.is_t_free())
            throw domain_error("transport input must not depend on t");
        if (!trivial_.apply_D(a0).is_zero())
            throw domain_error("transport input is not flat for the trivial "
                               "connection");
        return flow(H_, a0, /*forward=*/true);
    }

    /// T: the inverse transport, integrating the flow backwards from t = 1.
    WeylForm apply_T(const WeylForm &a1) const {
        if (!a1.is_t_free())
            throw domain_error("transport input must not depend on t");
        if (!homotopy_.endpoint().apply_D(a1).is_zero())
            throw domain_error("transport input is not flat for the Abelian "
                               "connection");
        WeylForm H_rev = subst_t_affine(H_, Scalar(1), Scalar(-1));
        return flow(H_rev, a1, /*forward=*/false);
    }

  private:
    TrivializationMap(Homotopy homotopy, WeylForm H, AbelianConnection trivial)
        : homotopy_(std::move(homotopy)), H_(std::move(H)),
          trivial_(std::move(trivial)) {}

    /// Degree iteration of a(t) = a_init -+ int_0^t (i/h)[H(tau), a(tau)] dtau
    /// with exact t-polynomial integration; returns a(1).
    WeylForm flow(const WeylForm &H, const WeylForm &a_init, bool forward) const {
        long long cap = homotopy_.endpoint().cap();
        WeylForm a = a_init.truncated(cap);
        WeylForm inc = a;
        // the integral operator is linear and raises the grading degree, so
        // re-feeding only the increments telescopes to the full solution
        for (long long pass = 0; pass <= cap + 4; ++pass) {
            if (inc.is_zero())
                return subst_t(a, Scalar(1));
            WeylForm integral = antiderivative_t(commutator_i_over_h(H, inc, cap));
            inc = (forward ? -integral : integral).truncated(cap);
            a += inc;
        }
        throw consistency_error("transport flow failed to stabilize");
    }

    Homotopy homotopy_;
    WeylForm H_;
    AbelianConnection trivial_;
};

} // namespace fedosov
