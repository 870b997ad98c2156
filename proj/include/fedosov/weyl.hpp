#pragma once

#include "fedosov/chart.hpp"

#include <functional>
#include <map>
#include <utility>
#include <vector>

namespace fedosov {

/// Grading bookkeeping limit: a form with trunc() == kUnbounded is exact.
inline constexpr long long kUnbounded = 1LL << 40;

inline long long sat_add(long long a, long long b) {
    long long s = a + b;
    return s >= kUnbounded ? kUnbounded : s;
}

/// Monomial key of a Weyl-bundle section: h power, y multidegree (trailing
/// zeros trimmed) and a strictly increasing dx index tuple.
struct WeylKey {
    unsigned h = 0;
    std::vector<unsigned> y;
    std::vector<int> dx;

    unsigned y_total() const {
        unsigned s = 0;
        for (unsigned e : y)
            s += e;
        return s;
    }
    /// Grading degree 2k + p: the h power counts twice, each y once.
    long long degree() const { return 2LL * h + y_total(); }
    unsigned form_degree() const { return (unsigned)dx.size(); }
    unsigned y_exp(int i) const {
        return (i >= 1 && i <= (int)y.size()) ? y[i - 1] : 0u;
    }

    void trim() {
        while (!y.empty() && y.back() == 0)
            y.pop_back();
    }

    friend bool operator==(const WeylKey &a, const WeylKey &b) {
        return a.h == b.h && a.y == b.y && a.dx == b.dx;
    }
};

/// Canonical order: h power, grading degree, y multidegree (reverse-lex so
/// y1^2 sorts before y1 y2), then dx tuple. Rendering iterates map order.
inline bool operator<(const WeylKey &a, const WeylKey &b) {
    if (a.h != b.h)
        return a.h < b.h;
    long long da = a.degree(), db = b.degree();
    if (da != db)
        return da < db;
    if (a.y != b.y)
        return a.y > b.y;
    return a.dx < b.dx;
}

/// Sign of dx^k wedged from the left into the increasing tuple dx.
/// Returns 0 when k already occurs; otherwise fills `out`.
inline int wedge_insert(int k, const std::vector<int> &dx, std::vector<int> &out) {
    int below = 0;
    for (int e : dx) {
        if (e == k)
            return 0;
        if (e < k)
            ++below;
    }
    out.clear();
    out.reserve(dx.size() + 1);
    bool placed = false;
    for (int e : dx) {
        if (!placed && k < e) {
            out.push_back(k);
            placed = true;
        }
        out.push_back(e);
    }
    if (!placed)
        out.push_back(k);
    return below % 2 == 0 ? 1 : -1;
}

/// Sign of the wedge concatenation of two increasing tuples; 0 on overlap.
inline int wedge_merge(const std::vector<int> &a, const std::vector<int> &b,
                       std::vector<int> &out) {
    out.clear();
    out.reserve(a.size() + b.size());
    size_t ia = 0, ib = 0;
    long long inversions = 0;
    while (ia < a.size() && ib < b.size()) {
        if (a[ia] == b[ib])
            return 0;
        if (a[ia] < b[ib]) {
            out.push_back(a[ia++]);
        } else {
            out.push_back(b[ib++]);
            inversions += (long long)(a.size() - ia);
        }
    }
    while (ia < a.size())
        out.push_back(a[ia++]);
    while (ib < b.size())
        out.push_back(b[ib++]);
    return inversions % 2 == 0 ? 1 : -1;
}

/// Truncated section of the Weyl bundle with form part, W (x) Lambda.
///
/// Every value carries its own exactness bound trunc(): monomials of grading
/// degree <= trunc() are exactly those of the represented series; nothing is
/// stored above the bound. Operations propagate the bound honestly, e.g. the
/// fiberwise product of a known-to-degree-N factor with a factor of minimal
/// degree d is exact to degree N + d.
class WeylForm {
  public:
    using Terms = std::map<WeylKey, Poly>;

    explicit WeylForm(ChartPtr chart, long long trunc = kUnbounded)
        : chart_(std::move(chart)), trunc_(trunc) {}

    static WeylForm zero(ChartPtr chart) { return WeylForm(std::move(chart)); }
    static WeylForm unit(ChartPtr chart) {
        WeylForm w(std::move(chart));
        w.add_term(WeylKey{}, Poly::one());
        return w;
    }
    /// Central embedding of a polynomial in x (and possibly t).
    static WeylForm central(ChartPtr chart, const Poly &p) {
        WeylForm w(std::move(chart));
        w.add_term(WeylKey{}, p);
        return w;
    }
    /// Single monomial h^k y^alpha dx^beta * p; beta may come unsorted and is
    /// sign-normalized, a repeated index yields zero.
    static WeylForm monomial(ChartPtr chart, unsigned h, std::vector<unsigned> y,
                             std::vector<int> dx_unsorted, const Poly &p) {
        WeylForm w(std::move(chart));
        w.insert(h, std::move(y), std::move(dx_unsorted), p);
        return w;
    }

    const ChartPtr &chart() const { return chart_; }
    const Terms &terms() const { return terms_; }
    long long trunc() const { return trunc_; }
    bool is_zero() const { return terms_.empty(); }

    long long min_degree() const {
        long long m = kUnbounded;
        for (auto &[k, p] : terms_)
            m = std::min(m, k.degree());
        return m;
    }
    /// Minimal degree among y-carrying monomials; y-free forms are central
    /// for the graded commutator, so this is the commutator-relevant bound.
    long long min_degree_noncentral() const {
        long long m = kUnbounded;
        for (auto &[k, p] : terms_)
            if (k.y_total() > 0)
                m = std::min(m, k.degree());
        return m;
    }
    unsigned max_form_degree() const {
        unsigned m = 0;
        for (auto &[k, p] : terms_)
            m = std::max(m, k.form_degree());
        return m;
    }
    bool is_t_free() const {
        for (auto &[k, p] : terms_)
            if (!p.is_t_free())
                return false;
        return true;
    }

    void add_term(WeylKey key, const Poly &p) {
        if (p.is_zero())
            return;
        key.trim();
        if (key.degree() > trunc_)
            return;
        auto [it, fresh] = terms_.emplace(std::move(key), p);
        if (!fresh) {
            it->second += p;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    void insert(unsigned h, std::vector<unsigned> y, std::vector<int> dx_unsorted,
                const Poly &p) {
        for (int i : dx_unsorted)
            chart_->check_index(i);
        if ((int)y.size() > chart_->n())
            throw index_error("y multidegree beyond chart dimension");
        // sort dx with sign
        int sign = 1;
        for (size_t i = 0; i < dx_unsorted.size(); ++i)
            for (size_t j = i + 1; j < dx_unsorted.size(); ++j) {
                if (dx_unsorted[i] == dx_unsorted[j])
                    return;
                if (dx_unsorted[i] > dx_unsorted[j]) {
                    std::swap(dx_unsorted[i], dx_unsorted[j]);
                    sign = -sign;
                }
            }
        WeylKey key{h, std::move(y), std::move(dx_unsorted)};
        add_term(std::move(key), sign == 1 ? p : -p);
    }

    WeylForm operator-() const {
        WeylForm r(chart_, trunc_);
        for (auto &[k, p] : terms_)
            r.terms_.emplace(k, -p);
        return r;
    }
    WeylForm &operator+=(const WeylForm &o) {
        require_same_chart(o);
        trunc_ = std::min(trunc_, o.trunc_);
        drop_above(trunc_);
        for (auto &[k, p] : o.terms_)
            add_term(k, p);
        return *this;
    }
    WeylForm &operator-=(const WeylForm &o) {
        require_same_chart(o);
        trunc_ = std::min(trunc_, o.trunc_);
        drop_above(trunc_);
        for (auto &[k, p] : o.terms_)
            add_term(k, -p);
        return *this;
    }
    friend WeylForm operator+(WeylForm a, const WeylForm &b) { return a += b; }
    friend WeylForm operator-(WeylForm a, const WeylForm &b) { return a -= b; }

    WeylForm scaled(const Scalar &c) const {
        WeylForm r(chart_, c.is_zero() ? kUnbounded : trunc_);
        if (c.is_zero())
            return r;
        for (auto &[k, p] : terms_)
            r.terms_.emplace(k, p.scaled(c));
        return r;
    }
    /// Multiply by a central (x,t)-polynomial.
    WeylForm scaled_poly(const Poly &f) const {
        WeylForm r(chart_, f.is_zero() ? kUnbounded : trunc_);
        for (auto &[k, p] : terms_) {
            Poly q = p * f;
            if (!q.is_zero())
                r.terms_.emplace(k, std::move(q));
        }
        return r;
    }
    WeylForm shifted_h(unsigned j) const {
        WeylForm r(chart_, sat_add(trunc_, 2LL * j));
        for (auto &[k, p] : terms_) {
            WeylKey key = k;
            key.h += j;
            r.terms_.emplace(std::move(key), p);
        }
        return r;
    }
    /// Exact division by h^j; every monomial must carry at least h^j.
    WeylForm divided_h(unsigned j) const {
        WeylForm r(chart_, trunc_ >= kUnbounded ? kUnbounded : trunc_ - 2LL * j);
        for (auto &[k, p] : terms_) {
            if (k.h < j)
                throw consistency_error("division by h of a term without h factor");
            WeylKey key = k;
            key.h -= j;
            r.terms_.emplace(std::move(key), p);
        }
        return r;
    }

    WeylForm truncated(long long bound) const {
        WeylForm r(chart_, std::min(trunc_, bound));
        for (auto &[k, p] : terms_)
            if (k.degree() <= bound)
                r.terms_.emplace(k, p);
        return r;
    }

    /// P_m: the degree-m homogeneous part.
    WeylForm degree_part(long long m) const {
        WeylForm r(chart_, m <= trunc_ ? kUnbounded : trunc_);
        for (auto &[k, p] : terms_)
            if (k.degree() == m)
                r.terms_.emplace(k, p);
        return r;
    }

    /// a_00 + higher h powers of the y-free, dx-free part.
    WeylForm central_part() const {
        WeylForm r(chart_, trunc_);
        for (auto &[k, p] : terms_)
            if (k.y.empty() && k.dx.empty())
                r.terms_.emplace(k, p);
        return r;
    }

    WeylForm form_component(unsigned q) const {
        WeylForm r(chart_, trunc_);
        for (auto &[k, p] : terms_)
            if (k.form_degree() == q)
                r.terms_.emplace(k, p);
        return r;
    }

    WeylForm map_polys(const std::function<Poly(const Poly &)> &fn) const {
        WeylForm r(chart_, trunc_);
        for (auto &[k, p] : terms_) {
            Poly q = fn(p);
            if (!q.is_zero())
                r.terms_.emplace(k, std::move(q));
        }
        return r;
    }

    void require_same_chart(const WeylForm &o) const {
        if (chart_ == o.chart_)
            return;
        if (chart_ && o.chart_ && chart_->compatible_with(*o.chart_))
            return;
        throw chart_mismatch_error("operands built over different charts");
    }

    friend bool operator==(const WeylForm &a, const WeylForm &b) {
        a.require_same_chart(b);
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const WeylForm &a, const WeylForm &b) { return !(a == b); }

  private:
    void drop_above(long long bound) {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = it->first.degree() > bound ? terms_.erase(it) : std::next(it);
    }

    ChartPtr chart_;
    Terms terms_;
    long long trunc_;
};

/// a == b up to and including grading degree `deg`.
inline bool equal_mod(const WeylForm &a, const WeylForm &b, long long deg) {
    return (a - b).truncated(deg).is_zero();
}

// ---------------------------------------------------------------------------
// Linear operators
// ---------------------------------------------------------------------------

/// delta a = dx^k ^ da/dy^k. Lowers the grading degree by one.
inline WeylForm delta(const WeylForm &a) {
    WeylForm r(a.chart(), a.trunc() >= kUnbounded ? kUnbounded : a.trunc() - 1);
    std::vector<int> dx;
    for (auto &[k, p] : a.terms()) {
        for (int i = 1; i <= (int)k.y.size(); ++i) {
            unsigned e = k.y[i - 1];
            if (e == 0)
                continue;
            int sign = wedge_insert(i, k.dx, dx);
            if (sign == 0)
                continue;
            WeylKey key{k.h, k.y, dx};
            key.y[i - 1] -= 1;
            r.add_term(std::move(key), p.scaled(Scalar((long)e * sign)));
        }
    }
    return r;
}

/// delta^{-1} on a monomial with p-fold y and q-fold dx contracts one dx into
/// a y and divides by p+q; it kills the degree-0, form-0 part.
inline WeylForm delta_inv(const WeylForm &a) {
    WeylForm r(a.chart(), sat_add(a.trunc(), 1));
    for (auto &[k, p] : a.terms()) {
        unsigned denom = k.y_total() + k.form_degree();
        if (denom == 0)
            continue;
        for (size_t pos = 0; pos < k.dx.size(); ++pos) {
            int s = k.dx[pos];
            WeylKey key{k.h, k.y, {}};
            if ((int)key.y.size() < s)
                key.y.resize((size_t)s, 0u);
            key.y[s - 1] += 1;
            key.dx.reserve(k.dx.size() - 1);
            for (size_t q = 0; q < k.dx.size(); ++q)
                if (q != pos)
                    key.dx.push_back(k.dx[q]);
            Scalar c = Scalar(pos % 2 == 0 ? 1 : -1) / Scalar((long)denom);
            r.add_term(std::move(key), p.scaled(c));
        }
    }
    return r;
}

/// Exterior derivative of the coefficient functions, dx^i ^ da/dx^i.
inline WeylForm exterior_d(const WeylForm &a) {
    WeylForm r(a.chart(), a.trunc());
    std::vector<int> dx;
    for (auto &[k, p] : a.terms()) {
        for (int i = 1; i <= a.chart()->n(); ++i) {
            Poly dp = p.diff_x(i);
            if (dp.is_zero())
                continue;
            int sign = wedge_insert(i, k.dx, dx);
            if (sign == 0)
                continue;
            WeylKey key{k.h, k.y, dx};
            r.add_term(std::move(key), sign == 1 ? dp : -dp);
        }
    }
    return r;
}

inline WeylForm partial_y(const WeylForm &a, int i) {
    a.chart()->check_index(i);
    WeylForm r(a.chart(), a.trunc() >= kUnbounded ? kUnbounded : a.trunc() - 1);
    for (auto &[k, p] : a.terms()) {
        unsigned e = k.y_exp(i);
        if (e == 0)
            continue;
        WeylKey key = k;
        key.y[i - 1] -= 1;
        r.add_term(std::move(key), p.scaled(Scalar((long)e)));
    }
    return r;
}

inline WeylForm ddt(const WeylForm &a) {
    return a.map_polys([](const Poly &p) { return p.diff_t(); });
}
inline WeylForm antiderivative_t(const WeylForm &a) {
    return a.map_polys([](const Poly &p) { return p.antiderivative_t(); });
}
inline WeylForm subst_t(const WeylForm &a, const Scalar &v) {
    return a.map_polys([&](const Poly &p) { return p.subst_t_value(v); });
}
inline WeylForm subst_t_affine(const WeylForm &a, const Scalar &c0, const Scalar &c1) {
    return a.map_polys([&](const Poly &p) { return p.subst_t_affine(c0, c1); });
}

// ---------------------------------------------------------------------------
// Fiberwise product
// ---------------------------------------------------------------------------

namespace detail {

/// Accumulates sign-weighted fiberwise products of all term pairs of a and b
/// into `out`, keeping grading degrees <= cap. `pair_sign` receives the form
/// degrees of the two factors (in the a,b order passed here).
inline void fiberwise_accumulate(const WeylForm &a, const WeylForm &b, long long cap,
                                 int overall_sign,
                                 const std::function<int(unsigned, unsigned)> &pair_sign,
                                 WeylForm &out) {
    const Chart &chart = *a.chart();
    const int n = chart.n();
    struct State {
        std::vector<unsigned> ya, yb;
        Rational coef;
    };
    std::vector<int> dx;
    std::vector<State> cur, next;
    for (auto &[ka, pa] : a.terms()) {
        for (auto &[kb, pb] : b.terms()) {
            long long base = 2LL * (ka.h + kb.h) + ka.y_total() + kb.y_total();
            if (base > cap)
                continue;
            int wsign = wedge_merge(ka.dx, kb.dx, dx);
            if (wsign == 0)
                continue;
            int sign = overall_sign * wsign *
                       (pair_sign ? pair_sign(ka.form_degree(), kb.form_degree()) : 1);
            Poly pc = pa * pb;
            cur.assign(1, State{ka.y, kb.y, Rational(1)});
            Rational inv_mfact = 1;
            for (unsigned m = 0; !cur.empty(); ++m) {
                if (m > 0)
                    inv_mfact /= (long)m;
                Scalar pref = Scalar::half_neg_i_pow(m) * Scalar(inv_mfact * sign);
                for (auto &st : cur) {
                    std::vector<unsigned> ytot(std::max(st.ya.size(), st.yb.size()),
                                               0u);
                    for (size_t q = 0; q < st.ya.size(); ++q)
                        ytot[q] += st.ya[q];
                    for (size_t q = 0; q < st.yb.size(); ++q)
                        ytot[q] += st.yb[q];
                    WeylKey key{ka.h + kb.h + m, std::move(ytot), dx};
                    out.add_term(std::move(key), pc.scaled(pref * Scalar(st.coef)));
                }
                // one more omega-contraction between the two y blocks
                next.clear();
                for (auto &st : cur) {
                    for (int i = 1; i <= n; ++i) {
                        unsigned ei = (i <= (int)st.ya.size()) ? st.ya[i - 1] : 0u;
                        if (ei == 0)
                            continue;
                        int j = symplectic_partner(i);
                        unsigned ej = (j <= (int)st.yb.size()) ? st.yb[j - 1] : 0u;
                        if (ej == 0)
                            continue;
                        State nxt = st;
                        nxt.ya[i - 1] -= 1;
                        nxt.yb[j - 1] -= 1;
                        while (!nxt.ya.empty() && nxt.ya.back() == 0)
                            nxt.ya.pop_back();
                        while (!nxt.yb.empty() && nxt.yb.back() == 0)
                            nxt.yb.pop_back();
                        nxt.coef = st.coef * (long)(ei * ej) *
                                   chart.omega_upper(i, j);
                        next.push_back(std::move(nxt));
                    }
                }
                cur.swap(next);
            }
        }
    }
}

} // namespace detail

/// Fiberwise Moyal product with an explicit grading cap.
inline WeylForm fiberwise_capped(const WeylForm &a, const WeylForm &b, long long cap) {
    a.require_same_chart(b);
    WeylForm out(a.chart(), cap);
    detail::fiberwise_accumulate(a, b, cap, 1, nullptr, out);
    return out;
}

/// Fiberwise Moyal product; exact to the honest combined bound of the inputs.
inline WeylForm fiberwise_product(const WeylForm &a, const WeylForm &b) {
    long long cap = std::min(sat_add(a.trunc(), b.min_degree()),
                             sat_add(b.trunc(), a.min_degree()));
    return fiberwise_capped(a, b, cap);
}

/// Graded commutator [a,b] = a o b - (-1)^{rs} b o a, applied per form-degree
/// component. y-free forms are central, which sharpens the exactness bound.
/// An explicit out_cap restricts the computed degrees below the honest bound
/// when the caller truncates anyway.
inline WeylForm graded_commutator(const WeylForm &a, const WeylForm &b,
                                  long long out_cap = kUnbounded) {
    a.require_same_chart(b);
    if (a.min_degree_noncentral() >= kUnbounded ||
        b.min_degree_noncentral() >= kUnbounded)
        return WeylForm::zero(a.chart());
    long long cap = std::min(sat_add(a.trunc(), b.min_degree_noncentral()),
                             sat_add(b.trunc(), a.min_degree_noncentral()));
    cap = std::min(cap, out_cap);
    WeylForm out(a.chart(), cap);
    detail::fiberwise_accumulate(a, b, cap, 1, nullptr, out);
    detail::fiberwise_accumulate(b, a, cap, -1,
                                 [](unsigned s, unsigned r) {
                                     return (r * s) % 2 == 0 ? 1 : -1;
                                 },
                                 out);
    return out;
}

/// (i/h)[a,b]; the commutator is always divisible by h. out_cap bounds the
/// grading degree of the *result*.
inline WeylForm commutator_i_over_h(const WeylForm &a, const WeylForm &b,
                                    long long out_cap = kUnbounded) {
    long long inner = out_cap >= kUnbounded ? kUnbounded : out_cap + 2;
    return graded_commutator(a, b, inner).scaled(Scalar::i()).divided_h(1);
}

// ---------------------------------------------------------------------------
// Connection data on the Weyl bundle
// ---------------------------------------------------------------------------

/// omega_ij y^i dx^j, the generator of -delta as (i/h)[., .].
inline WeylForm omega_one_form(const ChartPtr &chart) {
    WeylForm g(chart);
    for (int i = 1; i <= chart->n(); ++i) {
        int j = symplectic_partner(i);
        int w = chart->omega_lower(i, j);
        std::vector<unsigned> y((size_t)i, 0u);
        y[i - 1] = 1;
        g.insert(0, std::move(y), {j}, Poly::constant(Scalar(w)));
    }
    return g;
}

/// 1/2 Gamma_ijk y^i y^j dx^k for a (possibly t-dependent) coefficient table.
inline WeylForm gamma_one_form(const ChartPtr &chart, const SymmetricGamma &gamma) {
    WeylForm g(chart);
    const int n = chart->n();
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
            for (int k = 1; k <= n; ++k) {
                const Poly &coeff = gamma.get(i, j, k);
                if (coeff.is_zero())
                    continue;
                std::vector<unsigned> y((size_t)std::max(i, j), 0u);
                y[i - 1] += 1;
                y[j - 1] += 1;
                g.insert(0, std::move(y), {k},
                         coeff.scaled(Scalar(Rational(1, 2))));
            }
    return g;
}

/// Covariant derivative da + (i/h)[gamma_form, a] extended to form sections.
inline WeylForm covariant_derivative(const WeylForm &gamma_form, const WeylForm &a) {
    return exterior_d(a) + commutator_i_over_h(gamma_form, a);
}

inline WeylForm covariant_derivative(const ChartPtr &chart, const SymmetricGamma &gamma,
                                     const WeylForm &a) {
    return covariant_derivative(gamma_one_form(chart, gamma), a);
}

/// Lowered curvature components of the symplectic connection. The convention
/// is pinned by requiring cov^2 = (i/h)[R, .] with R = 1/4 R_ijkl y^i y^j
/// dx^k ^ dx^l:
///   R_ijkl = d_k Gamma_ijl - d_l Gamma_ijk
///            + omega^{pq} (Gamma_pik Gamma_qjl - Gamma_pil Gamma_qjk).
inline Poly curvature_component(const Chart &chart, const SymmetricGamma &gamma, int i,
                                int j, int k, int l) {
    Poly r = gamma.get(i, j, l).diff_x(k) - gamma.get(i, j, k).diff_x(l);
    for (int p = 1; p <= chart.n(); ++p) {
        int q = symplectic_partner(p);
        int w = chart.omega_upper(p, q);
        Poly quad = gamma.get(p, i, k) * gamma.get(q, j, l) -
                    gamma.get(p, i, l) * gamma.get(q, j, k);
        r += quad.scaled(Scalar(w));
    }
    return r;
}

/// R = 1/4 R_ijkl y^i y^j dx^k ^ dx^l as a Weyl 2-form.
inline WeylForm curvature_form(const ChartPtr &chart, const SymmetricGamma &gamma) {
    WeylForm R(chart);
    const int n = chart->n();
    for (int i = 1; i <= n; ++i)
        for (int j = i; j <= n; ++j)
            for (int k = 1; k <= n; ++k)
                for (int l = k + 1; l <= n; ++l) {
                    // y^i y^j is symmetric and dx^k ^ dx^l antisymmetric, so
                    // the restricted ranges pick up multiplicity factors.
                    Poly c = curvature_component(*chart, gamma, i, j, k, l);
                    if (c.is_zero())
                        continue;
                    Rational mult = Rational(1, 4) * 2; // (k,l) and (l,k)
                    if (i != j)
                        mult *= 2; // (i,j) and (j,i)
                    std::vector<unsigned> y((size_t)std::max(i, j), 0u);
                    y[i - 1] += 1;
                    y[j - 1] += 1;
                    R.insert(0, std::move(y), {k, l}, c.scaled(Scalar(mult)));
                }
    return R;
}

inline WeylForm curvature_form(const ChartPtr &chart) {
    return curvature_form(chart, chart->gamma());
}

} // namespace fedosov
