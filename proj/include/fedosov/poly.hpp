#pragma once

#include "fedosov/scalar.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <vector>

namespace fedosov {

/// Monomial in the chart variables x1..xn and the homotopy parameter t.
/// Exponent vector of the x's is stored with trailing zeros trimmed, so the
/// representation is canonical independently of the chart dimension.
struct Mono {
    std::vector<unsigned> x; // x[i] = exponent of x^{i+1}
    unsigned t = 0;

    void trim() {
        while (!x.empty() && x.back() == 0)
            x.pop_back();
    }
    unsigned x_exp(int i) const { // 1-based variable index
        return (i >= 1 && i <= (int)x.size()) ? x[i - 1] : 0u;
    }
    unsigned total_x_degree() const {
        unsigned d = 0;
        for (unsigned e : x)
            d += e;
        return d;
    }
    bool is_one() const { return x.empty() && t == 0; }

    friend bool operator==(const Mono &a, const Mono &b) {
        return a.t == b.t && a.x == b.x;
    }
};

/// Graded order: total degree first, then reverse-lexicographic exponents
/// (so x1 sorts before x2), then the t power. Render order == map order.
inline bool operator<(const Mono &a, const Mono &b) {
    unsigned da = a.total_x_degree() + a.t, db = b.total_x_degree() + b.t;
    if (da != db)
        return da < db;
    if (a.x != b.x)
        return a.x > b.x;
    return a.t < b.t;
}

/// Exact multivariate polynomial over Gaussian rationals.
/// No zero coefficients are ever stored.
class Poly {
  public:
    using Terms = std::map<Mono, Scalar>;

    Poly() = default;

    static Poly zero() { return Poly(); }
    static Poly constant(Scalar c) {
        Poly p;
        p.add_term(Mono{}, std::move(c));
        return p;
    }
    static Poly one() { return constant(Scalar(1)); }
    /// x^i (1-based), to the given power.
    static Poly variable(int i, unsigned power = 1) {
        if (i < 1)
            throw index_error("variable index must be >= 1");
        Mono m;
        if (power > 0) {
            m.x.assign((size_t)i, 0u);
            m.x[i - 1] = power;
        }
        Poly p;
        p.add_term(std::move(m), Scalar(1));
        return p;
    }
    static Poly var_t(unsigned power = 1) {
        Mono m;
        m.t = power;
        Poly p;
        p.add_term(std::move(m), Scalar(1));
        return p;
    }

    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_t_free() const {
        for (auto &[m, c] : terms_)
            if (m.t != 0)
                return false;
        return true;
    }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
    }
    Scalar constant_value() const {
        auto it = terms_.find(Mono{});
        return it == terms_.end() ? Scalar(0) : it->second;
    }
    int max_x_index() const {
        int m = 0;
        for (auto &[mono, c] : terms_)
            m = std::max<int>(m, (int)mono.x.size());
        return m;
    }
    unsigned total_degree() const {
        unsigned d = 0;
        for (auto &[m, c] : terms_)
            d = std::max(d, m.total_x_degree() + m.t);
        return d;
    }

    void add_term(Mono m, Scalar c) {
        if (c.is_zero())
            return;
        m.trim();
        auto [it, fresh] = terms_.emplace(std::move(m), c);
        if (!fresh) {
            it->second += c;
            if (it->second.is_zero())
                terms_.erase(it);
        }
    }

    Poly operator-() const {
        Poly r;
        for (auto &[m, c] : terms_)
            r.terms_.emplace(m, -c);
        return r;
    }
    Poly &operator+=(const Poly &o) {
        for (auto &[m, c] : o.terms_)
            add_term(m, c);
        return *this;
    }
    Poly &operator-=(const Poly &o) {
        for (auto &[m, c] : o.terms_)
            add_term(m, -c);
        return *this;
    }
    friend Poly operator+(Poly a, const Poly &b) { return a += b; }
    friend Poly operator-(Poly a, const Poly &b) { return a -= b; }

    friend Poly operator*(const Poly &a, const Poly &b) {
        Poly r;
        for (auto &[ma, ca] : a.terms_)
            for (auto &[mb, cb] : b.terms_) {
                Mono m;
                m.x.assign(std::max(ma.x.size(), mb.x.size()), 0u);
                for (size_t k = 0; k < ma.x.size(); ++k)
                    m.x[k] += ma.x[k];
                for (size_t k = 0; k < mb.x.size(); ++k)
                    m.x[k] += mb.x[k];
                m.t = ma.t + mb.t;
                r.add_term(std::move(m), ca * cb);
            }
        return r;
    }
    Poly &operator*=(const Poly &o) { return *this = *this * o; }

    Poly scaled(const Scalar &c) const {
        Poly r;
        if (c.is_zero())
            return r;
        for (auto &[m, coef] : terms_)
            r.terms_.emplace(m, coef * c);
        return r;
    }

    /// d/dx^i, exact.
    Poly diff_x(int i) const {
        if (i < 1)
            throw index_error("derivative index must be >= 1");
        Poly r;
        for (auto &[m, c] : terms_) {
            unsigned e = m.x_exp(i);
            if (e == 0)
                continue;
            Mono d = m;
            d.x[i - 1] -= 1;
            r.add_term(std::move(d), c * Scalar((long)e));
        }
        return r;
    }

    Poly diff_t() const {
        Poly r;
        for (auto &[m, c] : terms_) {
            if (m.t == 0)
                continue;
            Mono d = m;
            d.t -= 1;
            r.add_term(std::move(d), c * Scalar((long)m.t));
        }
        return r;
    }

    /// Definite integral over t in [0,1]; the result is t-free.
    Poly integrate_t01() const {
        Poly r;
        for (auto &[m, c] : terms_) {
            Mono d = m;
            d.t = 0;
            r.add_term(std::move(d), c / Scalar((long)m.t + 1));
        }
        return r;
    }

    /// Antiderivative in t vanishing at t = 0.
    Poly antiderivative_t() const {
        Poly r;
        for (auto &[m, c] : terms_) {
            Mono d = m;
            d.t = m.t + 1;
            r.add_term(std::move(d), c / Scalar((long)m.t + 1));
        }
        return r;
    }

    /// Substitute t := c0 + c1*t.
    Poly subst_t_affine(const Scalar &c0, const Scalar &c1) const {
        Poly r;
        for (auto &[m, c] : terms_) {
            // (c0 + c1 t)^k expanded binomially
            for (unsigned j = 0; j <= m.t; ++j) {
                Scalar coef = c * Scalar(binomial(m.t, j));
                for (unsigned q = 0; q < m.t - j; ++q)
                    coef *= c0;
                for (unsigned q = 0; q < j; ++q)
                    coef *= c1;
                Mono d = m;
                d.t = j;
                r.add_term(std::move(d), coef);
            }
        }
        return r;
    }

    Poly subst_t_value(const Scalar &v) const { return subst_t_affine(v, Scalar(0)); }

    /// Evaluate at a point (x_1..x_n, t); entries beyond the vector are zero.
    Scalar eval(const std::vector<Scalar> &xs, const Scalar &t = Scalar(0)) const {
        Scalar acc(0);
        for (auto &[m, c] : terms_) {
            Scalar v = c;
            for (size_t k = 0; k < m.x.size(); ++k) {
                Scalar base = k < xs.size() ? xs[k] : Scalar(0);
                for (unsigned e = 0; e < m.x[k]; ++e)
                    v *= base;
            }
            for (unsigned e = 0; e < m.t; ++e)
                v *= t;
            acc += v;
        }
        return acc;
    }

    friend bool operator==(const Poly &a, const Poly &b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const Poly &a, const Poly &b) { return !(a == b); }

  private:
    Terms terms_;
};

} // namespace fedosov
