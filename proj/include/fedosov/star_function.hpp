#pragma once

#include "fedosov/weyl.hpp"

#include <vector>

namespace fedosov {

/// Element of the deformed function algebra: sum_k h^k f_k(x), truncated.
/// order() is the highest h power known exactly; kUnbounded marks an exact
/// polynomial element. Trailing zero coefficients are trimmed.
class StarFunction {
  public:
    StarFunction() : ord_(kUnbounded) {}
    explicit StarFunction(Poly f, long long ord = kUnbounded) : ord_(ord) {
        coeffs_.push_back(std::move(f));
        trim();
    }
    StarFunction(std::vector<Poly> coeffs, long long ord)
        : coeffs_(std::move(coeffs)), ord_(ord) {
        drop_beyond_order();
        trim();
    }

    static StarFunction zero() { return StarFunction(); }
    static StarFunction one() { return StarFunction(Poly::one()); }
    static StarFunction variable(int i) { return StarFunction(Poly::variable(i)); }

    long long order() const { return ord_; }
    bool is_zero() const { return coeffs_.empty(); }
    size_t coeff_count() const { return coeffs_.size(); }

    const Poly &coeff(size_t k) const {
        static const Poly zero;
        return k < coeffs_.size() ? coeffs_[k] : zero;
    }
    const std::vector<Poly> &coeffs() const { return coeffs_; }

    StarFunction truncated(long long ord) const {
        StarFunction r;
        r.ord_ = std::min(ord_, ord);
        for (size_t k = 0; k < coeffs_.size() && (long long)k <= ord; ++k)
            r.coeffs_.push_back(coeffs_[k]);
        r.trim();
        return r;
    }

    StarFunction operator-() const {
        StarFunction r;
        r.ord_ = ord_;
        for (auto &c : coeffs_)
            r.coeffs_.push_back(-c);
        return r;
    }
    StarFunction &operator+=(const StarFunction &o) {
        ord_ = std::min(ord_, o.ord_);
        if (coeffs_.size() < o.coeffs_.size())
            coeffs_.resize(o.coeffs_.size());
        for (size_t k = 0; k < o.coeffs_.size(); ++k)
            coeffs_[k] += o.coeffs_[k];
        drop_beyond_order();
        trim();
        return *this;
    }
    StarFunction &operator-=(const StarFunction &o) { return *this += -o; }
    friend StarFunction operator+(StarFunction a, const StarFunction &b) { return a += b; }
    friend StarFunction operator-(StarFunction a, const StarFunction &b) { return a -= b; }

    StarFunction scaled(const Scalar &c) const {
        StarFunction r;
        r.ord_ = c.is_zero() ? kUnbounded : ord_;
        if (!c.is_zero())
            for (auto &p : coeffs_)
                r.coeffs_.push_back(p.scaled(c));
        r.trim();
        return r;
    }

    /// Pointwise (undeformed) product; used by classical-limit checks.
    StarFunction pointwise(const StarFunction &o) const {
        StarFunction r;
        r.ord_ = std::min(ord_, o.ord_);
        if (!coeffs_.empty() && !o.coeffs_.empty()) {
            r.coeffs_.assign(coeffs_.size() + o.coeffs_.size() - 1, Poly{});
            for (size_t a = 0; a < coeffs_.size(); ++a)
                for (size_t b = 0; b < o.coeffs_.size(); ++b)
                    r.coeffs_[a + b] += coeffs_[a] * o.coeffs_[b];
        }
        r.drop_beyond_order();
        r.trim();
        return r;
    }

    StarFunction shifted_h(unsigned j) const {
        StarFunction r;
        r.ord_ = sat_add(ord_, (long long)j);
        if (!coeffs_.empty()) {
            r.coeffs_.assign(coeffs_.size() + j, Poly{});
            for (size_t k = 0; k < coeffs_.size(); ++k)
                r.coeffs_[k + j] = coeffs_[k];
        }
        return r;
    }

    StarFunction diff_x(int i) const {
        StarFunction r;
        r.ord_ = ord_;
        for (auto &p : coeffs_)
            r.coeffs_.push_back(p.diff_x(i));
        r.trim();
        return r;
    }

    bool is_t_free() const {
        for (auto &p : coeffs_)
            if (!p.is_t_free())
                return false;
        return true;
    }

    friend bool operator==(const StarFunction &a, const StarFunction &b) {
        return a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const StarFunction &a, const StarFunction &b) {
        return !(a == b);
    }

  private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back().is_zero())
            coeffs_.pop_back();
    }
    void drop_beyond_order() {
        if (ord_ < kUnbounded && (long long)coeffs_.size() > ord_ + 1)
            coeffs_.resize((size_t)(ord_ + 1));
    }

    std::vector<Poly> coeffs_;
    long long ord_;
};

} // namespace fedosov
