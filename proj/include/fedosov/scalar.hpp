#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <stdexcept>
#include <string>
#include <utility>

namespace fedosov {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct index_error : error {
    using error::error;
};
struct chart_mismatch_error : error {
    using error::error;
};
struct validation_error : error {
    using error::error;
};
struct solvability_error : error {
    using error::error;
};
struct domain_error : error {
    using error::error;
};
struct consistency_error : error {
    using error::error;
};
struct parse_error : error {
    int line;
    int column;
    parse_error(const std::string &msg, int line_, int col_)
        : error(msg + " (line " + std::to_string(line_) + ", column " +
                std::to_string(col_) + ")"),
          line(line_), column(col_) {}
};

/// Gaussian rational a + b*I with exact rational parts.
class Scalar {
  public:
    Scalar() : re_(0), im_(0) {}
    Scalar(long v) : re_(v), im_(0) {}
    Scalar(Rational re) : re_(std::move(re)), im_(0) {}
    Scalar(Rational re, Rational im) : re_(std::move(re)), im_(std::move(im)) {}

    static Scalar i() { return Scalar(Rational(0), Rational(1)); }
    static Scalar of(long num, long den) { return Scalar(Rational(num, den)); }

    const Rational &re() const { return re_; }
    const Rational &im() const { return im_; }

    bool is_zero() const { return re_ == 0 && im_ == 0; }
    bool is_real() const { return im_ == 0; }

    Scalar conj() const { return Scalar(re_, -im_); }

    Scalar operator-() const { return Scalar(-re_, -im_); }

    Scalar &operator+=(const Scalar &o) {
        re_ += o.re_;
        im_ += o.im_;
        return *this;
    }
    Scalar &operator-=(const Scalar &o) {
        re_ -= o.re_;
        im_ -= o.im_;
        return *this;
    }
    Scalar &operator*=(const Scalar &o) {
        Rational r = re_ * o.re_ - im_ * o.im_;
        Rational i = re_ * o.im_ + im_ * o.re_;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }
    Scalar &operator/=(const Scalar &o) {
        if (o.is_zero())
            throw domain_error("division by zero scalar");
        Rational n = o.re_ * o.re_ + o.im_ * o.im_;
        Rational r = (re_ * o.re_ + im_ * o.im_) / n;
        Rational i = (im_ * o.re_ - re_ * o.im_) / n;
        re_ = std::move(r);
        im_ = std::move(i);
        return *this;
    }

    friend Scalar operator+(Scalar a, const Scalar &b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar &b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar &b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Scalar &b) { return a /= b; }
    friend bool operator==(const Scalar &a, const Scalar &b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const Scalar &a, const Scalar &b) { return !(a == b); }

    /// (-I/2)^m, the m-th numeric prefactor of the fiberwise product series.
    static Scalar half_neg_i_pow(unsigned m) {
        Rational mag = Rational(1);
        for (unsigned k = 0; k < m; ++k)
            mag /= 2;
        switch (m % 4) { // (-I)^m cycle: 1, -I, -1, I
        case 0:
            return Scalar(mag);
        case 1:
            return Scalar(Rational(0), -mag);
        case 2:
            return Scalar(-mag);
        default:
            return Scalar(Rational(0), mag);
        }
    }

  private:
    Rational re_;
    Rational im_;
};

inline Rational factorial(unsigned n) {
    Rational f = 1;
    for (unsigned k = 2; k <= n; ++k)
        f *= k;
    return f;
}

inline Rational binomial(unsigned n, unsigned k) {
    if (k > n)
        return 0;
    Rational b = 1;
    for (unsigned j = 0; j < k; ++j)
        b = b * (n - j) / (j + 1);
    return b;
}

} // namespace fedosov
