#pragma once

#include "fedosov/poly.hpp"

#include <array>
#include <map>
#include <memory>

namespace fedosov {

/// Index of the symplectic partner of x^i in the standard Darboux pairing
/// (1,2), (3,4), ...  (1-based).
inline int symplectic_partner(int i) { return (i % 2 == 1) ? i + 1 : i - 1; }

/// Totally symmetric connection coefficients Gamma_ijk, stored once per
/// sorted index triple. Entries may carry the homotopy parameter t when the
/// table belongs to a homotopy of connections.
class SymmetricGamma {
  public:
    using Key = std::array<int, 3>;

    SymmetricGamma() = default;

    static Key sorted(int i, int j, int k) {
        Key key{i, j, k};
        std::sort(key.begin(), key.end());
        return key;
    }

    void set(int i, int j, int k, Poly value) {
        Key key = sorted(i, j, k);
        if (value.is_zero())
            table_.erase(key);
        else
            table_[key] = std::move(value);
    }

    const Poly &get(int i, int j, int k) const {
        static const Poly zero;
        auto it = table_.find(sorted(i, j, k));
        return it == table_.end() ? zero : it->second;
    }

    bool empty() const { return table_.empty(); }
    const std::map<Key, Poly> &entries() const { return table_; }

    SymmetricGamma scaled(const Poly &factor) const {
        SymmetricGamma g;
        for (auto &[key, value] : table_) {
            Poly v = value * factor;
            if (!v.is_zero())
                g.table_[key] = std::move(v);
        }
        return g;
    }

    friend bool operator==(const SymmetricGamma &a, const SymmetricGamma &b) {
        return a.table_ == b.table_;
    }

  private:
    std::map<Key, Poly> table_;
};

/// Local Darboux chart: even dimension n, the standard constant symplectic
/// matrix (never read from input), polynomial connection coefficients, the
/// working grading truncation n_work and the h-order k_order of the deformed
/// function algebra.
class Chart {
  public:
    Chart(int n, SymmetricGamma gamma, int n_work, int k_order)
        : n_(n), gamma_(std::move(gamma)), n_work_(n_work), k_order_(k_order) {
        if (n < 2 || n % 2 != 0)
            throw validation_error("chart dimension must be even and >= 2");
        if (n_work < 0 || k_order < 0)
            throw validation_error("truncation parameters must be nonnegative");
        for (auto &[key, value] : gamma_.entries()) {
            for (int idx : key)
                if (idx < 1 || idx > n)
                    throw validation_error("connection index out of range");
            if (!value.is_t_free())
                throw validation_error("connection coefficients must not depend on t");
            if (value.max_x_index() > n)
                throw validation_error("connection coefficient uses variable beyond chart dimension");
        }
    }

    int n() const { return n_; }
    int n_work() const { return n_work_; }
    int k_order() const { return k_order_; }
    const SymmetricGamma &gamma() const { return gamma_; }
    bool flat() const { return gamma_.empty(); }

    /// omega_ij of the standard block form: omega_{2a-1,2a} = 1.
    int omega_lower(int i, int j) const {
        check_index(i);
        check_index(j);
        if (j == i + 1 && i % 2 == 1)
            return 1;
        if (i == j + 1 && j % 2 == 1)
            return -1;
        return 0;
    }

    /// omega^ij fixed by omega^{mi} omega_{ij} = delta^m_j, i.e. the matrix
    /// inverse of the block form: omega^{2a-1,2a} = -1.
    int omega_upper(int i, int j) const { return -omega_lower(i, j); }

    void check_index(int i) const {
        if (i < 1 || i > n_)
            throw index_error("index " + std::to_string(i) + " out of range 1.." +
                              std::to_string(n_));
    }

    /// Structural compatibility: same dimension and connection coefficients.
    /// Working truncations are per-value budgets, not part of the geometry.
    bool compatible_with(const Chart &o) const {
        return n_ == o.n_ && gamma_ == o.gamma_;
    }

    friend bool operator==(const Chart &a, const Chart &b) {
        return a.n_ == b.n_ && a.n_work_ == b.n_work_ && a.k_order_ == b.k_order_ &&
               a.gamma_ == b.gamma_;
    }

  private:
    int n_;
    SymmetricGamma gamma_;
    int n_work_;
    int k_order_;
};

using ChartPtr = std::shared_ptr<const Chart>;

inline ChartPtr make_chart(int n, SymmetricGamma gamma, int n_work, int k_order) {
    return std::make_shared<Chart>(n, std::move(gamma), n_work, k_order);
}

inline ChartPtr flat_chart(int n, int n_work, int k_order) {
    return make_chart(n, SymmetricGamma{}, n_work, k_order);
}

} // namespace fedosov
