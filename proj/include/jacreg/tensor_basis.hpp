#pragma once

// Tensor-product basis over [0,1]^d built from the orthonormal shifted
// Jacobi polynomials: Phi_m(x) = prod_j P~_{m_j}(x_j) for multi-indices
// m in {0..N}^d.
//
// The mathematical enumeration g(m) = 1 + sum_k m_k (N+1)^{k-1} is 1-based
// (flatten/unflatten); storage uses the 0-based flat_index = g(m) - 1 with
// the first coordinate fastest.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "jacreg/common.hpp"
#include "jacreg/jacobi.hpp"

namespace jacreg {

using MultiIndex = std::vector<int>;

inline constexpr std::size_t kMaxBasisDim = 1000000;

inline std::size_t basis_dimension(int n_degree, int d) {
    if (d < 1) throw std::invalid_argument("basis_dimension: d must be >= 1");
    if (n_degree < 0)
        throw std::invalid_argument("basis_dimension: N must be >= 0");
    std::size_t dim = 1;
    for (int j = 0; j < d; ++j) {
        dim *= static_cast<std::size_t>(n_degree) + 1;
        if (dim > kMaxBasisDim)
            throw std::invalid_argument(
                "basis_dimension: (N+1)^d exceeds the 1e6 cap");
    }
    return dim;
}

inline std::size_t flat_index(const MultiIndex& m, int n_degree, int d) {
    if (static_cast<int>(m.size()) != d)
        throw std::invalid_argument("flat_index: multi-index has wrong length");
    std::size_t idx = 0;
    std::size_t stride = 1;
    for (int j = 0; j < d; ++j) {
        if (m[j] < 0 || m[j] > n_degree)
            throw std::invalid_argument("flat_index: component out of range");
        idx += static_cast<std::size_t>(m[j]) * stride;
        stride *= static_cast<std::size_t>(n_degree) + 1;
    }
    return idx;
}

// 1-based enumeration in [1, (N+1)^d].
inline std::size_t flatten(const MultiIndex& m, int n_degree, int d) {
    return flat_index(m, n_degree, d) + 1;
}

inline MultiIndex unflatten(std::size_t g, int n_degree, int d) {
    const std::size_t dim = basis_dimension(n_degree, d);
    if (g < 1 || g > dim)
        throw std::invalid_argument("unflatten: index out of range");
    std::size_t rest = g - 1;
    MultiIndex m(d);
    const std::size_t base = static_cast<std::size_t>(n_degree) + 1;
    for (int j = 0; j < d; ++j) {
        m[j] = static_cast<int>(rest % base);
        rest /= base;
    }
    return m;
}

class BasisSpec {
public:
    BasisSpec(int d, int n_degree, double alpha)
        : d_(d),
          n_degree_(n_degree),
          dim_(basis_dimension(n_degree, d)),
          table_(JacobiParams(alpha), n_degree) {
        gamma_ = 1.0;
        const double b = beta_function(alpha + 1.0, alpha + 1.0);
        for (int j = 0; j < d; ++j) gamma_ *= b;
    }

    int d() const { return d_; }
    int degree() const { return n_degree_; }
    double alpha() const { return table_.alpha(); }
    std::size_t dim() const { return dim_; }
    // beta(alpha+1, alpha+1)^d, the normalizing constant tying the design
    // density to the basis weight.
    double gamma() const { return gamma_; }
    const JacobiTable& table() const { return table_; }

    double eval_basis(const MultiIndex& m, std::span<const double> x) const {
        check_point(x);
        if (static_cast<int>(m.size()) != d_)
            throw std::invalid_argument("eval_basis: multi-index length");
        double p = 1.0;
        for (int j = 0; j < d_; ++j) p *= table_.eval_normalized(m[j], x[j]);
        return p;
    }

    // All dim basis values at x in flat_index order, via one recursion pass
    // per axis and an in-place outer product (first axis fastest).
    std::vector<double> eval_row(std::span<const double> x) const {
        check_point(x);
        const std::size_t base = static_cast<std::size_t>(n_degree_) + 1;
        std::vector<double> uni(base * d_);
        for (int j = 0; j < d_; ++j)
            table_.eval_all(x[j], std::span<double>(uni.data() + j * base, base));

        std::vector<double> row(dim_);
        // Seed with the last axis, then expand towards axis 0 so that the
        // final layout has axis 0 fastest.
        const double* last = uni.data() + (d_ - 1) * base;
        for (std::size_t k = 0; k < base; ++k) row[k] = last[k];
        std::size_t cur = base;
        for (int j = d_ - 2; j >= 0; --j) {
            const double* u = uni.data() + j * base;
            for (std::size_t r = cur; r-- > 0;) {
                const double v = row[r];
                for (std::size_t k = base; k-- > 0;) row[r * base + k] = v * u[k];
            }
            cur *= base;
        }
        return row;
    }

private:
    void check_point(std::span<const double> x) const {
        if (x.size() != static_cast<std::size_t>(d_))
            throw std::invalid_argument("basis: point has wrong dimension");
        for (double xi : x)
            if (!(xi >= 0.0 && xi <= 1.0))
                throw std::domain_error("basis: point outside [0,1]^d");
    }

    int d_;
    int n_degree_;
    std::size_t dim_;
    JacobiTable table_;
    double gamma_;
};

}  // namespace jacreg
