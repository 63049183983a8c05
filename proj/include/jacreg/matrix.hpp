#pragma once

// Dense row-major matrix with the two factorizations the library needs:
// Cholesky for solving normal equations and a cyclic Jacobi eigensolver
// for spectra of symmetric matrices.  Everything is deliberately
// dependency-free; matrices here are small (basis dimension <= 1e3).

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jacreg/common.hpp"

namespace jacreg {

class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }
    double operator()(std::size_t i, std::size_t j) const {
        assert(i < rows_ && j < cols_);
        return data_[i * cols_ + j];
    }

    std::span<double> row(std::size_t i) {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (double v : data_) s += v * v;
        return std::sqrt(s);
    }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

// Pairwise (cascade) summation; error grows like log n instead of n.
inline double pairwise_sum(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

// --- Cholesky ------------------------------------------------------------

// Lower-triangular factor of a symmetric positive definite matrix,
// G = L L^T.  Pivots below 1e-12 * max diagonal entry are rejected.
class CholeskyFactor {
public:
    explicit CholeskyFactor(const Matrix& g) : l_(g.rows(), g.cols()) {
        const std::size_t n = g.rows();
        if (n != g.cols())
            throw std::invalid_argument("cholesky: matrix must be square");
        double max_diag = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            max_diag = std::max(max_diag, std::abs(g(i, i)));
        const double pivot_tol = 1e-12 * max_diag;
        for (std::size_t j = 0; j < n; ++j) {
            double d = g(j, j);
            for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
            if (!(d > pivot_tol))
                throw NotPositiveDefinite(
                    "cholesky: pivot " + std::to_string(d) + " at column " +
                    std::to_string(j) + " below tolerance");
            const double ljj = std::sqrt(d);
            l_(j, j) = ljj;
            for (std::size_t i = j + 1; i < n; ++i) {
                double s = g(i, j);
                for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
                l_(i, j) = s / ljj;
            }
        }
    }

    // Solves G z = rhs via forward then back substitution.
    std::vector<double> solve(std::span<const double> rhs) const {
        const std::size_t n = l_.rows();
        if (rhs.size() != n)
            throw std::invalid_argument("cholesky solve: size mismatch");
        std::vector<double> z(rhs.begin(), rhs.end());
        for (std::size_t i = 0; i < n; ++i) {
            double s = z[i];
            for (std::size_t k = 0; k < i; ++k) s -= l_(i, k) * z[k];
            z[i] = s / l_(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = z[ii];
            for (std::size_t k = ii + 1; k < n; ++k) s -= l_(k, ii) * z[k];
            z[ii] = s / l_(ii, ii);
        }
        return z;
    }

    const Matrix& l() const { return l_; }

private:
    Matrix l_;
};

// --- symmetric eigensolver -----------------------------------------------

struct EigenResult {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns, empty unless requested
    bool converged = false;
};

// Cyclic Jacobi rotations.  Converges when the off-diagonal Frobenius norm
// drops below max(abs_tol, 1e-12 * ||A||_F); capped at 30 sweeps, which is
// far beyond what quadratic convergence needs at these sizes.
inline EigenResult sym_eigen(const Matrix& a_in, bool want_vectors = false,
                             double abs_tol = 0.0) {
    const std::size_t n = a_in.rows();
    if (n != a_in.cols())
        throw std::invalid_argument("sym_eigen: matrix must be square");
    Matrix a = a_in;
    Matrix v = want_vectors ? Matrix::identity(n) : Matrix();

    auto off_norm = [&] {
        double s = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
        return std::sqrt(s);
    };

    const double frob = a.frobenius_norm();
    const double tol = std::max({abs_tol, 1e-12 * frob, 1e-300});

    EigenResult res;
    res.converged = (n <= 1) || off_norm() <= tol;
    for (int sweep = 0; sweep < 30 && !res.converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t =
                    (theta >= 0.0 ? 1.0 : -1.0) /
                    (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const double tau = s / (1.0 + c);
                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp - s * (akq + tau * akp);
                    a(p, k) = a(k, p);
                    a(k, q) = akq + s * (akp - tau * akq);
                    a(q, k) = a(k, q);
                }
                if (want_vectors) {
                    for (std::size_t k = 0; k < n; ++k) {
                        const double vkp = v(k, p), vkq = v(k, q);
                        v(k, p) = vkp - s * (vkq + tau * vkp);
                        v(k, q) = vkq + s * (vkp - tau * vkq);
                    }
                }
            }
        }
        res.converged = off_norm() <= tol;
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

    res.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) res.values[i] = a(order[i], order[i]);
    if (want_vectors) {
        res.vectors = Matrix(n, n);
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < n; ++i)
                res.vectors(i, j) = v(i, order[j]);
    }
    return res;
}

}  // namespace jacreg
