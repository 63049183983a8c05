#pragma once

// Scaled design matrix, Gram matrix, and the spectral stability estimates
// that govern when least squares on the tensor basis is well posed.
//
// With gamma = beta(alpha+1, alpha+1)^d, the design matrix is
//   F[i][g(m)] = sqrt(gamma / n) * Phi_m(X_i),
// so G = F^T F is a Monte Carlo average with E[G] = I when the X_i carry
// the matching Beta product law.  A matrix Chernoff argument then bounds
// the probability that the condition number of G leaves [1, (1+delta)/(1-delta)].

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "jacreg/common.hpp"
#include "jacreg/jacobi.hpp"
#include "jacreg/matrix.hpp"
#include "jacreg/parallel.hpp"
#include "jacreg/sampling.hpp"
#include "jacreg/tensor_basis.hpp"

namespace jacreg {

struct DesignMatrix {
    Matrix entries;  // n x dim
    BasisSpec spec;
    std::size_t n() const { return entries.rows(); }
};

inline DesignMatrix build_design(const BasisSpec& spec, const SampleSet& data) {
    if (data.d() != spec.d())
        throw std::invalid_argument("build_design: data dimension mismatch");
    const std::size_t n = data.n();
    if (n == 0) throw std::invalid_argument("build_design: empty sample");
    const double scale = std::sqrt(spec.gamma() / static_cast<double>(n));
    DesignMatrix f{Matrix(n, spec.dim()), spec};
    parallel_chunks(n, 256, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const std::vector<double> row = spec.eval_row(data.x.row(i));
            auto dst = f.entries.row(i);
            for (std::size_t j = 0; j < row.size(); ++j) dst[j] = scale * row[j];
        }
    });
    return f;
}

// G = F^T F accumulated over fixed row blocks that are merged in block
// order, so the result is bit-identical for any thread count and carries
// two-level (blockwise pairwise) summation accuracy.  Only the upper
// triangle is computed; mirroring makes G exactly symmetric.
inline Matrix build_gram(const DesignMatrix& f) {
    const std::size_t n = f.n();
    const std::size_t dim = f.entries.cols();
    const std::size_t chunk = std::max<std::size_t>(4096, (n + 15) / 16);
    const std::size_t n_chunks = (n + chunk - 1) / chunk;

    std::vector<Matrix> partials(n_chunks, Matrix(dim, dim));
    parallel_chunks(n, chunk, [&](std::size_t lo, std::size_t hi) {
        Matrix& g = partials[lo / chunk];
        for (std::size_t i = lo; i < hi; ++i) {
            const auto row = f.entries.row(i);
            for (std::size_t j = 0; j < dim; ++j) {
                const double fj = row[j];
                if (fj == 0.0) continue;
                double* grow = &g(j, j);
                for (std::size_t k = j; k < dim; ++k) grow[k - j] += fj * row[k];
            }
        }
    });

    Matrix g(dim, dim);
    for (const Matrix& p : partials) {
        for (std::size_t j = 0; j < dim; ++j)
            for (std::size_t k = j; k < dim; ++k) g(j, k) += p(j, k);
    }
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t k = j + 1; k < dim; ++k) g(k, j) = g(j, k);
    return g;
}

inline std::vector<double> cholesky_solve(const Matrix& g,
                                          std::span<const double> rhs) {
    return CholeskyFactor(g).solve(rhs);
}

struct SpectrumSummary {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double kappa2 = std::numeric_limits<double>::infinity();
    bool is_pd = false;
};

// Extreme eigenvalues by the cyclic Jacobi solver; each is within `tol`
// (absolute) of the true value once converged.
inline SpectrumSummary condition_number(const Matrix& g, double tol = 1e-10) {
    EigenResult e = sym_eigen(g, false, tol);
    SpectrumSummary s;
    s.lambda_min = e.values.front();
    s.lambda_max = e.values.back();
    s.is_pd = s.lambda_min > 0.0;
    s.kappa2 = s.is_pd ? s.lambda_max / s.lambda_min
                       : std::numeric_limits<double>::infinity();
    return s;
}

// Constant in the Chernoff exponent.  The uniform bound on the summed
// squared basis values gives B_alpha = beta(alpha+1, alpha+1) * eta_alpha^2
// (about 2.27 at alpha = -1/2 and exactly 2 at alpha = 0).
inline double b_alpha(double alpha) {
    const double eta = jacobi_eta(alpha);
    return beta_function(alpha + 1.0, alpha + 1.0) * eta * eta;
}

// (B_alpha (N+1)^{2 alpha + 2})^d, the scale that multiplies 1/n in the
// concentration exponents.
inline double chernoff_scale(double alpha, int n_degree, int d) {
    if (n_degree < 0 || d < 1)
        throw std::invalid_argument("chernoff_scale: bad N or d");
    const double per_axis =
        b_alpha(alpha) * std::pow(static_cast<double>(n_degree) + 1.0,
                                  2.0 * alpha + 2.0);
    return std::pow(per_axis, static_cast<double>(d));
}

// Lower bound on P(kappa2(G) <= (1+delta)/(1-delta)):
//   1 - 2 (N+1)^d exp(-delta^2 n / (3 * chernoff_scale)).
// Returned as written, so small n gives a negative (vacuous) value; clamp
// to [0,1] for display or for comparison with empirical frequencies.
inline double stability_probability_bound(double alpha, int n_degree, int d,
                                          std::uint64_t n, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("stability bound: delta must be in (0,1)");
    const double dim = std::pow(static_cast<double>(n_degree) + 1.0,
                                static_cast<double>(d));
    const double expo = -delta * delta * static_cast<double>(n) /
                        (3.0 * chernoff_scale(alpha, n_degree, d));
    return 1.0 - 2.0 * dim * std::exp(expo);
}

// Smallest n making the Chernoff exponent overcome the dimension factor:
//   n >= 3/delta^2 * log(2 (N+1)^d) * chernoff_scale.
inline std::uint64_t stability_threshold(double alpha, int n_degree, int d,
                                         double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("stability_threshold: delta must be in (0,1)");
    const double dim = std::pow(static_cast<double>(n_degree) + 1.0,
                                static_cast<double>(d));
    const double rhs = 3.0 / (delta * delta) * std::log(2.0 * dim) *
                       chernoff_scale(alpha, n_degree, d);
    if (!(rhs < 9e18)) return std::numeric_limits<std::uint64_t>::max();
    return static_cast<std::uint64_t>(std::ceil(rhs));
}

}  // namespace jacreg
