#pragma once

// Gauss quadrature for the weight x^a (1-x)^a on [0,1], built by the
// Golub-Welsch method: nodes are eigenvalues of the symmetric tridiagonal
// recurrence matrix, weights come from the first eigenvector components.
// Used as the deterministic oracle for projection coefficients, weighted
// norms, and truncation errors.

#include <cmath>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "jacreg/common.hpp"
#include "jacreg/jacobi.hpp"
#include "jacreg/matrix.hpp"
#include "jacreg/tensor_basis.hpp"

namespace jacreg {

struct QuadratureRule {
    double alpha = 0.0;
    int q = 0;
    std::vector<double> nodes;    // ascending, strictly inside (0,1)
    std::vector<double> weights;  // positive, summing to beta(a+1, a+1)
};

// In the monic recurrence on [0,1] the symmetric weight pins every
// diagonal entry at 1/2; the squared off-diagonals are c_k / (4 a_k a_{k-1})
// in terms of the classical recursion coefficients.
inline QuadratureRule gauss_jacobi(double alpha, int q) {
    if (q < 1) throw std::invalid_argument("gauss_jacobi: q must be >= 1");
    JacobiTable table(JacobiParams(alpha), q);

    Matrix j(q, q);
    for (int i = 0; i < q; ++i) j(i, i) = 0.5;
    for (int k = 1; k < q; ++k) {
        const double b2 = table.recursion_c(k) /
                          (4.0 * table.recursion_a(k) * table.recursion_a(k - 1));
        j(k - 1, k) = std::sqrt(b2);
        j(k, k - 1) = j(k - 1, k);
    }

    EigenResult e = sym_eigen(j, true);
    if (!e.converged)
        throw std::runtime_error("gauss_jacobi: eigensolver did not converge");

    const double mu0 = beta_function(alpha + 1.0, alpha + 1.0);
    QuadratureRule rule;
    rule.alpha = alpha;
    rule.q = q;
    rule.nodes = e.values;
    rule.weights.resize(q);
    for (int i = 0; i < q; ++i) {
        const double v0 = e.vectors(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

// Tensor-grid integral of g over [0,1]^d against the product weight.
template <class G>
double tensor_quadrature(const G& g, const QuadratureRule& rule, int d) {
    if (d < 1) throw std::invalid_argument("tensor_quadrature: d must be >= 1");
    const std::size_t q = rule.nodes.size();
    double total_nodes = 1.0;
    for (int j = 0; j < d; ++j) total_nodes *= static_cast<double>(q);
    if (total_nodes > 1e8)
        throw std::invalid_argument("tensor_quadrature: q^d exceeds the 1e8 cap");
    const std::size_t n_total = static_cast<std::size_t>(total_nodes);

    std::vector<double> x(d);
    double sum = 0.0;
    for (std::size_t flat = 0; flat < n_total; ++flat) {
        std::size_t rest = flat;
        double w = 1.0;
        for (int j = 0; j < d; ++j) {
            const std::size_t id = rest % q;
            rest /= q;
            x[j] = rule.nodes[id];
            w *= rule.weights[id];
        }
        sum += w * g(std::span<const double>(x));
    }
    return sum;
}

// sqrt of the weighted L2 norm of f, by tensor quadrature.
template <class F>
double weighted_norm(const F& f, double alpha, const QuadratureRule& rule,
                     int d) {
    if (rule.alpha != alpha)
        throw std::invalid_argument("weighted_norm: rule built for another alpha");
    const double n2 = tensor_quadrature(
        [&](std::span<const double> x) {
            const double v = f(x);
            return v * v;
        },
        rule, d);
    return std::sqrt(std::max(0.0, n2));
}

struct ProjectionResult {
    int d = 1;
    int degree = 0;
    double alpha = 0.0;
    std::vector<double> coeffs;  // flat_index order
    double l2_norm_f = 0.0;      // ||f|| in the weighted norm
    double proj_error_l2 = 0.0;  // ||f - pi_N f||
    double proj_error_sup = 0.0; // grid sup of |f - pi_N f| (NaN for d > 3)
    double coeff(const MultiIndex& m) const {
        return coeffs[flat_index(m, degree, d)];
    }
    double projection_norm() const {
        double s = 0.0;
        for (double c : coeffs) s += c * c;
        return std::sqrt(s);
    }
};

// Evaluates pi_N f at x from projection coefficients.
inline double eval_projection(const ProjectionResult& p, const BasisSpec& spec,
                              std::span<const double> x) {
    const std::vector<double> row = spec.eval_row(x);
    double s = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) s += p.coeffs[i] * row[i];
    return s;
}

// Projection coefficients <f, Phi_m> for all |m|_inf <= N by tensor
// quadrature.  Requires q >= 2N+2 so products of basis polynomials are
// integrated exactly; the coefficients then satisfy Bessel's inequality
// against the discrete norm up to rounding.
template <class F>
ProjectionResult project(const F& f, const BasisSpec& spec,
                         const QuadratureRule& rule) {
    if (rule.alpha != spec.alpha())
        throw std::invalid_argument("project: rule built for another alpha");
    if (rule.q < 2 * spec.degree() + 2)
        throw std::invalid_argument("project: need q >= 2N+2");

    const int d = spec.d();
    const std::size_t q = rule.nodes.size();
    double total_nodes = 1.0;
    for (int j = 0; j < d; ++j) total_nodes *= static_cast<double>(q);
    if (total_nodes > 1e8)
        throw std::invalid_argument("project: q^d exceeds the 1e8 cap");
    const std::size_t n_total = static_cast<std::size_t>(total_nodes);

    ProjectionResult p;
    p.d = d;
    p.degree = spec.degree();
    p.alpha = spec.alpha();
    p.coeffs.assign(spec.dim(), 0.0);

    std::vector<double> x(d);
    double norm2 = 0.0;
    for (std::size_t flat = 0; flat < n_total; ++flat) {
        std::size_t rest = flat;
        double w = 1.0;
        for (int j = 0; j < d; ++j) {
            const std::size_t id = rest % q;
            rest /= q;
            x[j] = rule.nodes[id];
            w *= rule.weights[id];
        }
        const double fv = f(std::span<const double>(x));
        norm2 += w * fv * fv;
        const std::vector<double> row = spec.eval_row(x);
        const double wf = w * fv;
        for (std::size_t i = 0; i < row.size(); ++i) p.coeffs[i] += wf * row[i];
    }

    p.l2_norm_f = std::sqrt(std::max(0.0, norm2));
    double csum = 0.0;
    for (double c : p.coeffs) csum += c * c;
    p.proj_error_l2 = std::sqrt(std::max(0.0, norm2 - csum));

    if (d <= 3) {
        const int res = d <= 2 ? 64 : 32;
        std::vector<double> g(d, 0.0);
        double sup = 0.0;
        std::size_t grid_total = 1;
        for (int j = 0; j < d; ++j) grid_total *= res;
        for (std::size_t flat = 0; flat < grid_total; ++flat) {
            std::size_t rest = flat;
            for (int j = 0; j < d; ++j) {
                g[j] = static_cast<double>(rest % res) / (res - 1);
                rest /= res;
            }
            const double err =
                std::abs(f(std::span<const double>(g)) - eval_projection(p, spec, g));
            sup = std::max(sup, err);
        }
        p.proj_error_sup = sup;
    } else {
        p.proj_error_sup = std::numeric_limits<double>::quiet_NaN();
    }
    return p;
}

// Grid sup norm of f - pi_N f with an internally built q = 2N+2 rule.
template <class F>
double sup_error(const F& f, const BasisSpec& spec, int grid_resolution) {
    if (grid_resolution < 32)
        throw std::invalid_argument("sup_error: grid resolution must be >= 32");
    if (spec.d() > 3)
        throw std::invalid_argument("sup_error: supported for d <= 3 only");
    const QuadratureRule rule =
        gauss_jacobi(spec.alpha(), 2 * spec.degree() + 2);
    const ProjectionResult p = project(f, spec, rule);

    const int d = spec.d();
    std::vector<double> g(d, 0.0);
    double sup = 0.0;
    std::size_t grid_total = 1;
    for (int j = 0; j < d; ++j) grid_total *= grid_resolution;
    for (std::size_t flat = 0; flat < grid_total; ++flat) {
        std::size_t rest = flat;
        for (int j = 0; j < d; ++j) {
            g[j] = static_cast<double>(rest % grid_resolution) /
                   (grid_resolution - 1);
            rest /= grid_resolution;
        }
        const double err =
            std::abs(f(std::span<const double>(g)) - eval_projection(p, spec, g));
        sup = std::max(sup, err);
    }
    return sup;
}

// High-probability weighted L2 error bound for the least squares fit:
//   proj_l2 + sqrt(kappa2) * sqrt(proj_sup^2 + sigma^2 + delta)
//             / sqrt(1 - delta / ||pi_N f||).
// Requires 0 < delta < ||pi_N f||.
inline double l2_error_bound(const ProjectionResult& p, double sigma,
                             double delta, double kappa2) {
    const double proj_norm = p.projection_norm();
    if (!(delta > 0.0 && delta < proj_norm))
        throw std::invalid_argument(
            "l2_error_bound: delta must lie in (0, ||pi_N f||)");
    const double sup2 = p.proj_error_sup * p.proj_error_sup;
    return p.proj_error_l2 +
           std::sqrt(kappa2) * std::sqrt(sup2 + sigma * sigma + delta) /
               std::sqrt(1.0 - delta / proj_norm);
}

}  // namespace jacreg
