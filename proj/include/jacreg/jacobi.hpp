#pragma once

// Symmetric Jacobi (Gegenbauer-type) polynomials P_k^{(a,a)} on [-1,1] and
// their orthonormal shifted counterparts on [0,1] with weight
// w_a(x) = x^a (1-x)^a.
//
// The three-term recursion is
//   P_{k+1}(t) = (a_k t + b_k) P_k(t) - c_k P_{k-1}(t),
// with b_k = 0 in the symmetric case.  Squared norms h_k are evaluated in
// log space via lgamma so large degrees stay finite; the k = 0 norm and
// the k = 0 recursion coefficient are special-cased because the generic
// formulas are 0/0 at a = -1/2.

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "jacreg/common.hpp"

namespace jacreg {

struct JacobiParams {
    double alpha;
    explicit JacobiParams(double alpha) : alpha(alpha) {
        if (!(alpha > -1.0))
            throw std::invalid_argument(
                "JacobiParams: alpha must exceed -1 for an integrable weight");
    }
};

// Growth constant eta_alpha used in the uniform bound on the normalized
// polynomials; finite for every alpha >= -1/2.
inline double jacobi_eta(double alpha) {
    return std::sqrt(2.0) / std::tgamma(alpha + 1.0) *
           std::exp(std::max(alpha, 0.0) / 6.0 + alpha * alpha / 4.0);
}

// Uniform bound on |normalized P_k| over [0,1]:
//   sup |P~_k| <= eta_alpha * k^alpha * sqrt(k + alpha + 1/2),  k >= 2.
inline double jacobi_sup_bound(double alpha, int k) {
    if (!(alpha >= -0.5))
        throw std::invalid_argument("jacobi_sup_bound: requires alpha >= -1/2");
    if (k < 2)
        throw std::invalid_argument("jacobi_sup_bound: requires k >= 2");
    return jacobi_eta(alpha) * std::pow(static_cast<double>(k), alpha) *
           std::sqrt(k + alpha + 0.5);
}

class JacobiTable {
public:
    JacobiTable(JacobiParams params, int max_degree)
        : alpha_(params.alpha), max_degree_(max_degree) {
        if (max_degree < 0)
            throw std::invalid_argument("JacobiTable: max_degree must be >= 0");
        const double a = alpha_;
        const int n = max_degree;
        a_.resize(n + 1, 0.0);
        c_.resize(n + 1, 0.0);
        h_.resize(n + 1, 0.0);
        norm_scale_.resize(n + 1, 0.0);

        a_[0] = a + 1.0;  // P_1(t) = (a+1) t
        c_[0] = 0.0;
        for (int k = 1; k <= n; ++k) {
            const double tk = 2.0 * k + 2.0 * a;
            a_[k] = (tk + 1.0) * (tk + 2.0) / (2.0 * (k + 1.0) * (k + 2.0 * a + 1.0));
            c_[k] = (k + a) * (k + a) * (tk + 2.0) /
                    ((k + 1.0) * (k + 2.0 * a + 1.0) * tk);
        }

        const double ln2 = std::log(2.0);
        // h_0 = 2^{2a+1} Gamma(a+1)^2 / Gamma(2a+2)
        double log_h0 = (2.0 * a + 1.0) * ln2 + 2.0 * std::lgamma(a + 1.0) -
                        std::lgamma(2.0 * a + 2.0);
        h_[0] = std::exp(log_h0);
        norm_scale_[0] = std::exp((a + 0.5) * ln2 - 0.5 * log_h0);
        for (int k = 1; k <= n; ++k) {
            const double log_hk = (2.0 * a + 1.0) * ln2 +
                                  2.0 * std::lgamma(k + a + 1.0) -
                                  std::lgamma(k + 1.0) -
                                  std::log(2.0 * k + 2.0 * a + 1.0) -
                                  std::lgamma(k + 2.0 * a + 1.0);
            h_[k] = std::exp(log_hk);
            norm_scale_[k] = std::exp((a + 0.5) * ln2 - 0.5 * log_hk);
        }
        eta_ = jacobi_eta(a);
    }

    double alpha() const { return alpha_; }
    int max_degree() const { return max_degree_; }
    double eta() const { return eta_; }
    double recursion_a(int k) const { return a_[k]; }
    double recursion_c(int k) const { return c_[k]; }
    double squared_norm(int k) const { return h_[k]; }
    double norm_scale(int k) const { return norm_scale_[k]; }

    // Classical P_k^{(a,a)}(t), t in [-1,1].
    double eval_classical(int k, double t) const {
        check_degree(k);
        if (k == 0) return 1.0;
        double prev = 1.0;
        double cur = a_[0] * t;
        for (int j = 1; j < k; ++j) {
            const double next = a_[j] * t * cur - c_[j] * prev;
            prev = cur;
            cur = next;
        }
        return cur;
    }

    // Orthonormal shifted polynomial on [0,1]:
    //   P~_k(x) = 2^{a+1/2} / sqrt(h_k) * P_k^{(a,a)}(2x - 1).
    double eval_normalized(int k, double x) const {
        return norm_scale_[k] * eval_classical(k, 2.0 * x - 1.0);
    }

    // All normalized values P~_0(x) .. P~_N(x) in one recursion pass.
    void eval_all(double x, std::span<double> out) const {
        const int n = max_degree_;
        if (out.size() != static_cast<std::size_t>(n + 1))
            throw std::invalid_argument("eval_all: output span size mismatch");
        const double t = 2.0 * x - 1.0;
        double prev = 1.0;
        out[0] = norm_scale_[0];
        if (n == 0) return;
        double cur = a_[0] * t;
        out[1] = norm_scale_[1] * cur;
        for (int k = 2; k <= n; ++k) {
            const double next = a_[k - 1] * t * cur - c_[k - 1] * prev;
            prev = cur;
            cur = next;
            out[k] = norm_scale_[k] * cur;
        }
    }

private:
    void check_degree(int k) const {
        if (k < 0 || k > max_degree_)
            throw std::invalid_argument("JacobiTable: degree out of range");
    }

    double alpha_;
    int max_degree_;
    double eta_;
    std::vector<double> a_, c_, h_, norm_scale_;
};

}  // namespace jacreg
