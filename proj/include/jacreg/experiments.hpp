#pragma once

// Repeatable benchmark experiments: Gram conditioning sweeps, training MSE
// on a synthetic bivariate target, held-out validation, classification via
// thresholded regression, empirical convergence rates, and the theoretical
// L2-risk bound for the truncated estimator.
//
// Every experiment derives one sub-seed per trial from the master seed, so
// reports are reproducible and trials are independent.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <vector>

#include "jacreg/common.hpp"
#include "jacreg/estimator.hpp"
#include "jacreg/gram.hpp"
#include "jacreg/quadrature.hpp"
#include "jacreg/sampling.hpp"
#include "jacreg/tensor_basis.hpp"

namespace jacreg {

// Synthetic bivariate benchmark target on [0,1]^2: a quintic polynomial
// part plus sin/cos terms, so no finite tensor degree fits it exactly.
inline double example2_f(double u, double v) {
    using std::numbers::pi;
    return 1.0 + 2.0 * u - 4.0 * v + 3.0 * v * v - 2.0 * u * v +
           3.0 * u * v * v - v * v * v + std::pow(u, 4) + 2.0 * std::pow(u, 5) +
           std::sin(2.0 * pi * u) - std::cos(3.0 * pi * v);
}

inline double example2_f(std::span<const double> x) {
    if (x.size() != 2)
        throw std::invalid_argument("example2_f: expects a 2-d point");
    return example2_f(x[0], x[1]);
}

// --- metrics ---------------------------------------------------------------

struct RegressionMetrics {
    double mse = 0.0;
    double mae = 0.0;
    double r2 = 0.0;
};

inline RegressionMetrics regression_metrics(std::span<const double> truth,
                                            std::span<const double> pred) {
    if (truth.size() != pred.size() || truth.empty())
        throw std::invalid_argument("regression_metrics: size mismatch");
    const double n = static_cast<double>(truth.size());
    double se = 0.0, ae = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double r = pred[i] - truth[i];
        se += r * r;
        ae += std::abs(r);
        mean += truth[i];
    }
    mean /= n;
    double var = 0.0;
    for (double t : truth) var += (t - mean) * (t - mean);
    RegressionMetrics m;
    m.mse = se / n;
    m.mae = ae / n;
    m.r2 = var > 0.0 ? 1.0 - se / var : 0.0;
    return m;
}

// --- Gram conditioning sweep (condition numbers per configuration) ---------

struct ConditionRow {
    double alpha;
    int n_degree;
    int n1;
    double kappa2_mean;
    double kappa2_std;
};

// Mean and standard deviation of kappa2(G) over `trials` designs of
// n = n1^2 points in d = 2.  Each design is the tensor grid of two
// independent 1-d samples of n1 points, the construction the reference
// conditioning benchmark uses (its kappa2 values, which grow like the
// square of the per-axis condition number, are only reproduced by grid
// designs; a fully i.i.d. product design concentrates much faster).
inline ConditionRow condition_trials(double alpha, int n_degree, int n1,
                                     int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("condition_trials: trials >= 1");
    BasisSpec spec(2, n_degree, alpha);
    std::vector<double> kappas(trials);
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t ts = derive_trial_seed(seed, t);
        SamplerConfig axis_u(alpha, 1, splitmix64(ts ^ 1));
        SamplerConfig axis_v(alpha, 1, splitmix64(ts ^ 2));
        const SampleSet su = sample(axis_u, n1);
        const SampleSet sv = sample(axis_v, n1);
        SampleSet data;
        data.x = Matrix(static_cast<std::size_t>(n1) * n1, 2);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n1; ++j) {
                const std::size_t r = static_cast<std::size_t>(i) * n1 + j;
                data.x(r, 0) = su.x(i, 0);
                data.x(r, 1) = sv.x(j, 0);
            }
        const Matrix g = build_gram(build_design(spec, data));
        kappas[t] = condition_number(g).kappa2;
    }
    double mean = 0.0;
    for (double k : kappas) mean += k;
    mean /= trials;
    double var = 0.0;
    for (double k : kappas) var += (k - mean) * (k - mean);
    ConditionRow row{alpha, n_degree, n1, mean,
                     trials > 1 ? std::sqrt(var / (trials - 1)) : 0.0};
    return row;
}

// --- training error on the synthetic target --------------------------------

struct TrainingErrorRow {
    int n_degree;
    double sigma;
    int n1;
    double mse_mean;        // residuals against the observed noisy responses
    double mse_clean_mean;  // residuals against the clean target values
    double kappa2_mean;
    double wall_ms_mean;
};

// Fits the synthetic target from n = n1^2 noisy observations (alpha = -1/2,
// d = 2) and reports training MSE.  The headline mse_mean measures
// residuals against the observed responses, which is what the reference
// results for this benchmark track (approximately sigma^2 for a stable
// fit); the error against the clean target is reported alongside.
inline TrainingErrorRow training_error_trials(int n_degree, double sigma,
                                              int n1, int trials,
                                              std::uint64_t seed) {
    if (trials < 1)
        throw std::invalid_argument("training_error_trials: trials >= 1");
    const double alpha = -0.5;
    BasisSpec spec(2, n_degree, alpha);
    TrainingErrorRow row{n_degree, sigma, n1, 0.0, 0.0, 0.0, 0.0};
    for (int t = 0; t < trials; ++t) {
        const auto start = std::chrono::steady_clock::now();
        const std::uint64_t ts = derive_trial_seed(seed, t);
        SamplerConfig cfg(alpha, 2, ts);
        SampleSet data = sample(cfg, static_cast<std::size_t>(n1) * n1);
        std::vector<double> clean(data.n());
        for (std::size_t i = 0; i < data.n(); ++i)
            clean[i] = example2_f(data.x(i, 0), data.x(i, 1));
        data.y = add_noise(clean, sigma, ts);

        const FittedModel model = fit(spec, data);
        row.mse_mean += residual_mse(model, data);
        SampleSet clean_set = data;
        clean_set.y = clean;
        row.mse_clean_mean += residual_mse(model, clean_set);
        row.kappa2_mean += model.spectrum->kappa2;
        row.wall_ms_mean += std::chrono::duration<double, std::milli>(
                                std::chrono::steady_clock::now() - start)
                                .count();
    }
    row.mse_mean /= trials;
    row.mse_clean_mean /= trials;
    row.kappa2_mean /= trials;
    row.wall_ms_mean /= trials;
    return row;
}

// --- held-out validation ----------------------------------------------------

struct HoldoutRow {
    int n_degree;
    double sigma;
    int n1;
    double train_fraction;
    double mse;
    double mae;
    double r2;
};

// Splits n = n1^2 points into a leading training part and a held-out rest
// (points are i.i.d., so the deterministic split is unbiased).  The
// reference protocol for this benchmark trains on 80% and validates on the
// remaining 20%.
inline HoldoutRow holdout_trials(int n_degree, double sigma, int n1,
                                 int trials, std::uint64_t seed,
                                 double train_fraction = 0.8) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw std::invalid_argument("holdout_trials: fraction in (0,1)");
    if (trials < 1) throw std::invalid_argument("holdout_trials: trials >= 1");
    const double alpha = -0.5;
    BasisSpec spec(2, n_degree, alpha);
    HoldoutRow row{n_degree, sigma, n1, train_fraction, 0.0, 0.0, 0.0};
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t ts = derive_trial_seed(seed, t);
        SamplerConfig cfg(alpha, 2, ts);
        const std::size_t n = static_cast<std::size_t>(n1) * n1;
        SampleSet data = sample(cfg, n);
        std::vector<double> clean(n);
        for (std::size_t i = 0; i < n; ++i)
            clean[i] = example2_f(data.x(i, 0), data.x(i, 1));
        const std::vector<double> noisy = add_noise(clean, sigma, ts);

        const std::size_t n_train =
            static_cast<std::size_t>(std::ceil(train_fraction * n));
        SampleSet train;
        train.x = Matrix(n_train, 2);
        train.y = std::vector<double>(n_train);
        for (std::size_t i = 0; i < n_train; ++i) {
            train.x(i, 0) = data.x(i, 0);
            train.x(i, 1) = data.x(i, 1);
            (*train.y)[i] = noisy[i];
        }
        const FittedModel model = fit(spec, train);

        std::vector<double> truth, pred;
        truth.reserve(n - n_train);
        pred.reserve(n - n_train);
        for (std::size_t i = n_train; i < n; ++i) {
            truth.push_back(noisy[i]);
            pred.push_back(predict(model, data.x.row(i)));
        }
        const RegressionMetrics m = regression_metrics(truth, pred);
        row.mse += m.mse;
        row.mae += m.mae;
        row.r2 += m.r2;
    }
    row.mse /= trials;
    row.mae /= trials;
    row.r2 /= trials;
    return row;
}

// --- classification via thresholded regression ------------------------------

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct ClassificationRow {
    int n_degree;
    double sigma;
    int n1;
    double ccr;  // correct classification rate on the held-out part
    ClassMetrics class0, class1;
};

// Labels are 1 where the clean target exceeds its sample mean.  The
// regression targets are the 0/1 labels plus Gaussian noise; the fitted
// surface is thresholded at 1/2.  Trains on the leading 80%, tests on the
// remaining 20%.
inline ClassificationRow classification_trials(int n_degree, double sigma,
                                               int n1, int trials,
                                               std::uint64_t seed,
                                               double train_fraction = 0.8) {
    if (trials < 1)
        throw std::invalid_argument("classification_trials: trials >= 1");
    const double alpha = -0.5;
    BasisSpec spec(2, n_degree, alpha);
    ClassificationRow row{n_degree, sigma, n1, 0.0, {}, {}};
    double tp[2] = {0, 0}, fp[2] = {0, 0}, fn[2] = {0, 0};
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t ts = derive_trial_seed(seed, t);
        SamplerConfig cfg(alpha, 2, ts);
        const std::size_t n = static_cast<std::size_t>(n1) * n1;
        SampleSet data = sample(cfg, n);
        std::vector<double> clean(n);
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            clean[i] = example2_f(data.x(i, 0), data.x(i, 1));
            c += clean[i];
        }
        c /= static_cast<double>(n);
        std::vector<double> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = clean[i] > c ? 1.0 : 0.0;
        const std::vector<double> targets = add_noise(labels, sigma, ts);

        const std::size_t n_train =
            static_cast<std::size_t>(std::ceil(train_fraction * n));
        SampleSet train;
        train.x = Matrix(n_train, 2);
        train.y = std::vector<double>(n_train);
        for (std::size_t i = 0; i < n_train; ++i) {
            train.x(i, 0) = data.x(i, 0);
            train.x(i, 1) = data.x(i, 1);
            (*train.y)[i] = targets[i];
        }
        const FittedModel model = fit(spec, train);

        std::size_t correct = 0;
        for (std::size_t i = n_train; i < n; ++i) {
            const int truth = labels[i] > 0.5 ? 1 : 0;
            const int pred = predict(model, data.x.row(i)) > 0.5 ? 1 : 0;
            if (pred == truth) ++correct;
            if (pred == truth) tp[pred] += 1;
            if (pred != truth) {
                fp[pred] += 1;
                fn[truth] += 1;
            }
        }
        row.ccr += static_cast<double>(correct) /
                   static_cast<double>(n - n_train);
    }
    row.ccr /= trials;
    auto finish = [](double tp_, double fp_, double fn_) {
        ClassMetrics m;
        m.precision = tp_ + fp_ > 0 ? tp_ / (tp_ + fp_) : 0.0;
        m.recall = tp_ + fn_ > 0 ? tp_ / (tp_ + fn_) : 0.0;
        m.f1 = m.precision + m.recall > 0
                   ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
                   : 0.0;
        return m;
    };
    row.class0 = finish(tp[0], fp[0], fn[0]);
    row.class1 = finish(tp[1], fp[1], fn[1]);
    return row;
}

// --- empirical convergence rate ----------------------------------------------

struct RatePoint {
    int n_degree;
    std::size_t n;
    double risk;  // mean squared weighted L2 error of the truncated fit
};

struct RateFit {
    std::vector<RatePoint> points;
    double slope;  // least squares slope of log(risk) against log(n)
};

// Empirical L2-risk of the truncated estimator along a schedule of
// (N_i, n_i) pairs, with the weighted norm evaluated by quadrature.
template <class F>
RateFit rate_fit(double alpha, std::span<const int> n_degrees,
                 std::span<const std::size_t> ns, const F& f, int trials,
                 double sigma, double m_f, std::uint64_t seed) {
    if (n_degrees.size() != ns.size())
        throw std::invalid_argument("rate_fit: schedules must match");
    if (n_degrees.size() < 3)
        throw std::invalid_argument(
            "rate_fit: need at least 3 schedule points for a slope");
    RateFit out;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        BasisSpec spec(2, n_degrees[i], alpha);
        const QuadratureRule rule =
            gauss_jacobi(alpha, 2 * n_degrees[i] + 2);
        double risk = 0.0;
        for (int t = 0; t < trials; ++t) {
            const std::uint64_t ts =
                derive_trial_seed(seed, i * 1000003ULL + t);
            SamplerConfig cfg(alpha, 2, ts);
            SampleSet data = sample(cfg, ns[i]);
            std::vector<double> clean(data.n());
            for (std::size_t r = 0; r < data.n(); ++r)
                clean[r] = f(std::span<const double>(data.x.row(r)));
            data.y = add_noise(clean, sigma, ts);
            const FittedModel model = fit(spec, data);
            const TruncationBound bound(m_f);
            const double err = weighted_norm(
                [&](std::span<const double> x) {
                    return f(x) - predict_truncated(model, x, bound);
                },
                alpha, rule, 2);
            risk += err * err;
        }
        out.points.push_back({n_degrees[i], ns[i], risk / trials});
    }
    // log-log regression for the empirical rate
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(out.points.size());
    for (const RatePoint& p : out.points) {
        const double lx = std::log(static_cast<double>(p.n));
        const double ly = std::log(p.risk);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double denom = m * sxx - sx * sx;
    out.slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    return out;
}

// --- theoretical L2-risk bound ------------------------------------------------

// Expected squared weighted L2 error of the truncated estimator:
//   (N+1)^d / (n (1-delta)^2) * (sigma^2 + (eta^2 (N+1)^{2a+1})^d proj^2)
//   + proj^2
//   + 4 M_f^2 (N+1)^d beta^d exp(-n delta^2 / (2 (B_a (N+1)^{2a+2})^d)).
inline double l2risk_bound(double alpha, int n_degree, int d, std::uint64_t n,
                           double sigma, double delta, double proj_error_l2,
                           double m_f) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("l2risk_bound: delta must be in (0,1)");
    if (n == 0) throw std::invalid_argument("l2risk_bound: n must be >= 1");
    const double eta = jacobi_eta(alpha);
    const double dim = std::pow(n_degree + 1.0, static_cast<double>(d));
    const double amp = std::pow(
        eta * eta * std::pow(n_degree + 1.0, 2.0 * alpha + 1.0),
        static_cast<double>(d));
    const double proj2 = proj_error_l2 * proj_error_l2;
    const double beta_d = std::pow(beta_function(alpha + 1.0, alpha + 1.0),
                                   static_cast<double>(d));
    const double tail = 4.0 * m_f * m_f * dim * beta_d *
                        std::exp(-static_cast<double>(n) * delta * delta /
                                 (2.0 * chernoff_scale(alpha, n_degree, d)));
    return dim / (n * (1.0 - delta) * (1.0 - delta)) *
               (sigma * sigma + amp * proj2) +
           proj2 + tail;
}

}  // namespace jacreg
