// Acceptance harness: one line per criterion, [PASS]/[FAIL] verdicts with
// measured values, nonzero exit when any criterion fails.
//
// The checks pin the library against its reference benchmark results
// (conditioning, training error, held-out validation, classification) and
// against its own mathematical contracts (orthonormality, sup bounds, Gram
// concentration, stability and risk bounds, exact recovery, interpolation
// invariants).  Tolerances are fixed here, not configurable.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdarg>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "jacreg/jacreg.hpp"

using namespace jacreg;

namespace {

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %02d %-24s %s\n", pass ? "PASS" : "FAIL", id, name,
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

const double kAlphas[4] = {-0.5, 0.0, 0.5, 1.0};

// --- 1: orthonormality of the normalized univariate family ------------------

void criterion_orthonormality() {
    double worst = 0.0;
    for (double a : kAlphas) {
        const QuadratureRule rule = gauss_jacobi(a, 64);
        const JacobiTable table(JacobiParams(a), 20);
        std::vector<double> vals(21);
        std::vector<std::vector<double>> at_node(rule.nodes.size());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            at_node[i].resize(21);
            table.eval_all(rule.nodes[i], at_node[i]);
        }
        for (int j = 0; j <= 20; ++j)
            for (int k = j; k <= 20; ++k) {
                double ip = 0.0;
                for (std::size_t i = 0; i < rule.nodes.size(); ++i)
                    ip += rule.weights[i] * at_node[i][j] * at_node[i][k];
                const double target = j == k ? 1.0 : 0.0;
                worst = std::max(worst, std::abs(ip - target));
            }
    }
    report(1, "orthonormality", worst <= 1e-10,
           fmt("max |<P~_j,P~_k> - delta_jk| = %.3e over 4 weights, degrees "
               "0..20 (tol 1e-10)",
               worst));
}

// --- 2: uniform sup bound on dense grids -------------------------------------

void criterion_sup_bound() {
    // Verbatim check of the claimed bound eta_a * k^a * sqrt(k+a+1/2) for
    // k = 2..30 on 10^4-point grids.  The bound is mathematically false at
    // k = 2 for every a > 0 (the end-point value exceeds it); the harness
    // measures and reports rather than masking it.
    const int grid = 10000;
    std::string viols;
    int n_viol = 0;
    for (double a : kAlphas) {
        const JacobiTable table(JacobiParams(a), 30);
        std::vector<double> maxima(31, 0.0);
        std::vector<double> vals(31);
        for (int i = 0; i < grid; ++i) {
            const double x = static_cast<double>(i) / (grid - 1);
            table.eval_all(x, vals);
            for (int k = 2; k <= 30; ++k)
                maxima[k] = std::max(maxima[k], std::abs(vals[k]));
        }
        for (int k = 2; k <= 30; ++k) {
            const double bound = jacobi_sup_bound(a, k);
            if (maxima[k] > bound * (1.0 + 1e-12)) {
                ++n_viol;
                viols += fmt("%s(alpha=%g,k=%d) max %.6f > bound %.6f",
                             n_viol > 1 ? "; " : "", a, k, maxima[k], bound);
            }
        }
    }
    report(2, "sup-norm bound", n_viol == 0,
           n_viol == 0
               ? "bound dominates all 116 grid maxima"
               : fmt("%d violation(s) of 116 checks: %s", n_viol,
                     viols.c_str()));
}

// --- 3: Gram concentration around the identity -------------------------------

void criterion_gram_concentration() {
    BasisSpec spec(1, 3, 0.0);
    double worst_dev = 0.0;
    double frob_small = 0.0, frob_big = 0.0;
    for (int t = 0; t < 10; ++t) {
        const std::uint64_t ts = derive_trial_seed(33000, t);
        auto frobenius = [&](std::size_t n) {
            SamplerConfig cfg(0.0, 1, ts);
            const Matrix g = build_gram(build_design(spec, sample(cfg, n)));
            double dev = 0.0, fr = 0.0;
            for (std::size_t i = 0; i < g.rows(); ++i)
                for (std::size_t j = 0; j < g.cols(); ++j) {
                    const double e = g(i, j) - (i == j ? 1.0 : 0.0);
                    dev = std::max(dev, std::abs(e));
                    fr += e * e;
                }
            return std::pair<double, double>(dev, std::sqrt(fr));
        };
        worst_dev = std::max(worst_dev, frobenius(100000).first);
        frob_small += frobenius(10000).second / 10.0;
        frob_big += frobenius(40000).second / 10.0;
    }
    const bool dev_ok = worst_dev <= 0.05;
    const bool trend_ok = frob_big <= 0.6 * frob_small;
    report(3, "Gram concentration", dev_ok && trend_ok,
           fmt("max |G-I| = %.4f at n=1e5 over 10 seeds (tol 0.05); mean "
               "Frobenius %.4e @4e4 vs %.4e @1e4, ratio %.3f (tol 0.6)",
               worst_dev, frob_big, frob_small, frob_big / frob_small));
}

// --- 4: conditioning benchmark on tensor-grid designs ------------------------

void criterion_conditioning_table() {
    struct Row {
        double alpha;
        int deg, n1;
        double ref;
        bool hard;
    };
    const std::vector<Row> rows = {
        {-0.5, 5, 60, 7.45, true},    {-0.5, 5, 80, 5.62, true},
        {-0.5, 5, 100, 3.94, true},   {-0.5, 10, 60, 35.41, true},
        {-0.5, 10, 80, 19.97, true},  {-0.5, 10, 100, 11.41, true},
        {0.0, 5, 60, 13.51, true},    {0.0, 5, 80, 10.17, true},
        {0.0, 5, 100, 7.57, true},    {0.0, 10, 60, 6596.05, false},
        {0.0, 10, 80, 369.43, false}, {0.0, 10, 100, 158.53, false},
    };
    bool ok = true;
    std::string bad;
    std::vector<double> means(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        means[i] = condition_trials(r.alpha, r.deg, r.n1, 10, 44000).kappa2_mean;
        if (r.hard &&
            !(means[i] >= r.ref / 2.5 && means[i] <= r.ref * 2.5)) {
            ok = false;
            bad += fmt(" (alpha=%g,N=%d,n1=%d) mean %.2f outside [%.2f,%.2f];",
                       r.alpha, r.deg, r.n1, means[i], r.ref / 2.5,
                       r.ref * 2.5);
        }
    }
    // Mean condition number must fall as the per-axis sample count grows,
    // within each (alpha, degree) group that carries hard bands.
    for (std::size_t g = 0; g < 9; g += 3)
        if (!(means[g] > means[g + 1] && means[g + 1] > means[g + 2])) {
            ok = false;
            bad += fmt(" non-monotone group alpha=%g N=%d (%.2f, %.2f, %.2f);",
                       rows[g].alpha, rows[g].deg, means[g], means[g + 1],
                       means[g + 2]);
        }
    std::string detail =
        ok ? "9 banded rows within x2.5 of reference, monotone in n1"
           : std::string("violations:") + bad;
    detail += fmt("; reported only: alpha=0 N=10 means %.1f/%.1f/%.1f "
                  "(reference 6596.05/369.43/158.53, heavy-tailed)",
                  means[9], means[10], means[11]);
    report(4, "conditioning benchmark", ok, detail);
}

// --- 5: stability-probability bound versus empirical frequency ---------------

void criterion_stability_empirics() {
    const double alpha = -0.5, delta = 0.5;
    const int deg = 3, d = 2;
    BasisSpec spec(d, deg, alpha);
    bool ok = true;
    std::string detail;
    for (std::size_t ni = 0; ni < 3; ++ni) {
        const std::size_t sizes[3] = {500, 2000, 8000};
        const std::size_t n = sizes[ni];
        int hits = 0;
        for (int t = 0; t < 200; ++t) {
            SamplerConfig cfg(alpha, d, derive_trial_seed(55000 + ni, t));
            const Matrix g = build_gram(build_design(spec, sample(cfg, n)));
            if (condition_number(g).kappa2 <= 3.0) ++hits;
        }
        const double freq = hits / 200.0;
        const double bound = std::max(
            0.0, stability_probability_bound(alpha, deg, d, n, delta));
        if (freq < bound) ok = false;
        detail += fmt("%sn=%zu: freq %.4f >= bound %.4f", ni ? "; " : "", n,
                      freq, bound);
    }
    report(5, "stability empirics", ok, detail);
}

// --- 6: training-error benchmark ---------------------------------------------

void criterion_training_error() {
    const TrainingErrorRow lo = training_error_trials(10, 0.05, 100, 10, 66000);
    const TrainingErrorRow hi = training_error_trials(10, 0.15, 100, 10, 66001);
    const bool ok_lo = lo.mse_mean >= 1e-3 && lo.mse_mean <= 6e-3;
    const bool ok_hi = hi.mse_mean >= 9e-3 && hi.mse_mean <= 6e-2;
    report(6, "training error", ok_lo && ok_hi,
           fmt("sigma=0.05: MSE %.3e in [1e-3,6e-3] (ref 2.44e-3); "
               "sigma=0.15: MSE %.3e in [9e-3,6e-2] (ref 2.25e-2)",
               lo.mse_mean, hi.mse_mean));
}

// --- 7: held-out validation benchmark ----------------------------------------

void criterion_holdout() {
    const HoldoutRow r = holdout_trials(10, 0.05, 100, 10, 77000);
    const bool mse_ok = r.mse >= 4.16e-3 / 2.5 && r.mse <= 4.16e-3 * 2.5;
    const bool r2_ok = r.r2 >= 0.99;
    report(7, "held-out validation", mse_ok && r2_ok,
           fmt("MSE %.3e within x2.5 of 4.16e-3 [%.2e, %.2e]; R^2 %.4f >= "
               "0.99",
               r.mse, 4.16e-3 / 2.5, 4.16e-3 * 2.5, r.r2));
}

// --- 8: classification benchmark ----------------------------------------------

void criterion_classification() {
    const ClassificationRow r = classification_trials(10, 0.05, 100, 10, 88000);
    report(8, "classification", r.ccr >= 0.90,
           fmt("CCR %.4f >= 0.90 (reference 0.98)", r.ccr));
}

// --- 9: exact recovery of representable targets -------------------------------

void criterion_exact_recovery() {
    std::uint64_t s = 0x9e3779b97f4a7c15ULL;
    double worst = 0.0;
    int accepted = 0, skipped = 0;
    for (int t = 0; t < 50; ++t) {
        s = splitmix64(s + t);
        const int d = 1 + static_cast<int>(s % 2);
        const int deg = static_cast<int>((s >> 8) % 9);
        const double alpha = kAlphas[(s >> 16) % 4];
        BasisSpec spec(d, deg, alpha);
        std::vector<double> coeffs(spec.dim());
        std::uint64_t cs = splitmix64(s ^ 0x5bd1e995);
        for (double& c : coeffs) {
            cs = splitmix64(cs);
            c = 4.0 * (static_cast<double>(cs >> 11) * 0x1.0p-53) - 2.0;
        }
        const FittedModel target{spec, coeffs, std::nullopt, 0, 0.0};

        SamplerConfig cfg(alpha, d, splitmix64(s ^ 0x2545f491));
        SampleSet data = sample(cfg, 3 * spec.dim() + 20);
        std::vector<double> y(data.n());
        for (std::size_t i = 0; i < data.n(); ++i)
            y[i] = predict(target, data.x.row(i));
        data.y = std::move(y);

        // The recovery contract only applies when the design is well
        // conditioned, so lift the fitter's refusal cap and skip any draw
        // whose kappa2 lands above 1e3.
        FitOptions opts;
        opts.kappa_cap = 1e300;
        const FittedModel fitted = fit(spec, data, opts);
        if (fitted.spectrum->kappa2 > 1e3) {
            ++skipped;
            continue;
        }
        ++accepted;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            worst = std::max(worst, std::abs(fitted.coeffs[i] - coeffs[i]));
    }
    report(9, "exact recovery", accepted > 0 && worst <= 1e-8,
           fmt("max coefficient error %.3e over %d targets (tol 1e-8; %d "
               "skipped with kappa2 > 1e3)",
               worst, accepted, skipped));
}

// --- 10: risk bound dominates the measured risk --------------------------------

void criterion_risk_dominance() {
    const double alpha = -0.5, sigma = 0.05;
    BasisSpec spec(2, 5, alpha);
    const QuadratureRule rule = gauss_jacobi(alpha, 12);
    auto f2 = [](std::span<const double> x) { return example2_f(x); };
    const ProjectionResult proj = project(f2, spec, rule);
    const double bound =
        l2risk_bound(alpha, 5, 2, 3600, sigma, 0.5, proj.proj_error_l2, 6.0);
    const TruncationBound trunc(6.0);
    double mean_risk = 0.0;
    for (int t = 0; t < 50; ++t) {
        const std::uint64_t ts = derive_trial_seed(101000, t);
        SamplerConfig cfg(alpha, 2, ts);
        SampleSet data = sample(cfg, 3600);
        std::vector<double> clean(data.n());
        for (std::size_t i = 0; i < data.n(); ++i)
            clean[i] = example2_f(data.x(i, 0), data.x(i, 1));
        data.y = add_noise(clean, sigma, ts);
        const FittedModel model = fit(spec, data);
        const double err = weighted_norm(
            [&](std::span<const double> x) {
                return example2_f(x) - predict_truncated(model, x, trunc);
            },
            alpha, rule, 2);
        mean_risk += err * err / 50.0;
    }
    report(10, "risk bound dominance", mean_risk <= bound,
           fmt("mean weighted squared error %.4e <= bound %.4e over 50 seeds",
               mean_risk, bound));
}

// --- 11: scattered-data interpolation invariants -------------------------------

void criterion_interpolation() {
    std::uint64_t s = 0x5ca77e12d4ULL;
    auto unif = [&s]() {
        s = splitmix64(s);
        return static_cast<double>(s >> 11) * 0x1.0p-53;
    };
    int locality_checked = 0;
    int fail_node = 0, fail_unity = 0, fail_range = 0, fail_local = 0;
    for (int t = 0; t < 1000; ++t) {
        const int d = 1 + static_cast<int>(splitmix64(s + t) % 3);
        const int n = 5 + static_cast<int>(splitmix64(s + 2 * t + 1) % 36);
        const double mu = 2.0 + static_cast<double>(t % 3);
        Matrix nodes(n, d);
        std::vector<double> values(n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < d; ++j) nodes(i, j) = unif();
            values[i] = 10.0 * unif() - 3.0;
        }
        const ScatterSet scatter = ScatterSet::create(nodes, values);
        const ScatterSet constant =
            ScatterSet::create(nodes, std::vector<double>(n, 2.5));

        // Exact reproduction at a node.
        const int pick = static_cast<int>(splitmix64(s ^ t) % n);
        if (shepard_eval(scatter, mu, scatter.nodes.row(pick)) !=
            scatter.values[pick])
            ++fail_node;

        std::vector<double> q(d);
        for (int j = 0; j < d; ++j) q[j] = unif();

        // Partition of unity: constant data reproduced to 1e-12.
        if (std::abs(shepard_eval(constant, mu, q) - 2.5) > 1e-12)
            ++fail_unity;

        // Range preservation.
        const auto [lo_it, hi_it] =
            std::minmax_element(scatter.values.begin(), scatter.values.end());
        const double res = shepard_eval(scatter, mu, q);
        if (res < *lo_it - 1e-12 || res > *hi_it + 1e-12) ++fail_range;

        // Locality of the compact-support variant: perturbing a node beyond
        // the radius must leave the result bit-identical.
        double dmin = 1e300;
        int far = -1;
        std::vector<double> dist(n);
        for (int i = 0; i < n; ++i) {
            double dd = 0.0;
            for (int j = 0; j < d; ++j)
                dd += (scatter.nodes(i, j) - q[j]) * (scatter.nodes(i, j) - q[j]);
            dist[i] = std::sqrt(dd);
            dmin = std::min(dmin, dist[i]);
        }
        const double radius = 1.5 * dmin;
        if (dmin > 0.0) {
            for (int i = 0; i < n; ++i)
                if (dist[i] >= radius) {
                    far = i;
                    break;
                }
            if (far >= 0) {
                ++locality_checked;
                const double base = shepard_modified_eval(scatter, mu, radius, q);
                ScatterSet bumped = scatter;
                bumped.values[far] += 1e6;
                if (shepard_modified_eval(bumped, mu, radius, q) != base)
                    ++fail_local;
                // The constant field stays constant under the same support.
                if (std::abs(shepard_modified_eval(constant, mu, radius, q) -
                             2.5) > 1e-12)
                    ++fail_unity;
            }
        }
    }
    const bool ok = fail_node == 0 && fail_unity == 0 && fail_range == 0 &&
                    fail_local == 0 && locality_checked >= 500;
    report(11, "interpolation invariants", ok,
           fmt("1000 random configurations: node-hit fails %d, unity fails "
               "%d, range fails %d, locality fails %d (%d locality checks)",
               fail_node, fail_unity, fail_range, fail_local,
               locality_checked));
}

// --- 12: documented exclusions --------------------------------------------------

void criterion_exclusions() {
    report(12, "scope exclusions", true,
           "out of scope by design: wall-clock timing comparisons, "
           "third-party baseline learners (kernel, SVM, random forest, "
           "neural net, LDA, GAM, GLM), the proprietary MEMS measurement "
           "dataset, and quantitative smoothness-rate constants (rates are "
           "checked qualitatively: negative slope, 1/n variance trend)");
}

}  // namespace

int main() {
    std::printf("acceptance checks (fixed seeds, pinned tolerances)\n");
    criterion_orthonormality();
    criterion_sup_bound();
    criterion_gram_concentration();
    criterion_conditioning_table();
    criterion_stability_empirics();
    criterion_training_error();
    criterion_holdout();
    criterion_classification();
    criterion_exact_recovery();
    criterion_risk_dominance();
    criterion_interpolation();
    criterion_exclusions();
    std::printf("%d of 12 criteria passed\n", 12 - g_failures);
    return g_failures == 0 ? 0 : 1;
}
