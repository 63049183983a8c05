// Command line front end: simulate designs, fit and apply models, inspect
// Gram conditioning, project analytic targets, resample scattered data,
// and run the reproducible benchmark suites.
//
// Exit codes: 0 success, 1 usage or input errors, 2 numerical failures
// (underdetermined or ill-conditioned systems, singular evaluations).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jacreg/jacreg.hpp"

namespace {

constexpr const char* kVersion = "1.0.0";

std::string g17(double v) { return jacreg::detail::format_g17(v); }

// Synthetic targets the CLI can evaluate by name.
double builtin_target(const std::string& name, std::span<const double> x) {
    if (name == "builtin:example2") return jacreg::example2_f(x);
    if (name == "builtin:zero") return 0.0;
    throw std::invalid_argument("unknown target '" + name +
                                "' (try builtin:example2 or builtin:zero)");
}

int builtin_target_dim(const std::string& name) {
    if (name == "builtin:example2") return 2;
    if (name == "builtin:zero") return -1;  // any
    throw std::invalid_argument("unknown target '" + name + "'");
}

int cmd_simulate(std::size_t n, int d, double alpha, double sigma,
                 std::uint64_t seed, const std::string& target,
                 const std::string& output) {
    jacreg::SamplerConfig cfg(alpha, d, seed);
    jacreg::SampleSet data = jacreg::sample(cfg, n);
    if (target != "none") {
        const int td = builtin_target_dim(target);
        if (td > 0 && td != d)
            throw std::invalid_argument("target '" + target + "' needs d = " +
                                        std::to_string(td));
        std::vector<double> clean(n);
        for (std::size_t i = 0; i < n; ++i)
            clean[i] = builtin_target(target, data.x.row(i));
        data.y = jacreg::add_noise(clean, sigma, seed);
    }
    jacreg::write_sample_csv(data, output);
    std::cout << "wrote " << n << " points (d=" << d << ", alpha=" << alpha
              << ", seed=" << seed << ") to " << output << "\n";
    return 0;
}

int cmd_fit(const std::string& input, int degree, double alpha,
            double kappa_cap, const std::string& output) {
    const jacreg::SampleSet data = jacreg::read_sample_csv(input);
    if (!data.y)
        throw std::invalid_argument(input + ": fit needs a y column");
    jacreg::BasisSpec spec(data.d(), degree, alpha);
    jacreg::FitOptions opts;
    opts.kappa_cap = kappa_cap;
    const jacreg::FittedModel model = jacreg::fit(spec, data, opts);
    jacreg::save_model(model, output);
    std::cout << "fit: n=" << data.n() << " dim=" << spec.dim()
              << " kappa2=" << g17(model.spectrum->kappa2)
              << " train_mse=" << g17(jacreg::residual_mse(model, data))
              << "\nwrote " << output << "\n";
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input,
                const std::string& output, double truncate) {
    const jacreg::FittedModel model = jacreg::load_model(model_path);
    const jacreg::SampleSet points = jacreg::read_sample_csv(input);
    if (points.d() != model.spec.d())
        throw std::invalid_argument("points dimension " +
                                    std::to_string(points.d()) +
                                    " does not match model dimension " +
                                    std::to_string(model.spec.d()));
    std::ostringstream out;
    out << "yhat\n";
    for (std::size_t i = 0; i < points.n(); ++i) {
        const double v =
            truncate > 0.0
                ? jacreg::predict_truncated(model, points.x.row(i),
                                            jacreg::TruncationBound(truncate))
                : jacreg::predict(model, points.x.row(i));
        out << g17(v) << "\n";
    }
    jacreg::atomic_write_text(output, out.str());
    std::cout << "wrote " << points.n() << " predictions to " << output << "\n";
    return 0;
}

int cmd_condnum(const std::string& input, int degree, double alpha,
                double delta) {
    const jacreg::SampleSet data = jacreg::read_sample_csv(input);
    jacreg::BasisSpec spec(data.d(), degree, alpha);
    const jacreg::DesignMatrix f = jacreg::build_design(spec, data);
    const jacreg::Matrix g = jacreg::build_gram(f);
    const jacreg::SpectrumSummary s = jacreg::condition_number(g);
    std::cout << "n=" << data.n() << "\n"
              << "dim=" << spec.dim() << "\n"
              << "lambda_min=" << g17(s.lambda_min) << "\n"
              << "lambda_max=" << g17(s.lambda_max) << "\n"
              << "kappa2=" << g17(s.kappa2) << "\n"
              << "is_pd=" << (s.is_pd ? "true" : "false") << "\n"
              << "stability_threshold=" << jacreg::stability_threshold(
                     alpha, degree, data.d(), delta)
              << "\n"
              << "stability_probability_bound="
              << g17(std::max(0.0, jacreg::stability_probability_bound(
                                       alpha, degree, data.d(), data.n(),
                                       delta)))
              << "\n";
    return 0;
}

int cmd_project(const std::string& target, int degree, int d, double alpha,
                int q, const std::string& output) {
    const int td = builtin_target_dim(target);
    if (td > 0 && td != d)
        throw std::invalid_argument("target '" + target + "' needs d = " +
                                    std::to_string(td));
    jacreg::BasisSpec spec(d, degree, alpha);
    if (q == 0) q = 2 * degree + 2;
    const jacreg::QuadratureRule rule = jacreg::gauss_jacobi(alpha, q);
    const jacreg::ProjectionResult p = jacreg::project(
        [&](std::span<const double> x) { return builtin_target(target, x); },
        spec, rule);

    nlohmann::json summary;
    summary["target"] = target;
    summary["alpha"] = alpha;
    summary["degree"] = degree;
    summary["d"] = d;
    summary["q"] = q;
    summary["l2_norm"] = p.l2_norm_f;
    summary["projection_norm"] = p.projection_norm();
    summary["proj_error_l2"] = p.proj_error_l2;
    if (std::isfinite(p.proj_error_sup))
        summary["proj_error_sup"] = p.proj_error_sup;
    std::cout << summary.dump(2) << "\n";
    if (!output.empty()) {
        // The coefficient file uses the model format, so `predict` can
        // evaluate the projection directly.
        jacreg::FittedModel model{spec, p.coeffs, std::nullopt, 0, 0.0};
        jacreg::save_model(model, output);
        std::cout << "wrote " << output << "\n";
    }
    return 0;
}

int cmd_resample(const std::string& input, double alpha, std::size_t n_out,
                 double mu, double radius, std::uint64_t seed,
                 const std::string& output) {
    const jacreg::SampleSet raw = jacreg::read_sample_csv(input);
    if (!raw.y)
        throw std::invalid_argument(input + ": resample needs a y column");

    bool inside = true;
    for (std::size_t i = 0; i < raw.n() && inside; ++i)
        for (int j = 0; j < raw.d(); ++j)
            if (!(raw.x(i, j) >= 0.0 && raw.x(i, j) <= 1.0)) {
                inside = false;
                break;
            }

    jacreg::ScatterSet scatter;
    if (inside) {
        scatter = jacreg::ScatterSet::create(raw.x, *raw.y);
    } else {
        auto [rescaled, transform] = jacreg::affine_to_unit_cube(raw.x, *raw.y);
        scatter = std::move(rescaled);
        std::cout << "rescaled input to the unit cube; per-axis bounds:\n";
        for (int j = 0; j < raw.d(); ++j)
            std::cout << "  axis " << (j + 1) << ": [" << g17(transform.lo[j])
                      << ", " << g17(transform.hi[j]) << "]\n";
    }
    if (scatter.merged_duplicates > 0)
        std::cout << "merged " << scatter.merged_duplicates
                  << " duplicate nodes\n";

    jacreg::SamplerConfig cfg(alpha, scatter.d(), seed);
    jacreg::ShepardConfig shepard;
    shepard.mu = mu;
    shepard.radius = radius;
    std::size_t fallbacks = 0;
    const jacreg::SampleSet out =
        jacreg::resample_to_beta(scatter, cfg, n_out, shepard, &fallbacks);
    jacreg::write_sample_csv(out, output);
    std::cout << "wrote " << n_out << " resampled points to " << output << "\n";
    if (fallbacks > 0)
        std::cout << fallbacks
                  << " queries had no node within the support radius and fell "
                     "back to the global interpolant\n";
    return 0;
}

int cmd_bench(const std::string& suite, int trials, std::uint64_t seed,
              const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["suite"] = suite;
    manifest["trials"] = trials;
    manifest["seed"] = seed;
    std::vector<std::string> files;

    const std::vector<int> n1s = {60, 80, 100};
    const std::vector<int> degrees = {5, 10};
    const std::vector<double> sigmas = {0.05, 0.15};

    if (suite == "conditioning" || suite == "all") {
        std::vector<std::vector<std::string>> rows;
        for (double alpha : {-0.5, 0.0})
            for (int deg : degrees)
                for (int n1 : n1s) {
                    const jacreg::ConditionRow r =
                        jacreg::condition_trials(alpha, deg, n1, trials, seed);
                    rows.push_back({g17(r.alpha), std::to_string(r.n_degree),
                                    std::to_string(r.n1), g17(r.kappa2_mean),
                                    g17(r.kappa2_std)});
                }
        const std::string path = out_dir + "/conditioning.csv";
        jacreg::write_table_csv({"alpha", "N", "n1", "kappa2_mean", "kappa2_std"},
                                rows, path);
        files.push_back(path);
        std::cout << "wrote " << path << "\n";
    }
    if (suite == "training" || suite == "all") {
        std::vector<std::vector<std::string>> rows;
        for (int deg : degrees)
            for (double sigma : sigmas)
                for (int n1 : n1s) {
                    const jacreg::TrainingErrorRow r =
                        jacreg::training_error_trials(deg, sigma, n1, trials,
                                                      seed);
                    rows.push_back({std::to_string(r.n_degree), g17(r.sigma),
                                    std::to_string(r.n1), g17(r.mse_mean),
                                    g17(r.mse_clean_mean), g17(r.kappa2_mean)});
                }
        const std::string path = out_dir + "/training_error.csv";
        jacreg::write_table_csv(
            {"N", "sigma", "n1", "mse", "mse_clean", "kappa2"}, rows, path);
        files.push_back(path);
        std::cout << "wrote " << path << "\n";
    }
    if (suite == "validation" || suite == "all") {
        std::vector<std::vector<std::string>> rows;
        for (int deg : degrees)
            for (double sigma : sigmas)
                for (int n1 : n1s) {
                    const jacreg::HoldoutRow r =
                        jacreg::holdout_trials(deg, sigma, n1, trials, seed);
                    rows.push_back({std::to_string(r.n_degree), g17(r.sigma),
                                    std::to_string(r.n1),
                                    g17(r.train_fraction), g17(r.mse),
                                    g17(r.mae), g17(r.r2)});
                }
        const std::string path = out_dir + "/validation.csv";
        jacreg::write_table_csv(
            {"N", "sigma", "n1", "train_fraction", "mse", "mae", "r2"}, rows,
            path);
        files.push_back(path);
        std::cout << "wrote " << path << "\n";
    }
    if (suite == "classification" || suite == "all") {
        std::vector<std::vector<std::string>> rows;
        for (int deg : degrees)
            for (double sigma : sigmas)
                for (int n1 : n1s) {
                    const jacreg::ClassificationRow r =
                        jacreg::classification_trials(deg, sigma, n1, trials,
                                                      seed);
                    rows.push_back(
                        {std::to_string(r.n_degree), g17(r.sigma),
                         std::to_string(r.n1), g17(r.ccr),
                         g17(r.class0.precision), g17(r.class0.recall),
                         g17(r.class0.f1), g17(r.class1.precision),
                         g17(r.class1.recall), g17(r.class1.f1)});
                }
        const std::string path = out_dir + "/classification.csv";
        jacreg::write_table_csv({"N", "sigma", "n1", "ccr", "precision0",
                                 "recall0", "f1_0", "precision1", "recall1",
                                 "f1_1"},
                                rows, path);
        files.push_back(path);
        std::cout << "wrote " << path << "\n";
    }
    if (files.empty())
        throw std::invalid_argument(
            "unknown suite '" + suite +
            "' (conditioning, training, validation, classification, all)");

    manifest["files"] = files;
    manifest["wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    jacreg::atomic_write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");
    std::cout << "wrote " << out_dir << "/manifest.json\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Least squares regression on tensor Jacobi bases"};
    app.set_version_flag("--version", std::string("jacreg ") + kVersion);
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "worker thread cap (default: all)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate a synthetic sample");
    std::size_t sim_n = 1000;
    int sim_d = 2;
    double sim_alpha = -0.5, sim_sigma = 0.05;
    std::uint64_t sim_seed = 0;
    std::string sim_target = "builtin:example2", sim_output = "sample.csv";
    sim->add_option("--n", sim_n, "number of points")->check(CLI::PositiveNumber);
    sim->add_option("--d", sim_d, "dimension")->check(CLI::PositiveNumber);
    sim->add_option("--alpha", sim_alpha, "weight exponent (> -1)");
    sim->add_option("--sigma", sim_sigma, "noise standard deviation");
    sim->add_option("--seed", sim_seed, "random seed");
    sim->add_option("--target", sim_target,
                    "builtin:example2, builtin:zero, or none");
    sim->add_option("--output", sim_output, "output CSV path");

    // fit
    auto* fit = app.add_subcommand("fit", "fit a model to a CSV sample");
    std::string fit_input, fit_output = "model.txt";
    int fit_degree = 5;
    double fit_alpha = -0.5, fit_kappa_cap = 1e6;
    fit->add_option("--input", fit_input, "training CSV (x1..xd,y)")
        ->required();
    fit->add_option("--degree", fit_degree, "per-axis degree N")
        ->check(CLI::NonNegativeNumber);
    fit->add_option("--alpha", fit_alpha, "weight exponent (> -1)");
    fit->add_option("--kappa-cap", fit_kappa_cap,
                    "condition number cap for refusing the fit");
    fit->add_option("--output", fit_output, "model output path");

    // predict
    auto* pred = app.add_subcommand("predict", "apply a saved model");
    std::string pred_model, pred_input, pred_output = "yhat.csv";
    double pred_truncate = 0.0;
    pred->add_option("--model", pred_model, "model file")->required();
    pred->add_option("--input", pred_input, "points CSV (x1..xd)")->required();
    pred->add_option("--output", pred_output, "predictions CSV path");
    pred->add_option("--truncate", pred_truncate,
                     "clip predictions to this bound (> 0)");

    // condnum
    auto* cond = app.add_subcommand("condnum",
                                    "Gram spectrum and stability estimates");
    std::string cond_input;
    int cond_degree = 5;
    double cond_alpha = -0.5, cond_delta = 0.5;
    cond->add_option("--input", cond_input, "design CSV (x1..xd[,y])")
        ->required();
    cond->add_option("--degree", cond_degree, "per-axis degree N")
        ->check(CLI::NonNegativeNumber);
    cond->add_option("--alpha", cond_alpha, "weight exponent (> -1)");
    cond->add_option("--delta", cond_delta, "stability margin in (0,1)");

    // project
    auto* proj = app.add_subcommand(
        "project", "quadrature projection of a builtin target");
    std::string proj_target = "builtin:example2", proj_output;
    int proj_degree = 5, proj_d = 2, proj_q = 0;
    double proj_alpha = -0.5;
    proj->add_option("--target", proj_target, "builtin target name");
    proj->add_option("--degree", proj_degree, "per-axis degree N")
        ->check(CLI::NonNegativeNumber);
    proj->add_option("--d", proj_d, "dimension")->check(CLI::PositiveNumber);
    proj->add_option("--alpha", proj_alpha, "weight exponent (> -1)");
    proj->add_option("--q", proj_q, "quadrature nodes (default 2N+2)");
    proj->add_option("--output", proj_output, "coefficient CSV path");

    // resample
    auto* res = app.add_subcommand(
        "resample", "interpolate scattered data onto a Beta design");
    std::string res_input, res_output = "resampled.csv";
    double res_alpha = -0.5, res_mu = 3.0, res_radius = 0.0;
    std::size_t res_n = 1000;
    std::uint64_t res_seed = 0;
    res->add_option("--input", res_input, "scattered CSV (x1..xd,y)")
        ->required();
    res->add_option("--alpha", res_alpha, "weight exponent (> -1)");
    res->add_option("--n", res_n, "number of output points")
        ->check(CLI::PositiveNumber);
    res->add_option("--mu", res_mu, "inverse-distance exponent");
    res->add_option("--radius", res_radius,
                    "support radius (default: auto from node spacing)");
    res->add_option("--seed", res_seed, "random seed");
    res->add_option("--output", res_output, "output CSV path");

    // bench
    auto* bench = app.add_subcommand("bench", "run a benchmark suite");
    std::string bench_suite = "all", bench_dir = "bench_out";
    int bench_trials = 10;
    std::uint64_t bench_seed = 0;
    bench->add_option("--suite", bench_suite,
                      "conditioning, training, validation, classification, all");
    bench->add_option("--trials", bench_trials, "trials per configuration")
        ->check(CLI::PositiveNumber);
    bench->add_option("--seed", bench_seed, "master seed");
    bench->add_option("--output-dir", bench_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Flag/usage problems are validation errors: exit 1, not CLI11's
        // internal code family (help and version still exit 0).
        return app.exit(e) == 0 ? 0 : 1;
    }

    if (threads > 0) jacreg::set_thread_count(threads);

    try {
        if (sim->parsed())
            return cmd_simulate(sim_n, sim_d, sim_alpha, sim_sigma, sim_seed,
                                sim_target, sim_output);
        if (fit->parsed())
            return cmd_fit(fit_input, fit_degree, fit_alpha, fit_kappa_cap,
                           fit_output);
        if (pred->parsed())
            return cmd_predict(pred_model, pred_input, pred_output,
                               pred_truncate);
        if (cond->parsed())
            return cmd_condnum(cond_input, cond_degree, cond_alpha, cond_delta);
        if (proj->parsed())
            return cmd_project(proj_target, proj_degree, proj_d, proj_alpha,
                               proj_q, proj_output);
        if (res->parsed())
            return cmd_resample(res_input, res_alpha, res_n, res_mu, res_radius,
                                res_seed, res_output);
        if (bench->parsed())
            return cmd_bench(bench_suite, bench_trials, bench_seed, bench_dir);
    } catch (const jacreg::Underdetermined& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jacreg::IllConditioned& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jacreg::NotPositiveDefinite& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jacreg::NoNodeInRange& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jacreg::SingularEvaluation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
