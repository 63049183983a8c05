// End-to-end command line tests: exit-code contract (0 success, 1 usage or
// input error, 2 numerical failure), seeded byte-level determinism, the
// simulate -> fit -> predict round-trip, and benchmark CSV reproducibility.

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "jacreg/csv.hpp"
#include "jacreg/estimator.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Runs the CLI with the given arguments, capturing exit code and streams.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path();
    const fs::path out = dir / ("jacreg_cli_out_" + std::to_string(counter));
    const fs::path err = dir / ("jacreg_cli_err_" + std::to_string(counter));
    ++counter;
    const std::string cmd = std::string(JACREG_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    fs::remove(out);
    fs::remove(err);
    return r;
}

fs::path tmp(const std::string& name) {
    return fs::temp_directory_path() / ("jacreg_cli_" + name);
}

// Reads the single-column prediction file written by `predict`.
std::vector<double> read_yhat(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    REQUIRE(std::getline(in, line));
    REQUIRE(line == "yhat");
    std::vector<double> v;
    while (std::getline(in, line))
        if (!line.empty()) v.push_back(std::stod(line));
    return v;
}

}  // namespace

TEST_CASE("version and help", "[cli]") {
    const RunResult v = run_cli("--version");
    CHECK(v.exit_code == 0);
    CHECK(v.out.find("jacreg") != std::string::npos);

    const RunResult h = run_cli("--help");
    CHECK(h.exit_code == 0);
    for (const char* sub : {"simulate", "fit", "predict", "condnum", "project",
                            "resample", "bench"})
        CHECK(h.out.find(sub) != std::string::npos);

    // Per-subcommand help documents flags and defaults.
    const RunResult fh = run_cli("fit --help");
    CHECK(fh.exit_code == 0);
    CHECK(fh.out.find("--kappa-cap") != std::string::npos);
    CHECK(fh.out.find("--degree") != std::string::npos);
}

TEST_CASE("usage errors exit 1", "[cli]") {
    const RunResult unknown = run_cli("simulate --bogus-flag 3");
    CHECK(unknown.exit_code == 1);
    CHECK(unknown.err.find("--bogus-flag") != std::string::npos);

    const RunResult missing = run_cli("fit");
    CHECK(missing.exit_code == 1);
    CHECK(missing.err.find("--input") != std::string::npos);

    const RunResult nosub = run_cli("");
    CHECK(nosub.exit_code == 1);
}

TEST_CASE("simulate is byte-deterministic in the seed", "[cli]") {
    const fs::path a = tmp("sim_a.csv"), b = tmp("sim_b.csv"),
                   c = tmp("sim_c.csv"), d = tmp("sim_d.csv");
    REQUIRE(run_cli("simulate --n 200 --d 2 --seed 7 --sigma 0.1 --output " +
                    a.string())
                .exit_code == 0);
    REQUIRE(run_cli("simulate --n 200 --d 2 --seed 7 --sigma 0.1 --output " +
                    b.string())
                .exit_code == 0);
    CHECK(slurp(a) == slurp(b));

    // A different seed must change the bytes.
    REQUIRE(run_cli("simulate --n 200 --d 2 --seed 8 --sigma 0.1 --output " +
                    c.string())
                .exit_code == 0);
    CHECK(slurp(a) != slurp(c));

    // Thread cap and the JR_THREADS fallback leave the output unchanged.
    REQUIRE(run_cli("--threads 1 simulate --n 200 --d 2 --seed 7 --sigma 0.1 "
                    "--output " +
                    d.string())
                .exit_code == 0);
    CHECK(slurp(a) == slurp(d));
    const std::string env_cmd = "JR_THREADS=3 " + std::string(JACREG_CLI_PATH) +
                                " simulate --n 200 --d 2 --seed 7 --sigma 0.1 "
                                "--output " +
                                d.string() + " > /dev/null 2>&1";
    REQUIRE(std::system(env_cmd.c_str()) == 0);
    CHECK(slurp(a) == slurp(d));

    for (const fs::path& p : {a, b, c, d}) fs::remove(p);
}

TEST_CASE("simulate, fit, predict round-trip", "[cli]") {
    const fs::path sample = tmp("rt_sample.csv"), model = tmp("rt_model.txt"),
                   yhat = tmp("rt_yhat.csv");

    REQUIRE(run_cli("simulate --n 2000 --d 2 --alpha -0.5 --sigma 0 --seed 11 "
                    "--target builtin:example2 --output " +
                    sample.string())
                .exit_code == 0);

    const RunResult fit_r =
        run_cli("fit --input " + sample.string() +
                " --degree 10 --alpha -0.5 --output " + model.string());
    REQUIRE(fit_r.exit_code == 0);
    CHECK(fit_r.out.find("kappa2=") != std::string::npos);

    const RunResult pred_r =
        run_cli("predict --model " + model.string() + " --input " +
                sample.string() + " --output " + yhat.string());
    REQUIRE(pred_r.exit_code == 0);

    // Noiseless degree-10 fit reproduces the training responses tightly.
    const jacreg::SampleSet data = jacreg::read_sample_csv(sample.string());
    const std::vector<double> pred = read_yhat(yhat);
    REQUIRE(pred.size() == data.n());
    double mse = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const double r = pred[i] - (*data.y)[i];
        mse += r * r;
    }
    mse /= static_cast<double>(data.n());
    CHECK(mse < 1e-6);

    // Truncated prediction clips to the requested bound.
    const fs::path yclip = tmp("rt_yclip.csv");
    REQUIRE(run_cli("predict --model " + model.string() + " --input " +
                    sample.string() + " --output " + yclip.string() +
                    " --truncate 1.0")
                .exit_code == 0);
    for (double v : read_yhat(yclip)) CHECK(std::abs(v) <= 1.0);

    for (const fs::path& p : {sample, model, yhat, yclip}) fs::remove(p);
}

TEST_CASE("underdetermined fit exits 2 with the sample-size requirement",
          "[cli]") {
    const fs::path sample = tmp("ud_sample.csv");
    REQUIRE(run_cli("simulate --n 50 --d 2 --sigma 0.05 --seed 3 --output " +
                    sample.string())
                .exit_code == 0);
    const RunResult r = run_cli("fit --input " + sample.string() +
                                " --degree 10 --alpha -0.5 --output " +
                                tmp("ud_model.txt").string());
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("requires n >= (N+1)^d = 121") != std::string::npos);
    CHECK(r.err.find("got n = 50") != std::string::npos);
    CHECK_FALSE(fs::exists(tmp("ud_model.txt")));
    fs::remove(sample);
}

TEST_CASE("condnum reports the spectrum and stability constants", "[cli]") {
    const fs::path sample = tmp("cn_sample.csv");
    REQUIRE(run_cli("simulate --n 300 --d 1 --alpha 0 --seed 5 --target none "
                    "--output " +
                    sample.string())
                .exit_code == 0);
    const RunResult r = run_cli("condnum --input " + sample.string() +
                                " --degree 1 --alpha 0 --delta 0.5");
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("kappa2=") != std::string::npos);
    CHECK(r.out.find("is_pd=true") != std::string::npos);
    // Frozen sample-size threshold for (alpha=0, N=1, d=1, delta=0.5).
    CHECK(r.out.find("stability_threshold=134") != std::string::npos);
    CHECK(r.out.find("stability_probability_bound=") != std::string::npos);
    fs::remove(sample);
}

TEST_CASE("project writes a model-compatible coefficient file", "[cli]") {
    const fs::path coeffs = tmp("proj_coeffs.txt");
    const RunResult r = run_cli(
        "project --target builtin:example2 --degree 5 --d 2 --alpha -0.5 "
        "--output " +
        coeffs.string());
    REQUIRE(r.exit_code == 0);
    CHECK(r.out.find("\"proj_error_l2\"") != std::string::npos);
    CHECK(r.out.find("\"projection_norm\"") != std::string::npos);

    // The coefficient file uses the model format, so `predict` accepts it.
    const jacreg::FittedModel m = jacreg::load_model(coeffs.string());
    CHECK(m.spec.alpha() == -0.5);
    CHECK(m.spec.degree() == 5);
    CHECK(m.spec.d() == 2);

    const fs::path pts = tmp("proj_pts.csv"), yh = tmp("proj_yhat.csv");
    {
        jacreg::SampleSet s;
        s.x = jacreg::Matrix(3, 2);
        const double v[3][2] = {{0.2, 0.3}, {0.5, 0.5}, {0.9, 0.1}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 2; ++j) s.x(i, j) = v[i][j];
        jacreg::write_sample_csv(s, pts.string());
    }
    REQUIRE(run_cli("predict --model " + coeffs.string() + " --input " +
                    pts.string() + " --output " + yh.string())
                .exit_code == 0);
    CHECK(read_yhat(yh).size() == 3);

    for (const fs::path& p : {coeffs, pts, yh}) fs::remove(p);
}

TEST_CASE("resample interpolates scattered data onto a fresh design",
          "[cli]") {
    const fs::path scatter = tmp("rs_scatter.csv"), out = tmp("rs_out.csv");
    {
        jacreg::SampleSet s;
        s.x = jacreg::Matrix(25, 2);
        s.y = std::vector<double>(25);
        std::uint64_t st = 99;
        for (int i = 0; i < 25; ++i) {
            for (int j = 0; j < 2; ++j) {
                st = jacreg::splitmix64(st);
                s.x(i, j) = static_cast<double>(st >> 11) * 0x1.0p-53;
            }
            (*s.y)[i] = 2.0 * s.x(i, 0) - s.x(i, 1);
        }
        jacreg::write_sample_csv(s, scatter.string());
    }
    const RunResult r =
        run_cli("resample --input " + scatter.string() +
                " --alpha -0.5 --n 50 --seed 4 --output " + out.string());
    REQUIRE(r.exit_code == 0);

    const jacreg::SampleSet res = jacreg::read_sample_csv(out.string());
    CHECK(res.n() == 50);
    CHECK(res.d() == 2);
    REQUIRE(res.y.has_value());
    for (std::size_t i = 0; i < res.n(); ++i) {
        CHECK(res.x(i, 0) >= 0.0);
        CHECK(res.x(i, 0) <= 1.0);
        CHECK(std::isfinite((*res.y)[i]));
        // Interpolated values stay inside the scattered-data value range.
        CHECK((*res.y)[i] >= -1.0 - 1e-9);
        CHECK((*res.y)[i] <= 2.0 + 1e-9);
    }
    fs::remove(scatter);
    fs::remove(out);
}

TEST_CASE("bench reruns write identical CSV tables", "[cli]") {
    const fs::path dir_a = tmp("bench_a"), dir_b = tmp("bench_b");
    fs::remove_all(dir_a);
    fs::remove_all(dir_b);

    const std::string args = "bench --suite conditioning --trials 1 --seed 3 "
                             "--output-dir ";
    REQUIRE(run_cli(args + dir_a.string()).exit_code == 0);
    REQUIRE(run_cli(args + dir_b.string()).exit_code == 0);

    REQUIRE(fs::exists(dir_a / "conditioning.csv"));
    REQUIRE(fs::exists(dir_a / "manifest.json"));
    CHECK(slurp(dir_a / "conditioning.csv") ==
          slurp(dir_b / "conditioning.csv"));

    // The table carries one row per configuration in the fixed sweep order.
    std::istringstream table(slurp(dir_a / "conditioning.csv"));
    std::string line;
    REQUIRE(std::getline(table, line));
    CHECK(line == "alpha,N,n1,kappa2_mean,kappa2_std");
    int rows = 0;
    while (std::getline(table, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 12);

    const RunResult bad = run_cli("bench --suite nonsense --output-dir " +
                                  dir_a.string());
    CHECK(bad.exit_code == 1);
    CHECK(bad.err.find("unknown suite") != std::string::npos);

    fs::remove_all(dir_a);
    fs::remove_all(dir_b);
}
