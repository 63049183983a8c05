#pragma once

// Least squares fit of tensor Jacobi coefficients from scattered noisy
// responses, plus prediction, truncated prediction, and a small text
// persistence format.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacreg/common.hpp"
#include "jacreg/gram.hpp"
#include "jacreg/matrix.hpp"
#include "jacreg/sampling.hpp"
#include "jacreg/tensor_basis.hpp"

namespace jacreg {

struct TruncationBound {
    double m_f;
    explicit TruncationBound(double m_f) : m_f(m_f) {
        if (!(m_f > 0.0))
            throw std::invalid_argument("TruncationBound: bound must be > 0");
    }
};

struct FitOptions {
    double kappa_cap = 1e6;   // refuse fits beyond this condition number
    double advice_delta = 0.5;  // delta used for the sample-size suggestion
};

struct FittedModel {
    BasisSpec spec;
    std::vector<double> coeffs;
    // Diagnostics from the fit; absent on models loaded from disk.
    std::optional<SpectrumSummary> spectrum;
    std::size_t n_used = 0;
    double y_abs_max = 0.0;  // default truncation level when none is known
};

// Solves min_C || y - sum_m C_m Phi_m ||_n via the normal equations
// G C~ = F^T y~ on the scaled design, then unscales.  Refuses
// underdetermined problems and Gram matrices beyond the condition cap,
// suggesting the stability sample size in both cases.
inline FittedModel fit(const BasisSpec& spec, const SampleSet& data,
                       const FitOptions& opts = {}) {
    if (!data.y)
        throw std::invalid_argument("fit: sample set has no responses");
    const std::size_t n = data.n();
    const std::size_t dim = spec.dim();
    if (n < dim) {
        std::ostringstream msg;
        msg << "fit: underdetermined least squares, requires n >= (N+1)^d = "
            << dim << ", got n = " << n;
        throw Underdetermined(msg.str(), dim);
    }

    const DesignMatrix f = build_design(spec, data);
    const Matrix g = build_gram(f);
    const SpectrumSummary spectrum = condition_number(g);
    if (!spectrum.is_pd || spectrum.kappa2 > opts.kappa_cap) {
        const std::uint64_t n_sugg = stability_threshold(
            spec.alpha(), spec.degree(), spec.d(), opts.advice_delta);
        std::ostringstream msg;
        msg << "fit: Gram matrix ill-conditioned (kappa2 = " << spectrum.kappa2
            << ", cap = " << opts.kappa_cap
            << "); stability at delta = " << opts.advice_delta
            << " suggests n >= " << n_sugg;
        throw IllConditioned(msg.str(), spectrum.kappa2,
                             static_cast<long long>(n_sugg));
    }

    // rhs = F^T (sqrt(gamma)/sqrt(n) y); the solve returns the scaled
    // coefficients C~ = C / sqrt(gamma * n) * n ... combined below so that
    // predict() uses plain Phi_m values.
    const std::vector<double>& y = *data.y;
    std::vector<double> rhs(dim, 0.0);
    const double yscale = std::sqrt(spec.gamma() / static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = f.entries.row(i);
        const double yi = yscale * y[i];
        for (std::size_t j = 0; j < dim; ++j) rhs[j] += row[j] * yi;
    }
    std::vector<double> coeffs = cholesky_solve(g, rhs);

    FittedModel model{spec, std::move(coeffs), spectrum, n, 0.0};
    for (double v : y) model.y_abs_max = std::max(model.y_abs_max, std::abs(v));
    return model;
}

inline double predict(const FittedModel& model, std::span<const double> x) {
    const std::vector<double> row = model.spec.eval_row(x);
    double s = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) s += model.coeffs[i] * row[i];
    return s;
}

// sign(fhat) * min(bound, |fhat|): clips predictions to a known or
// estimated essential bound on |f|.
inline double predict_truncated(const FittedModel& model,
                                std::span<const double> x,
                                const TruncationBound& bound) {
    const double v = predict(model, x);
    const double clipped = std::min(bound.m_f, std::abs(v));
    return v < 0.0 ? -clipped : clipped;
}

// Mean squared residual of the model against the responses in `data`
// (training responses or held-out references alike).
inline double residual_mse(const FittedModel& model, const SampleSet& data) {
    if (!data.y) throw std::invalid_argument("residual_mse: no responses");
    if (data.d() != model.spec.d())
        throw std::invalid_argument("residual_mse: dimension mismatch");
    const std::size_t n = data.n();
    if (n == 0) throw std::invalid_argument("residual_mse: empty sample");
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = predict(model, data.x.row(i)) - (*data.y)[i];
        s += r * r;
    }
    return s / static_cast<double>(n);
}

// --- persistence ----------------------------------------------------------
//
// Text format, version 1:
//   alpha=<repr>
//   N=<int>
//   d=<int>
//   format=1
//   m1,...,md,coefficient
//   <one row per basis function, 17 significant digits>

namespace detail {
inline std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
}  // namespace detail

inline void save_model(const FittedModel& model, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out)
            throw std::runtime_error("save_model: cannot open " + tmp);
        const int d = model.spec.d();
        const int n_deg = model.spec.degree();
        out << "alpha=" << detail::format_g17(model.spec.alpha()) << "\n";
        out << "N=" << n_deg << "\n";
        out << "d=" << d << "\n";
        out << "format=1\n";
        for (int j = 1; j <= d; ++j) out << "m" << j << ",";
        out << "coefficient\n";
        for (std::size_t g = 1; g <= model.spec.dim(); ++g) {
            const MultiIndex m = unflatten(g, n_deg, d);
            for (int j = 0; j < d; ++j) out << m[j] << ",";
            out << detail::format_g17(model.coeffs[g - 1]) << "\n";
        }
        if (!out.good())
            throw std::runtime_error("save_model: write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("save_model: rename failed for " + path);
}

inline FittedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_model: cannot open " + path);

    auto read_kv = [&](const std::string& key) {
        std::string line;
        if (!std::getline(in, line))
            throw std::runtime_error("load_model: truncated header");
        if (line.rfind(key + "=", 0) != 0)
            throw std::runtime_error("load_model: expected header line " + key +
                                     "=...");
        return line.substr(key.size() + 1);
    };

    const double alpha = std::stod(read_kv("alpha"));
    const int n_deg = std::stoi(read_kv("N"));
    const int d = std::stoi(read_kv("d"));
    const std::string version = read_kv("format");
    if (version != "1")
        throw std::runtime_error("load_model: unsupported format version " +
                                 version);

    std::string header;
    if (!std::getline(in, header))
        throw std::runtime_error("load_model: missing column header");

    BasisSpec spec(d, n_deg, alpha);
    std::vector<double> coeffs(spec.dim());
    std::vector<bool> seen(spec.dim(), false);

    std::string line;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        MultiIndex m(d);
        std::string tok;
        for (int j = 0; j < d; ++j) {
            if (!std::getline(ss, tok, ','))
                throw std::runtime_error("load_model: short row");
            m[j] = std::stoi(tok);
        }
        if (!std::getline(ss, tok, ','))
            throw std::runtime_error("load_model: row missing coefficient");
        const std::size_t idx = flat_index(m, n_deg, d);
        if (seen[idx])
            throw std::runtime_error("load_model: duplicate multi-index row");
        seen[idx] = true;
        coeffs[idx] = std::stod(tok);
        ++rows;
    }
    if (rows != spec.dim())
        throw std::runtime_error("load_model: expected " +
                                 std::to_string(spec.dim()) + " rows, got " +
                                 std::to_string(rows));

    FittedModel model{std::move(spec), std::move(coeffs), std::nullopt, 0, 0.0};
    return model;
}

}  // namespace jacreg
