#pragma once

// Random design generation.  Coordinates are i.i.d. symmetric
// Beta(alpha+1, alpha+1) on [0,1], realized as G1 / (G1 + G2) with two
// Gamma(alpha+1) draws.  Gamma and normal variates are generated by
// explicit algorithms (Marsaglia-Tsang squeeze, Marsaglia polar) on top of
// std::mt19937_64 rather than the std distributions, whose output is
// implementation-defined; this keeps every seed reproducible across
// toolchains.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "jacreg/common.hpp"
#include "jacreg/matrix.hpp"

namespace jacreg {

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : eng_(splitmix64(seed)) {}

    // Uniform on the open interval (0,1).
    double uniform01() {
        return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Standard normal via the Marsaglia polar method (pairs cached).
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double r = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * r;
        has_spare_ = true;
        return u * r;
    }

    // Gamma(shape, 1) via Marsaglia-Tsang; shapes below 1 are boosted
    // through Gamma(shape+1) * U^{1/shape}.
    double gamma(double shape) {
        if (!(shape > 0.0))
            throw std::invalid_argument("gamma: shape must be positive");
        if (shape < 1.0)
            return gamma(shape + 1.0) * std::pow(uniform01(), 1.0 / shape);
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform01();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
                return d * v;
        }
    }

    // Symmetric Beta(a, a) on (0,1); draws landing on the closed boundary
    // by rounding are resampled.
    double beta_symmetric(double a) {
        for (;;) {
            const double g1 = gamma(a);
            const double g2 = gamma(a);
            const double b = g1 / (g1 + g2);
            if (b > 0.0 && b < 1.0) return b;
        }
    }

private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

struct SamplerConfig {
    double alpha = -0.5;
    int d = 1;
    std::uint64_t seed = 0;

    SamplerConfig() = default;
    SamplerConfig(double alpha, int d, std::uint64_t seed)
        : alpha(alpha), d(d), seed(seed) {
        if (!(alpha > -1.0))
            throw std::invalid_argument("SamplerConfig: alpha must exceed -1");
        if (d < 1) throw std::invalid_argument("SamplerConfig: d must be >= 1");
    }
};

// A design of n points in [0,1]^d, optionally with responses.
struct SampleSet {
    Matrix x;  // n rows, d columns
    std::optional<std::vector<double>> y;

    std::size_t n() const { return x.rows(); }
    int d() const { return static_cast<int>(x.cols()); }
};

// n i.i.d. points with Beta(alpha+1, alpha+1) coordinates.  The design
// stream is derived from config.seed with a fixed tag, so noise added
// later from the same seed is independent of the points.
inline SampleSet sample(const SamplerConfig& config, std::size_t n) {
    if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
    RngStream rng(derive_stream(config.seed, kStreamDesign));
    const double a = config.alpha + 1.0;
    SampleSet s;
    s.x = Matrix(n, config.d);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < config.d; ++j) s.x(i, j) = rng.beta_symmetric(a);
    return s;
}

// Joint density of the design at x: prod_j x_j^alpha (1-x_j)^alpha / B^d.
// Boundary points are singular when alpha < 0 and zeros when alpha > 0;
// evaluation exactly on the boundary is refused for alpha != 0.
inline double beta_design_density(double alpha, int d,
                                  std::span<const double> x) {
    if (static_cast<int>(x.size()) != d)
        throw std::invalid_argument("beta_design_density: dimension mismatch");
    const double b = beta_function(alpha + 1.0, alpha + 1.0);
    double p = 1.0;
    for (double xi : x) {
        if (!(xi >= 0.0 && xi <= 1.0))
            throw std::domain_error("beta_design_density: point outside cube");
        if ((xi == 0.0 || xi == 1.0) && alpha != 0.0)
            throw SingularEvaluation(
                "beta_design_density: boundary point with alpha != 0");
        p *= std::pow(xi, alpha) * std::pow(1.0 - xi, alpha) / b;
    }
    return p;
}

// y_i + sigma * eps_i with i.i.d. standard normal eps from the noise
// stream of `seed`.
inline std::vector<double> add_noise(std::span<const double> y, double sigma,
                                     std::uint64_t seed) {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("add_noise: sigma must be >= 0");
    RngStream rng(derive_stream(seed, kStreamNoise));
    std::vector<double> out(y.begin(), y.end());
    for (double& v : out) v += sigma * rng.normal();
    return out;
}

}  // namespace jacreg
