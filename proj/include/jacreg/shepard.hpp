#pragma once

// Inverse-distance (Shepard) interpolation of scattered data, in the plain
// d^{-mu} form and the compact-support form with weights ((1/d - 1/R)_+)^mu.
// Used to turn an arbitrary scattered sample into responses on a fresh
// Beta-distributed design so the tensor Jacobi estimator applies.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "jacreg/common.hpp"
#include "jacreg/matrix.hpp"
#include "jacreg/sampling.hpp"

namespace jacreg {

// Scattered nodes inside [0,1]^d with one value per node.  Exact duplicate
// nodes are merged (values averaged) at construction; the merge count is
// kept for reporting.
struct ScatterSet {
    Matrix nodes;  // m rows, d columns, lexicographically sorted
    std::vector<double> values;
    std::size_t merged_duplicates = 0;
    double diameter = 1.0;  // bounding-box diagonal, floor 1 for guards

    std::size_t size() const { return nodes.rows(); }
    int d() const { return static_cast<int>(nodes.cols()); }

    static ScatterSet create(const Matrix& raw_nodes,
                             std::span<const double> raw_values) {
        const std::size_t n = raw_nodes.rows();
        const std::size_t d = raw_nodes.cols();
        if (n == 0) throw std::invalid_argument("ScatterSet: empty node set");
        if (raw_values.size() != n)
            throw std::invalid_argument("ScatterSet: node/value count mismatch");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j)
                if (!(raw_nodes(i, j) >= 0.0 && raw_nodes(i, j) <= 1.0))
                    throw std::domain_error("ScatterSet: node outside [0,1]^d");

        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        auto less = [&](std::size_t a, std::size_t b) {
            for (std::size_t j = 0; j < d; ++j) {
                if (raw_nodes(a, j) != raw_nodes(b, j))
                    return raw_nodes(a, j) < raw_nodes(b, j);
            }
            return a < b;
        };
        std::stable_sort(order.begin(), order.end(), less);
        auto equal = [&](std::size_t a, std::size_t b) {
            for (std::size_t j = 0; j < d; ++j)
                if (raw_nodes(a, j) != raw_nodes(b, j)) return false;
            return true;
        };

        ScatterSet s;
        std::vector<std::vector<double>> rows;
        std::vector<double> vals;
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i + 1;
            double v = raw_values[order[i]];
            while (j < n && equal(order[i], order[j])) {
                v += raw_values[order[j]];
                ++j;
            }
            std::vector<double> row(d);
            for (std::size_t k = 0; k < d; ++k) row[k] = raw_nodes(order[i], k);
            rows.push_back(std::move(row));
            vals.push_back(v / static_cast<double>(j - i));
            s.merged_duplicates += (j - i) - 1;
            i = j;
        }

        s.nodes = Matrix(rows.size(), d);
        for (std::size_t r = 0; r < rows.size(); ++r)
            for (std::size_t k = 0; k < d; ++k) s.nodes(r, k) = rows[r][k];
        s.values = std::move(vals);

        double diag2 = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            double lo = s.nodes(0, j), hi = s.nodes(0, j);
            for (std::size_t r = 1; r < s.size(); ++r) {
                lo = std::min(lo, s.nodes(r, j));
                hi = std::max(hi, s.nodes(r, j));
            }
            diag2 += (hi - lo) * (hi - lo);
        }
        s.diameter = diag2 > 0.0 ? std::sqrt(diag2) : 1.0;
        return s;
    }
};

struct ShepardConfig {
    double mu = 3.0;     // inverse-distance exponent
    double radius = 0.0; // compact support radius; 0 selects the default
};

namespace detail {
inline double distance(const ScatterSet& s, std::size_t i,
                       std::span<const double> x) {
    double d2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double dx = s.nodes(i, j) - x[j];
        d2 += dx * dx;
    }
    return std::sqrt(d2);
}
}  // namespace detail

// Plain Shepard interpolant with weights d^{-mu}.  Queries within
// 1e-12 * diameter of a node return that node's value exactly, which keeps
// the interpolant well defined and reproduces nodes bit-for-bit.
inline double shepard_eval(const ScatterSet& s, double mu,
                           std::span<const double> x) {
    if (static_cast<int>(x.size()) != s.d())
        throw std::invalid_argument("shepard_eval: dimension mismatch");
    if (!(mu > 0.0)) throw std::invalid_argument("shepard_eval: mu must be > 0");
    const double snap = 1e-12 * s.diameter;
    double wsum = 0.0, vsum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dist = detail::distance(s, i, x);
        if (dist <= snap) return s.values[i];
        const double w = std::pow(dist, -mu);
        wsum += w;
        vsum += w * s.values[i];
    }
    return vsum / wsum;
}

// Compact-support variant with weights ((1/d - 1/R)_+)^mu; nodes at
// distance >= R get weight zero.  Throws NoNodeInRange when every weight
// vanishes, so callers can fall back to the plain form.
inline double shepard_modified_eval(const ScatterSet& s, double mu, double r,
                                    std::span<const double> x) {
    if (static_cast<int>(x.size()) != s.d())
        throw std::invalid_argument("shepard_modified_eval: dimension mismatch");
    if (!(mu > 0.0) || !(r > 0.0))
        throw std::invalid_argument("shepard_modified_eval: mu, R must be > 0");
    const double snap = 1e-12 * s.diameter;
    double wsum = 0.0, vsum = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const double dist = detail::distance(s, i, x);
        if (dist <= snap) return s.values[i];
        if (dist >= r) continue;
        const double w = std::pow(1.0 / dist - 1.0 / r, mu);
        wsum += w;
        vsum += w * s.values[i];
    }
    if (wsum == 0.0)
        throw NoNodeInRange("shepard_modified_eval: no node within radius");
    return vsum / wsum;
}

// Per-axis affine map used to bring raw data into the unit cube and back.
struct AffineTransform {
    std::vector<double> lo, hi;

    std::vector<double> to_unit(std::span<const double> x) const {
        std::vector<double> u(x.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            const double span = hi[j] - lo[j];
            u[j] = span > 0.0 ? (x[j] - lo[j]) / span : 0.5;
        }
        return u;
    }
    std::vector<double> from_unit(std::span<const double> u) const {
        std::vector<double> x(u.size());
        for (std::size_t j = 0; j < u.size(); ++j)
            x[j] = lo[j] + u[j] * (hi[j] - lo[j]);
        return x;
    }
};

// Rescales raw nodes into [0,1]^d by per-axis min/max.  Each axis must
// have spread (max > min); a constant axis cannot be normalized and is
// rejected.  Returns the scatter set together with the transform.
inline std::pair<ScatterSet, AffineTransform> affine_to_unit_cube(
    const Matrix& raw_nodes, std::span<const double> raw_values) {
    const std::size_t n = raw_nodes.rows();
    const std::size_t d = raw_nodes.cols();
    if (n < 2)
        throw std::invalid_argument("affine_to_unit_cube: need at least 2 nodes");
    AffineTransform t;
    t.lo.resize(d);
    t.hi.resize(d);
    for (std::size_t j = 0; j < d; ++j) {
        double lo = raw_nodes(0, j), hi = raw_nodes(0, j);
        for (std::size_t i = 1; i < n; ++i) {
            lo = std::min(lo, raw_nodes(i, j));
            hi = std::max(hi, raw_nodes(i, j));
        }
        if (!(hi > lo))
            throw std::invalid_argument(
                "affine_to_unit_cube: coordinate " + std::to_string(j + 1) +
                " is constant; cannot rescale");
        t.lo[j] = lo;
        t.hi[j] = hi;
    }
    Matrix unit(n, d);
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = t.to_unit(raw_nodes.row(i));
        for (std::size_t j = 0; j < d; ++j) unit(i, j) = u[j];
    }
    return {ScatterSet::create(unit, raw_values), std::move(t)};
}

// Support radius heuristic: 1.5 times the average distance to the k-th
// nearest neighbour, k = max(10, 2% of the nodes), estimated over at most
// 32 probe nodes drawn with a fixed seed.
inline double default_radius(const ScatterSet& s,
                             std::uint64_t probe_seed = kStreamProbe) {
    const std::size_t n = s.size();
    if (n < 2) return s.diameter;
    std::size_t k = std::max<std::size_t>(
        10, static_cast<std::size_t>(std::ceil(0.02 * static_cast<double>(n))));
    k = std::min(k, n - 1);

    RngStream rng(probe_seed);
    const std::size_t probes = std::min<std::size_t>(32, n);
    std::vector<double> dists(n);
    double acc = 0.0;
    for (std::size_t p = 0; p < probes; ++p) {
        const std::size_t idx =
            static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n)) % n;
        for (std::size_t i = 0; i < n; ++i)
            dists[i] = detail::distance(s, i, s.nodes.row(idx));
        std::nth_element(dists.begin(), dists.begin() + k, dists.end());
        acc += dists[k];
    }
    return 1.5 * acc / static_cast<double>(probes);
}

// Draws a Beta(alpha+1, alpha+1)^d design of n_out points and evaluates the
// compact-support interpolant at each; queries with no node in range fall
// back to the plain interpolant (count reported via fallback_count).
inline SampleSet resample_to_beta(const ScatterSet& s,
                                  const SamplerConfig& config,
                                  std::size_t n_out,
                                  const ShepardConfig& shepard = {},
                                  std::size_t* fallback_count = nullptr) {
    if (config.d != s.d())
        throw std::invalid_argument("resample_to_beta: dimension mismatch");
    const double r = shepard.radius > 0.0 ? shepard.radius : default_radius(s);
    SampleSet out = sample(config, n_out);
    out.y = std::vector<double>(n_out);
    std::size_t fallbacks = 0;
    for (std::size_t i = 0; i < n_out; ++i) {
        const auto x = out.x.row(i);
        try {
            (*out.y)[i] = shepard_modified_eval(s, shepard.mu, r, x);
        } catch (const NoNodeInRange&) {
            (*out.y)[i] = shepard_eval(s, shepard.mu, x);
            ++fallbacks;
        }
    }
    if (fallback_count) *fallback_count = fallbacks;
    return out;
}

}  // namespace jacreg
