#pragma once

// Shared error types, seed mixing, and small numeric helpers used
// across the library.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace jacreg {

// Thrown when a Cholesky factorization meets a non-positive pivot.
class NotPositiveDefinite : public std::runtime_error {
public:
    explicit NotPositiveDefinite(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown by fit() when the Gram condition number exceeds the cap.
// Carries the observed condition number and a sample-size suggestion.
class IllConditioned : public std::runtime_error {
public:
    IllConditioned(const std::string& what, double kappa2, long long n_suggested)
        : std::runtime_error(what), kappa2(kappa2), n_suggested(n_suggested) {}
    double kappa2;
    long long n_suggested;
};

// Thrown by fit() when n < basis dimension (normal equations singular).
class Underdetermined : public std::runtime_error {
public:
    Underdetermined(const std::string& what, std::size_t n_required)
        : std::runtime_error(what), n_required(n_required) {}
    std::size_t n_required;
};

// Thrown by the compact-support interpolant when no node lies within
// the support radius of the query point.
class NoNodeInRange : public std::runtime_error {
public:
    explicit NoNodeInRange(const std::string& what)
        : std::runtime_error(what) {}
};

// Thrown when a density with a boundary singularity is evaluated on
// the boundary.
class SingularEvaluation : public std::runtime_error {
public:
    explicit SingularEvaluation(const std::string& what)
        : std::runtime_error(what) {}
};

// --- seed mixing ---------------------------------------------------------
//
// All randomness in the library flows through std::mt19937_64 engines
// seeded via the splitmix64 finalizer.  Distinct logical streams (design
// points vs. noise) are derived from one user seed with fixed 64-bit tags,
// and per-trial seeds in repeated experiments are derived as
// splitmix64(seed ^ trial_index).  This keeps every result reproducible
// from a single seed across platforms.

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t kStreamDesign = 0x1f2e3d4c5b6a7988ULL;
inline constexpr std::uint64_t kStreamNoise  = 0x8899aabbccddeeffULL;
inline constexpr std::uint64_t kStreamProbe  = 0x0123456789abcdefULL;

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t tag) {
    return splitmix64(seed ^ tag);
}

inline std::uint64_t derive_trial_seed(std::uint64_t seed, std::uint64_t trial) {
    return splitmix64(seed ^ trial);
}

// --- numeric helpers -----------------------------------------------------

inline double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// Euler beta function B(a,b).
inline double beta_function(double a, double b) {
    return std::exp(log_beta(a, b));
}

}  // namespace jacreg
