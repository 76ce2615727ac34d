#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <utility>

namespace whsim {

/// SplitMix64 step; used to derive independent per-trial seeds from a master
/// seed. splitmix64(master + (stream + 1) * GOLDEN) gives stream seeds that
/// are reproducible and decorrelated, so trials can run on any number of
/// threads without changing results.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(master + (stream + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Deterministic random source: std::mt19937_64 (bit-exact per the C++
/// standard) with explicit Marsaglia-polar Gaussians, so the produced stream
/// depends only on the 64-bit seed and the call sequence, not on the
/// standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1) from the top 53 bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    /// Uniform index in [0, n); rejection sampling, no modulo bias.
    std::uint64_t uniform_index(std::uint64_t n) {
        const std::uint64_t limit = n * (UINT64_MAX / n);
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    /// Standard real Gaussian, one of a cached Marsaglia-polar pair.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        auto [g1, g2] = gaussian_pair();
        spare_ = g2;
        have_spare_ = true;
        return g1;
    }

    /// Circularly symmetric complex Gaussian with unit total variance,
    /// (g1 + i*g2)/sqrt(2). Always consumes a fresh polar pair.
    std::complex<double> complex_gaussian() {
        auto [g1, g2] = gaussian_pair();
        return {g1 * k_inv_sqrt2, g2 * k_inv_sqrt2};
    }

private:
    static constexpr double k_inv_sqrt2 = 0.70710678118654752440;

    std::pair<double, double> gaussian_pair() {
        double v1, v2, s;
        do {
            v1 = 2.0 * uniform() - 1.0;
            v2 = 2.0 * uniform() - 1.0;
            s = v1 * v1 + v2 * v2;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        return {v1 * f, v2 * f};
    }

    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace whsim
