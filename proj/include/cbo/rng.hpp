#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cbo {

// Deterministic random source. mt19937_64 supplies the bit stream; the value
// mappings below are our own so that sequences are identical across standard
// libraries (std::uniform_real_distribution and friends are not portable).
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

    std::uint64_t next_bits() { return engine_(); }

    // Uniform on [0, 1): top 53 bits scaled down.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Unbiased integer in [0, n). n must be >= 1.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t bound = n * (UINT64_MAX / n);
        std::uint64_t x = engine_();
        while (x >= bound) x = engine_();
        return x % n;
    }

    // Standard normal via Box-Muller; the sine branch is discarded to keep the
    // draw count per call fixed (two 64-bit words per normal).
    double normal() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
    std::mt19937_64 engine_;
};

} // namespace cbo
