#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace raresynth {

// Mixes a base seed with a stream index so that sub-tasks (per tree, per
// trial, per fold) get decorrelated but reproducible generators.
// splitmix64 finalizer; full 64-bit avalanche.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Deterministic random source. The engine (mt19937_64) has standardized
// output, and every distribution below is hand-rolled from raw 64-bit draws,
// so sequences are identical across standard libraries and platforms.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(derive_seed(seed, 0)) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller (cosine branch only, to keep the draw
    // count per call fixed).
    double normal() {
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    // Standard Gumbel(0, 1).
    double gumbel() {
        double u = 1.0 - uniform();  // (0, 1]
        return -std::log(-std::log(u));
    }

    // Uniform integer in [lo, hi] inclusive, by rejection-free scaling
    // (bias is < 2^-53 * range; negligible for the ranges used here).
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        double span = static_cast<double>(hi - lo) + 1.0;
        auto offset = static_cast<std::int64_t>(uniform() * span);
        if (offset > hi - lo) offset = hi - lo;
        return lo + offset;
    }

    // Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = index(i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace raresynth
