#pragma once

// Small deterministic RNG (xoshiro256++ seeded through splitmix64).
// Sampling results must be bitwise reproducible from their seeds across
// platforms and thread counts, so the generator is pinned here instead of
// relying on <random> engine/distribution internals.

#include <cmath>
#include <cstdint>

#include "nvsim/constants.hpp"

namespace nvsim {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64_next(sm);
    }

    // Independent stream for (seed, index) pairs, e.g. one per Monte Carlo
    // sample so parallel sampling stays order-independent.
    Rng(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t sm = seed;
        std::uint64_t a = splitmix64_next(sm);
        std::uint64_t b = splitmix64_next(sm);
        std::uint64_t sm2 = stream * 0xda942042e4dd58b5ULL + a;
        s_[0] = splitmix64_next(sm2);
        s_[1] = splitmix64_next(sm2) ^ b;
        s_[2] = splitmix64_next(sm2);
        s_[3] = splitmix64_next(sm2);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    // Box-Muller; one value per call, spare discarded for simplicity.
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * constants::pi * u2);
    }

    // Standard Cauchy (Lorentzian with HWHM 1).
    double cauchy() {
        double u = uniform();
        while (u == 0.5) u = uniform();
        return std::tan(constants::pi * (u - 0.5));
    }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t s_[4]{};
};

} // namespace nvsim
