#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

#include "permwave/common.hpp"

namespace permwave {

/// splitmix64; used for seeding and for deriving independent substreams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256++ with an explicit per-caller state. All stochastic code in the
/// library takes an Rng& so that streams are reproducible and never shared
/// implicitly between threads. Substreams derived from (seed, a, b) are what
/// make Monte Carlo results independent of the worker count.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) word = splitmix64(sm);
    }

    static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
        std::uint64_t sm = seed;
        std::uint64_t k = splitmix64(sm);
        sm = k ^ (a * 0xd1342543de82ef95ULL);
        k = splitmix64(sm);
        sm = k ^ (b * 0x8d51e7acfa20cd9bULL);
        return Rng(splitmix64(sm));
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// uniform in [0, 1)
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// uniform in (0, 1]; safe as a log() argument
    double next_double_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    /// unbiased uniform integer in [0, n)
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~static_cast<std::uint64_t>(0)) / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    /// standard normal via Box-Muller (no rejection, fully deterministic)
    double normal() {
        const double r = std::sqrt(-2.0 * std::log(next_double_pos()));
        return r * std::cos(two_pi * next_double());
    }

    /// circularly symmetric complex Gaussian, unit variance per complex
    /// dimension (real/imag each have variance 1/2)
    std::complex<double> complex_normal() {
        const double r = std::sqrt(-std::log(next_double_pos()));
        const double phi = two_pi * next_double();
        return {r * std::cos(phi), r * std::sin(phi)};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t state_[4];
};

}  // namespace permwave
