#pragma once

#include <cmath>
#include <cstdint>

namespace sketchlsq {

namespace detail {

/// Finalizer from the splitmix64 generator; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based 64-bit generator (splitmix64 over a Weyl sequence).
///
/// Streams are derived by hashing (seed, stream-id) pairs, so any unit of
/// work — a sketch column, a trial, a worker block — can own an independent
/// substream that depends only on logical identifiers, never on execution
/// order. This is what makes parallel generation reproducible regardless of
/// the worker count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(detail::mix64(seed)) {}

    /// Independent substream identified by (seed, stream).
    Rng(std::uint64_t seed, std::uint64_t stream)
        : state_(detail::mix64(detail::mix64(seed) ^ (0x6a09e667f3bcc909ULL + stream))) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, bound) without modulo bias (Lemire rejection).
    std::uint64_t uniform_below(std::uint64_t bound) {
        while (true) {
            std::uint64_t x = next_u64();
            __uint128_t m = static_cast<__uint128_t>(x) * bound;
            auto lo = static_cast<std::uint64_t>(m);
            if (lo >= bound || lo >= (-bound) % bound) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in (-1, 1).
    double uniform_sym() { return 2.0 * uniform01() - 1.0; }

    /// Random sign, +1 or -1 with equal probability.
    double sign() { return (next_u64() & 1u) ? 1.0 : -1.0; }

    /// Standard normal via Box-Muller (caches the spare deviate).
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = uniform_sym();
            v = uniform_sym();
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace sketchlsq
