#pragma once

#include <cmath>
#include <cstdint>

namespace hawkes {

/// Counter-based 64-bit generator (SplitMix64 over an incrementing counter).
/// Sampling is implemented locally so that identical seeds reproduce identical
/// streams on every platform, independent of the standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : counter_(seed + stream * 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = counter_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Exponential with the given rate (> 0).
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    /// Poisson count by accumulating unit-rate exponential arrivals; exact for
    /// any mean and free of the underflow that the product method suffers.
    std::uint64_t poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        std::uint64_t k = 0;
        double acc = exponential(1.0);
        while (acc <= mean) {
            ++k;
            acc += exponential(1.0);
        }
        return k;
    }

    /// Standard normal via Box-Muller (one value per call, cached pair unused
    /// to keep the stream position predictable).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // modulo bias is < 2^-53 for any n we use; acceptable and portable
        return n == 0 ? 0 : next_u64() % n;
    }

private:
    std::uint64_t counter_;
};

}  // namespace hawkes
