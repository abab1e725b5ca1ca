#pragma once

#include "fpt/space.hpp"

#include <cstdint>

namespace fpt {

/// Counter-friendly 64-bit generator (splitmix64).  Every sampled index can
/// derive its own stream, so batches reproduce bit-identically regardless of
/// evaluation order or thread count.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller.
    double normal();

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Stable per-(stream, index) seed derivation.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);

/// Uniform sample from a ball or box region.
Vector sample_in_region(const Region& region, SplitMix64& rng);

/// Isotropic unit direction in R^d.
Vector sample_direction(Eigen::Index d, SplitMix64& rng);

}  // namespace fpt
