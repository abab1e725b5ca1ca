#pragma once

#include "fpt/parallel.hpp"
#include "fpt/space.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace fpt {

/// Outcome of one seeded property scan.  `max_violation` is the worst
/// normalized excess over the property's tolerance-free form; the scan
/// passes when it stays below `tolerance`.
struct BatteryResult {
    std::string name;
    long samples = 0;
    long skipped = 0;
    double max_violation = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Absolute homogeneity and the triangle inequality for every family member
/// on random vectors from the region.
BatteryResult seminorm_axiom_battery(const SeminormFamily& family, const Region& domain, long n,
                                     std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);

/// The two defining identities of the duality map on random (seminorm, x)
/// draws spanning the given dimensions:
///   |<x, J_q x> - q(x)^2|  <= 1e-10 (1 + q(x)^2)
///   |q*(J_q x) - q(x)|     <= 1e-8  (1 + q(x))
struct DualityBatteryResult {
    BatteryResult pairing_identity;
    BatteryResult dual_norm_identity;
    bool pass = false;
};

DualityBatteryResult duality_identity_battery(const std::vector<int>& dimensions, long n,
                                              std::uint64_t seed,
                                              ExecPolicy policy = ExecPolicy::Parallel);

/// Same identities evaluated on a fixed family with region samples
/// (the per-instance flavor used by the experiment runner).
DualityBatteryResult duality_identity_battery(const SeminormFamily& family, const Region& domain,
                                              long n, std::uint64_t seed,
                                              ExecPolicy policy = ExecPolicy::Parallel);

/// slack = q(x)^2 - q(y)^2 - 2 <x - y, J_q y> >= -1e-10 (1 + q(x)^2 + q(y)^2)
/// on random pairs with q(y) != 0.
BatteryResult subgradient_battery(const std::vector<int>& dimensions, long n, std::uint64_t seed,
                                  ExecPolicy policy = ExecPolicy::Parallel);

BatteryResult subgradient_battery(const SeminormFamily& family, const Region& domain, long n,
                                  std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);

/// Grid equivalence of directional growth and the duality pairing sign on
/// random (x, y) pairs from the region.
BatteryResult directional_lemma_battery(const SeminormFamily& family, const Region& domain, long n,
                                        std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);

/// Random matrix seminorm of the given dimension: 1..d+1 rows, entries
/// uniform in [-2, 2]; occasionally a zeroed row to vary the rank.
Seminorm random_seminorm(int dimension, std::uint64_t seed);

}  // namespace fpt
