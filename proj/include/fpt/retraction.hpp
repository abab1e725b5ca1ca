#pragma once

#include "fpt/viscosity.hpp"

#include <cstdint>
#include <vector>

namespace fpt {

/// Estimate of the sunny nonexpansive retraction image P(anchor) obtained
/// from the anchor scheme z = (1/n) anchor + (1 - 1/n) T z.
struct RetractionEstimate {
    Vector anchor;
    Vector image;          ///< extrapolated limit of the anchor trajectory
    Vector image_last;     ///< raw final iterate
    ImplicitTrajectory trajectory;
    bool reliable = false; ///< no inner failure and a usable extrapolation tail
};

/// Runs the anchor scheme (the implicit scheme with the constant map at
/// `anchor` and modulus 0); harmonic steps 1/2, 1/3, ... realize eps = 1/n
/// from n = 2, skipping the degenerate n = 1.
RetractionEstimate estimate_retraction(const MapSpec& T, const Vector& anchor,
                                       const SeminormFamily& family, const Region& domain,
                                       long schedule_length, double tol_inner = 1e-10,
                                       long max_inner = 200000);

/// Max over fixed-set samples and members of <x - Px, J_q(y - Px)>, which the
/// retraction characterization requires to be <= 0.
struct ViReport {
    std::vector<double> per_seminorm_max;
    double max_pairing = 0.0;
    long samples = 0;
    bool conclusive = false;
    bool pass = false;      ///< against the scaled tolerance
    double tol_base = 0.0;
};

ViReport check_variational_inequality(const Vector& image, const Vector& anchor,
                                      const std::vector<Vector>& fix_samples,
                                      const SeminormFamily& family, double tol_base = 1e-6,
                                      ExecPolicy policy = ExecPolicy::Parallel);

/// Re-estimates the retraction from ray points Px + t (x - Px); a sunny
/// retraction returns the same image for every admissible t.
struct SunnyReport {
    struct Entry {
        double t = 0.0;
        bool admissible = false;
        Vector image;
        double deviation = 0.0;
    };
    std::vector<Entry> entries;
    bool conclusive = false;  ///< at least one admissible t
    bool pass = false;
    double tol = 0.0;
};

SunnyReport check_sunny(const MapSpec& T, const Vector& anchor, const Vector& image,
                        const std::vector<double>& t_grid, const SeminormFamily& family,
                        const Region& domain, long schedule_length, double tol_inner = 1e-10);

/// Compares the anchor-scheme image against an independent construction of
/// the same retraction under a power(0.7) schedule.
struct UniquenessReport {
    Vector primary;
    Vector alternate;
    double difference = 0.0;
    bool conclusive = false;
    bool pass = false;
};

UniquenessReport check_uniqueness(const MapSpec& T, const Vector& anchor, const SeminormFamily& family,
                                  const Region& domain, long schedule_length, double tol_inner = 1e-10,
                                  double tol = 1e-6);

}  // namespace fpt
