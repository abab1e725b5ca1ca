#include "fpt/retraction.hpp"

#include "fpt/duality.hpp"

#include <algorithm>
#include <cmath>

namespace fpt {

RetractionEstimate estimate_retraction(const MapSpec& T, const Vector& anchor,
                                       const SeminormFamily& family, const Region& domain,
                                       long schedule_length, double tol_inner, long max_inner) {
    if (!domain.contains(anchor, 1e-8))
        throw std::invalid_argument("estimate_retraction: anchor must lie in the region");
    const MapSpec constant = MapSpec::contraction_toward(anchor, 0.0);
    StoppingRule stop;
    stop.residual_tol = 0.0;  // run the whole schedule; the tail drives the extrapolation
    RetractionEstimate est;
    est.anchor = anchor;
    est.trajectory = run_implicit_scheme(T, constant, 0.0, Schedule::harmonic(schedule_length), family,
                                         domain, tol_inner, stop, max_inner);
    est.image = est.trajectory.limit_refined;
    est.image_last = est.trajectory.limit_estimate;
    est.reliable = !est.trajectory.step_failed &&
                   (est.trajectory.converged || est.trajectory.steps.size() >= 8);
    return est;
}

ViReport check_variational_inequality(const Vector& image, const Vector& anchor,
                                      const std::vector<Vector>& fix_samples,
                                      const SeminormFamily& family, double tol_base,
                                      ExecPolicy policy) {
    ViReport rep;
    rep.tol_base = tol_base;
    rep.samples = static_cast<long>(fix_samples.size());
    if (fix_samples.empty()) return rep;  // inconclusive

    const Vector dx = anchor - image;
    const std::size_t nq = family.size();
    const std::size_t n = fix_samples.size();
    std::vector<double> pairings(n * nq);
    std::vector<std::uint8_t> within(n * nq);
    for_each_index(n, policy, [&](std::size_t i) {
        const Vector dy = fix_samples[i] - image;
        for (std::size_t k = 0; k < nq; ++k) {
            const double p = dx.dot(duality_map(family[k], dy).riesz);
            pairings[i * nq + k] = p;
            const double scale = 1.0 + family[k](dx) * family[k](dy);
            within[i * nq + k] = p <= tol_base * scale ? 1 : 0;
        }
    });

    rep.per_seminorm_max.assign(nq, -std::numeric_limits<double>::infinity());
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < nq; ++k) {
            rep.per_seminorm_max[k] = std::max(rep.per_seminorm_max[k], pairings[i * nq + k]);
            ok = ok && within[i * nq + k];
        }
    rep.max_pairing = *std::max_element(rep.per_seminorm_max.begin(), rep.per_seminorm_max.end());
    rep.conclusive = true;
    rep.pass = ok;
    return rep;
}

SunnyReport check_sunny(const MapSpec& T, const Vector& anchor, const Vector& image,
                        const std::vector<double>& t_grid, const SeminormFamily& family,
                        const Region& domain, long schedule_length, double tol_inner) {
    SunnyReport rep;
    rep.tol = 1e-6 * (1.0 + family.sup(image));
    bool all_ok = true;
    for (double t : t_grid) {
        SunnyReport::Entry entry;
        entry.t = t;
        const Vector ray_point = image + t * (anchor - image);
        entry.admissible = t >= 0.0 && domain.contains(ray_point, 1e-10);
        if (entry.admissible) {
            auto est = estimate_retraction(T, ray_point, family, domain, schedule_length, tol_inner);
            entry.image = est.image;
            entry.deviation = family.sup(est.image - image);
            all_ok = all_ok && est.reliable && entry.deviation <= rep.tol;
            rep.conclusive = true;
        }
        rep.entries.push_back(std::move(entry));
    }
    rep.pass = rep.conclusive && all_ok;
    return rep;
}

UniquenessReport check_uniqueness(const MapSpec& T, const Vector& anchor, const SeminormFamily& family,
                                  const Region& domain, long schedule_length, double tol_inner,
                                  double tol) {
    UniquenessReport rep;
    auto primary = estimate_retraction(T, anchor, family, domain, schedule_length, tol_inner);

    const MapSpec constant = MapSpec::contraction_toward(anchor, 0.0);
    StoppingRule stop;
    stop.residual_tol = 0.0;
    // Power schedules decay slower, so give the alternate construction a
    // longer tail before extrapolating.
    const long alt_length = std::max(schedule_length, 3000L);
    auto alternate = run_implicit_scheme(T, constant, 0.0, Schedule::power(0.7, alt_length), family,
                                         domain, tol_inner, stop);

    rep.primary = primary.image;
    rep.alternate = alternate.limit_refined;
    rep.conclusive = primary.reliable && !alternate.step_failed;
    if (rep.conclusive) {
        rep.difference = family.sup(rep.primary - rep.alternate);
        rep.pass = rep.difference <= tol;
    }
    return rep;
}

}  // namespace fpt
