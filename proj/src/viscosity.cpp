#include "fpt/viscosity.hpp"

#include "fpt/duality.hpp"
#include "fpt/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fpt {

namespace {

void validate_schedule_values(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("schedule: at least one step required");
    double prev = 1.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double e = values[i];
        if (!(e > 0.0 && e < 1.0))
            throw std::invalid_argument("schedule: step " + std::to_string(i + 1) + " outside (0, 1)");
        if (i > 0 && e > prev) throw std::invalid_argument("schedule: steps must be nonincreasing");
        prev = e;
    }
}

}  // namespace

Schedule Schedule::harmonic(long length) {
    if (length < 1) throw std::invalid_argument("schedule: length must be positive");
    Schedule s;
    s.kind_ = Kind::Harmonic;
    s.values_.reserve(static_cast<std::size_t>(length));
    for (long n = 1; n <= length; ++n) s.values_.push_back(1.0 / static_cast<double>(n + 1));
    return s;
}

Schedule Schedule::power(double p, long length) {
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("schedule: power exponent must lie in (0, 1]");
    if (length < 1) throw std::invalid_argument("schedule: length must be positive");
    Schedule s;
    s.kind_ = Kind::Power;
    s.values_.reserve(static_cast<std::size_t>(length));
    for (long n = 1; n <= length; ++n) s.values_.push_back(std::pow(static_cast<double>(n + 1), -p));
    return s;
}

Schedule Schedule::explicit_values(std::vector<double> values) {
    validate_schedule_values(values);
    Schedule s;
    s.kind_ = Kind::Explicit;
    s.values_ = std::move(values);
    return s;
}

std::pair<Vector, InnerReport> solve_implicit_step(const MapSpec& T, const MapSpec& f, double beta,
                                                   double eps, const Vector& warm_start,
                                                   const SeminormFamily& family, double tol_inner,
                                                   long max_inner) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("solve_implicit_step: eps must lie in (0, 1)");
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::invalid_argument("solve_implicit_step: beta must lie in [0, 1)");

    const double k = 1.0 + eps * (beta - 1.0);
    MapSpec blended = MapSpec::convex_combo({eps, 1.0 - eps}, {f, T}, k);

    PicardOptions opt;
    opt.tol = tol_inner;
    opt.max_iter = max_inner;
    PicardReport inner = solve_contraction(blended, k, warm_start, family, opt);

    InnerReport rep;
    rep.iterations = inner.iterations;
    rep.converged = inner.converged;
    rep.certified_bound = inner.final_bound;
    rep.contraction_constant = k;
    return {inner.limit, rep};
}

namespace {

ImplicitStep make_step(long index, double eps, Vector z, const InnerReport& inner, const MapSpec& T,
                       const SeminormFamily& family) {
    ImplicitStep step;
    step.index = index;
    step.eps = eps;
    step.inner_iterations = inner.iterations;
    step.inner_modulus = inner.contraction_constant;
    step.inner_bound = inner.certified_bound;
    step.residuals = family.values(T(z) - z);
    step.z = std::move(z);
    return step;
}

bool residuals_below(const std::vector<double>& residuals, double tol) {
    return std::all_of(residuals.begin(), residuals.end(), [tol](double r) { return r <= tol; });
}

}  // namespace

ImplicitTrajectory run_implicit_scheme(const MapSpec& T, const MapSpec& f, double beta,
                                       const Schedule& schedule, const SeminormFamily& family,
                                       const Region& domain, double tol_inner, const StoppingRule& stop,
                                       long max_inner) {
    ImplicitTrajectory traj;
    Vector warm = domain.center();
    int stalled = 0;
    for (long n = 1; n <= schedule.length(); ++n) {
        const double eps = schedule.values()[static_cast<std::size_t>(n - 1)];
        auto [z, inner] = solve_implicit_step(T, f, beta, eps, warm, family, tol_inner, max_inner);
        traj.steps.push_back(make_step(n, eps, std::move(z), inner, T, family));
        const ImplicitStep& step = traj.steps.back();
        if (!inner.converged) {
            traj.step_failed = true;
            traj.failed_index = n;
            traj.stop_reason = "inner solve missed its certificate at step " + std::to_string(n);
            break;
        }
        if (residuals_below(step.residuals, stop.residual_tol)) {
            traj.converged = true;
            traj.stop_reason = "residual target reached";
            break;
        }
        if (n > 1 && family.sup(step.z - warm) <= stop.stall_tol) {
            if (++stalled >= stop.stall_steps) {
                traj.stop_reason = "stalled";
                break;
            }
        } else {
            stalled = 0;
        }
        warm = step.z;
    }
    if (traj.stop_reason.empty()) traj.stop_reason = "schedule exhausted";
    traj.limit_estimate = traj.steps.back().z;
    traj.limit_refined = refine_limit(traj.steps);
    return traj;
}

ImplicitTrajectory run_implicit_scheme_cold(const MapSpec& T, const MapSpec& f, double beta,
                                            const Schedule& schedule, const SeminormFamily& family,
                                            const Region& domain, double tol_inner, long max_inner,
                                            ExecPolicy policy) {
    ImplicitTrajectory traj;
    const std::size_t n_steps = static_cast<std::size_t>(schedule.length());
    traj.steps.resize(n_steps);
    const Vector cold = domain.center();
    for_each_index(n_steps, policy, [&](std::size_t i) {
        const double eps = schedule.values()[i];
        auto [z, inner] = solve_implicit_step(T, f, beta, eps, cold, family, tol_inner, max_inner);
        traj.steps[i] = make_step(static_cast<long>(i + 1), eps, std::move(z), inner, T, family);
        if (!inner.converged) traj.steps[i].inner_iterations = -traj.steps[i].inner_iterations;
    });
    for (auto& step : traj.steps) {
        if (step.inner_iterations < 0) {
            step.inner_iterations = -step.inner_iterations;
            traj.step_failed = true;
            if (traj.failed_index < 0) traj.failed_index = step.index;
        }
    }
    traj.converged = !traj.step_failed;
    traj.stop_reason = "cold-start validation sweep";
    traj.limit_estimate = traj.steps.back().z;
    traj.limit_refined = refine_limit(traj.steps);
    return traj;
}

std::optional<Vector> oracle_implicit_step_affine(const MapSpec& T, const MapSpec& f, double eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw std::invalid_argument("oracle_implicit_step_affine: eps must lie in (0, 1]");
    const auto t_aff = as_affine(T);
    const auto f_aff = as_affine(f);
    if (!t_aff || !f_aff)
        throw ConfigurationError("oracle_implicit_step_affine: both maps must be affine-representable");
    const Eigen::Index d = t_aff->linear.cols();
    const Matrix system =
        Matrix::Identity(d, d) - eps * f_aff->linear - (1.0 - eps) * t_aff->linear;
    Eigen::FullPivLU<Matrix> lu(system);
    if (lu.rank() < d) return std::nullopt;
    return lu.solve(eps * f_aff->offset + (1.0 - eps) * t_aff->offset);
}

Vector refine_limit(const std::vector<ImplicitStep>& steps) {
    if (steps.empty()) throw std::invalid_argument("refine_limit: empty trajectory");
    // Geometric node selection from the tail keeps the extrapolation weights
    // small; near-coincident eps values would amplify inner-solve noise.
    std::vector<const ImplicitStep*> nodes{&steps.back()};
    for (auto it = steps.rbegin(); it != steps.rend() && nodes.size() < 4; ++it) {
        if (it->eps >= 2.0 * nodes.back()->eps) nodes.push_back(&*it);
    }
    if (nodes.size() == 1) return steps.back().z;
    Vector out = Vector::Zero(steps.back().z.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        double w = 1.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) {
            if (j == i) continue;
            w *= nodes[j]->eps / (nodes[j]->eps - nodes[i]->eps);
        }
        out += w * nodes[i]->z;
    }
    return out;
}

std::vector<double> step4_slack(const Vector& z, const Vector& retraction_image, const Vector& x_anchor,
                                double beta, const SeminormFamily& family) {
    if (!(beta >= 0.0 && beta < 1.0)) throw std::invalid_argument("step4_slack: beta must lie in [0, 1)");
    std::vector<double> out;
    out.reserve(family.size());
    const Vector dz = z - retraction_image;
    const Vector dx = x_anchor - retraction_image;
    for (const auto& q : family.members()) {
        const double qdz = q(dz);
        out.push_back(2.0 / (1.0 - beta) * dx.dot(duality_map(q, dz).riesz) - qdz * qdz);
    }
    return out;
}

void HypothesisAudit::add(std::string name, bool pass, std::string detail) {
    all_pass = all_pass && pass;
    items.push_back(Item{std::move(name), pass, std::move(detail)});
}

namespace {

std::string modulus_detail(const ModulusReport& report, double bound) {
    std::ostringstream os;
    os << "declared bound " << bound << ";";
    for (const auto& m : report.per_seminorm) {
        os << " " << m.label << ": estimate " << m.estimate;
        if (m.exact) os << ", exact " << *m.exact;
        if (m.inconclusive) os << " (inconclusive)";
        os << ";";
    }
    return os.str();
}

bool modulus_within(const ModulusReport& report, double bound) {
    for (const auto& m : report.per_seminorm) {
        if (m.estimate > bound + 1e-9) return false;
        if (m.exact && *m.exact > bound + 1e-9) return false;
    }
    return true;
}

}  // namespace

HypothesisAudit check_hypotheses(const MapSpec& T, const MapSpec& f, double beta,
                                 const SeminormFamily& family, const Region& domain,
                                 const AuditOptions& opt) {
    HypothesisAudit audit;

    audit.add("family_separated", family.is_separated(),
              family.is_separated() ? "joint kernel is trivial"
                                    : "joint kernel has dimension " +
                                          std::to_string(family.joint_kernel_basis().cols()));

    // The regions are full-dimensional, so (C-C) spans the whole space and
    // the hypothesis (C-C) /\ ker(q) = {0} reduces to ker(q) = {0}.
    for (const auto& q : family.members()) {
        const auto kdim = q.kernel_basis().cols();
        audit.add("kernel_disjoint_from_differences:" + q.label(), kdim == 0,
                  kdim == 0 ? "seminorm is a norm on C - C"
                            : "C - C meets ker(q) in a subspace of dimension " + std::to_string(kdim));
    }

    const ModulusReport t_mod = verify_modulus(T, family, domain, opt.modulus_pairs,
                                               derive_seed(opt.seed, 11, 0), opt.policy);
    audit.add("map_T_nonexpansive", modulus_within(t_mod, 1.0), modulus_detail(t_mod, 1.0));

    const bool beta_ok = beta >= 0.0 && beta < 1.0;
    const ModulusReport f_mod = verify_modulus(f, family, domain, opt.modulus_pairs,
                                               derive_seed(opt.seed, 12, 0), opt.policy);
    audit.add("map_f_contraction", beta_ok && modulus_within(f_mod, beta), modulus_detail(f_mod, beta));

    const auto invariance = [&](const MapSpec& map, std::uint64_t stream) {
        const std::size_t n = static_cast<std::size_t>(opt.invariance_samples);
        std::vector<std::uint8_t> inside(n, 1);
        for_each_index(n, opt.policy, [&](std::size_t i) {
            SplitMix64 rng(derive_seed(opt.seed, stream, i));
            inside[i] = domain.contains(map(sample_in_region(domain, rng)), 1e-8) ? 1 : 0;
        });
        const long bad = static_cast<long>(std::count(inside.begin(), inside.end(), 0));
        return std::pair<bool, long>{bad == 0, bad};
    };
    const auto [t_inv, t_bad] = invariance(T, 13);
    audit.add("T_maps_C_into_C", t_inv,
              t_inv ? "all sampled images inside C" : std::to_string(t_bad) + " sampled images escaped C");
    const auto [f_inv, f_bad] = invariance(f, 14);
    audit.add("f_maps_C_into_C", f_inv,
              f_inv ? "all sampled images inside C" : std::to_string(f_bad) + " sampled images escaped C");

    audit.add("sequential_compactness", true, "finite dimension: bounded closed sets are compact");
    audit.add("duality_map_single_valued", true, "matrix seminorms have a closed-form duality map");
    return audit;
}

}  // namespace fpt
