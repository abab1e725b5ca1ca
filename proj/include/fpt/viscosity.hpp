#pragma once

#include "fpt/contraction.hpp"
#include "fpt/maps.hpp"
#include "fpt/space.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fpt {

/// Vanishing step sequence for the implicit scheme.  Values are indexed from
/// n = 1: harmonic gives 1/(n+1), power(p) gives (n+1)^-p.
class Schedule {
public:
    enum class Kind { Harmonic, Power, Explicit };

    static Schedule harmonic(long length);
    static Schedule power(double p, long length);
    static Schedule explicit_values(std::vector<double> values);

    Kind kind() const { return kind_; }
    const std::vector<double>& values() const { return values_; }
    long length() const { return static_cast<long>(values_.size()); }

private:
    Schedule() = default;
    Kind kind_ = Kind::Harmonic;
    std::vector<double> values_;
};

struct InnerReport {
    long iterations = 0;
    bool converged = false;
    double certified_bound = 0.0;
    double contraction_constant = 0.0;  ///< 1 + eps (beta - 1)
};

/// One implicit step: the unique fixed point of N x = eps f(x) + (1-eps) T(x),
/// solved by the certified contraction solver with modulus 1 + eps (beta - 1).
std::pair<Vector, InnerReport> solve_implicit_step(const MapSpec& T, const MapSpec& f, double beta,
                                                   double eps, const Vector& warm_start,
                                                   const SeminormFamily& family, double tol_inner,
                                                   long max_inner = 200000);

struct ImplicitStep {
    long index = 0;
    double eps = 0.0;
    Vector z;
    long inner_iterations = 0;
    double inner_modulus = 0.0;          ///< contraction constant used by the inner solve
    double inner_bound = 0.0;            ///< certified inner error bound at termination
    std::vector<double> residuals;       ///< q(Tz - z) per family member
};

struct StoppingRule {
    double residual_tol = 1e-8;   ///< stop when every q(Tz - z) drops below
    double stall_tol = 1e-12;     ///< sup-seminorm step size treated as a stall
    int stall_steps = 5;
};

struct ImplicitTrajectory {
    std::vector<ImplicitStep> steps;
    Vector limit_estimate;        ///< last computed iterate
    Vector limit_refined;         ///< extrapolation of z(eps) to eps = 0
    bool converged = false;       ///< residual target reached (or stalled at it)
    bool step_failed = false;     ///< an inner solve missed its certificate
    long failed_index = -1;
    std::string stop_reason;
};

/// The implicit scheme along a schedule, warm starting each inner solve at
/// the previous iterate.  Warm starts change nothing but the inner iteration
/// count: each step's fixed point is unique.
ImplicitTrajectory run_implicit_scheme(const MapSpec& T, const MapSpec& f, double beta,
                                       const Schedule& schedule, const SeminormFamily& family,
                                       const Region& domain, double tol_inner,
                                       const StoppingRule& stop = {}, long max_inner = 200000);

/// Validation mode: every step solved independently from the same cold start.
/// Steps share nothing, so the loop is a parallel kernel; results must match
/// the warm-started trajectory within solver tolerance.
ImplicitTrajectory run_implicit_scheme_cold(const MapSpec& T, const MapSpec& f, double beta,
                                            const Schedule& schedule, const SeminormFamily& family,
                                            const Region& domain, double tol_inner,
                                            long max_inner = 200000,
                                            ExecPolicy policy = ExecPolicy::Parallel);

/// Independent route for affine T, f: solve (I - eps F - (1-eps) M) z =
/// eps c + (1-eps) b directly.  Throws ConfigurationError when a map is not
/// affine-representable; returns nullopt when the system is numerically
/// singular (cannot happen under the declared moduli).
std::optional<Vector> oracle_implicit_step_affine(const MapSpec& T, const MapSpec& f, double eps);

/// Richardson extrapolation of the trajectory tail toward eps = 0, using up
/// to four well-separated nodes.  Falls back to the last iterate when the
/// schedule offers no spread.
Vector refine_limit(const std::vector<ImplicitStep>& steps);

/// Per-seminorm slack of the convergence-proof inequality
/// q(z - Px)^2 <= 2/(1-beta) <x_anchor - Px, J_q(z - Px)>.
std::vector<double> step4_slack(const Vector& z, const Vector& retraction_image,
                                const Vector& x_anchor, double beta, const SeminormFamily& family);

struct AuditOptions {
    int modulus_pairs = 10000;
    int invariance_samples = 1000;
    std::uint64_t seed = 1;
    ExecPolicy policy = ExecPolicy::Parallel;
};

struct HypothesisAudit {
    struct Item {
        std::string name;
        bool pass = false;
        std::string detail;
    };
    std::vector<Item> items;
    bool all_pass = true;

    void add(std::string name, bool pass, std::string detail);
};

/// Audits every hypothesis of the convergence theorem that the instance can
/// violate: separation, per-seminorm kernels against C - C, declared moduli,
/// and invariance of C under T and f.  Compactness and single-valued duality
/// hold by construction and are recorded as such.
HypothesisAudit check_hypotheses(const MapSpec& T, const MapSpec& f, double beta,
                                 const SeminormFamily& family, const Region& domain,
                                 const AuditOptions& opt = {});

}  // namespace fpt
