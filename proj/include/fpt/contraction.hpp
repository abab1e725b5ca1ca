#pragma once

#include "fpt/maps.hpp"
#include "fpt/space.hpp"

#include <vector>

namespace fpt {

/// A-priori Picard error bound (1-k)^-1 k^n gap.  Requires k in (0, 1).
double certified_bound(double k, long n, double gap);

struct PicardOptions {
    double tol = 1e-10;          ///< stop once the certified bound (max over q) drops below
    long max_iter = 100000;
    bool record_history = false; ///< keep per-step gaps, bounds and iterates
};

struct PicardReport {
    Vector limit;
    long iterations = 0;
    bool converged = false;
    double contraction_constant = 0.0;
    double final_bound = 0.0;                       ///< max over q at termination
    std::vector<double> initial_gap;                ///< q(x0 - x1) per member
    std::vector<std::vector<double>> gap_history;   ///< [q][n] q(x_n - x_{n+1})
    std::vector<std::vector<double>> bound_history; ///< [q][n] certified bound at n
    std::vector<Vector> iterates;                   ///< x_0 .. x_N when recorded
};

/// Picard iteration x_{n+1} = T x_n with the a-priori certificate as the
/// stopping rule: terminates once max_q (1-k)^-1 k^n q(x0 - x1) <= tol,
/// which bounds the distance to the unique fixed point in every member
/// seminorm.  The family must be separated.
PicardReport solve_contraction(const MapSpec& map, double k, const Vector& x0,
                               const SeminormFamily& family, const PicardOptions& opt = {});

/// Diagnostic for the descent inequality behind the convergence proof:
/// with phi_q(x) = (1-k)^-1 q(x - Tx), consecutive iterates must satisfy
/// q(x_n - x_{n+1}) <= phi_q(x_n) - phi_q(x_{n+1}), and against the limit v,
/// q(x_n - v) <= phi_q(x_n) - phi_q(v).
struct DescentReport {
    double max_premise_violation = 0.0;
    double max_conclusion_violation = 0.0;
    bool premise_ok = true;
    bool conclusion_ok = true;
    long steps_checked = 0;
};

DescentReport check_descent_sequence(const std::vector<Vector>& xs, const MapSpec& map, double k,
                                     const SeminormFamily& family, const Vector& limit,
                                     double slack = 1e-10);

}  // namespace fpt
