#pragma once

#include "fpt/space.hpp"

#include <vector>

namespace fpt {

/// A linear functional represented by its Riesz vector: <x, j> = x . riesz.
/// Finite dual seminorm requires riesz to lie in the row space of the
/// generating seminorm's matrix.
struct DualFunctional {
    Vector riesz;
    std::string seminorm_label;
};

inline double pairing(const Vector& x, const DualFunctional& j) { return x.dot(j.riesz); }

/// Dual seminorm q*(j) = sup{ |<y, j>| : q(y) <= 1 }.  Returns +inf when j
/// has a component outside the row space of A, detected against
/// tau_dual = 1e-10 * |j|.
double dual_seminorm(const Seminorm& q, const Vector& j);

/// The duality map of q(x) = |Ax|: j = A^T A x.  Satisfies
/// <x, j> = q(x)^2 and q*(j) = q(x); the zero functional when q(x) = 0.
DualFunctional duality_map(const Seminorm& q, const Vector& x);

/// Grid check of the equivalence "q(x) <= q(x + t y) for all t > 0" vs
/// "<y, duality_map(q, x)> >= 0".  Requires q(x) != 0.
struct DirectionalReport {
    double pairing = 0.0;              ///< <y, J_q x>
    double min_growth = 0.0;           ///< min over the grid of q(x+ty) - q(x)
    std::vector<double> growth;        ///< q(x+ty) - q(x) per grid point
    bool pairing_nonneg = false;       ///< pairing >= -tol
    bool growth_nonneg = false;        ///< min_growth >= -tol
    bool equivalent_on_grid = false;   ///< the two flags agree
    double tol = 0.0;
};

DirectionalReport check_directional_lemma(const Seminorm& q, const Vector& x, const Vector& y,
                                          const std::vector<double>& t_grid, double tol = 1e-9);

/// slack = q(x)^2 - q(y)^2 - 2 <x - y, duality_map(q, y)>.
/// Nonnegative up to rounding; equals |A(x-y)|^2 in exact arithmetic.
double subgradient_slack(const Seminorm& q, const Vector& x, const Vector& y);

}  // namespace fpt
