#include "fpt/duality.hpp"

#include <cmath>
#include <limits>

namespace fpt {

double dual_seminorm(const Seminorm& q, const Vector& j) {
    if (j.size() != q.dimension()) throw std::invalid_argument("dual_seminorm: dimension mismatch");
    const double jn = j.norm();
    if (jn == 0.0) return 0.0;
    // Coordinates of j in the row space; whatever is left over makes the
    // supremum infinite because ker(q) directions are unconstrained.
    const Vector coeff = q.row_space_basis().transpose() * j;
    const double resid = (j - q.row_space_basis() * coeff).norm();
    if (resid > 1e-10 * jn) return std::numeric_limits<double>::infinity();
    return (coeff.array() / q.singular_values().array()).matrix().norm();
}

DualFunctional duality_map(const Seminorm& q, const Vector& x) {
    if (x.size() != q.dimension()) throw std::invalid_argument("duality_map: dimension mismatch");
    return DualFunctional{q.gram() * x, q.label()};
}

DirectionalReport check_directional_lemma(const Seminorm& q, const Vector& x, const Vector& y,
                                          const std::vector<double>& t_grid, double tol) {
    if (q(x) == 0.0) throw std::invalid_argument("check_directional_lemma: q(x) must be nonzero");
    if (t_grid.empty()) throw std::invalid_argument("check_directional_lemma: empty t grid");
    for (double t : t_grid)
        if (!(t > 0.0)) throw std::invalid_argument("check_directional_lemma: grid values must be positive");

    DirectionalReport rep;
    rep.tol = tol;
    rep.pairing = pairing(y, duality_map(q, x));
    const double qx = q(x);
    rep.growth.reserve(t_grid.size());
    rep.min_growth = std::numeric_limits<double>::infinity();
    for (double t : t_grid) {
        const double g = q(x + t * y) - qx;
        rep.growth.push_back(g);
        rep.min_growth = std::min(rep.min_growth, g);
    }
    rep.pairing_nonneg = rep.pairing >= -tol;
    rep.growth_nonneg = rep.min_growth >= -tol;
    rep.equivalent_on_grid = (rep.pairing_nonneg == rep.growth_nonneg);
    return rep;
}

double subgradient_slack(const Seminorm& q, const Vector& x, const Vector& y) {
    const double qx = q(x);
    const double qy = q(y);
    return qx * qx - qy * qy - 2.0 * (x - y).dot(duality_map(q, y).riesz);
}

}  // namespace fpt
