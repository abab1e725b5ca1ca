#include "fpt/contraction.hpp"

#include <cmath>

namespace fpt {

double certified_bound(double k, long n, double gap) {
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("certified_bound: k must lie in (0, 1)");
    if (!(gap >= 0.0)) throw std::invalid_argument("certified_bound: gap must be nonnegative");
    if (n < 0) throw std::invalid_argument("certified_bound: n must be nonnegative");
    return std::pow(k, static_cast<double>(n)) * gap / (1.0 - k);
}

PicardReport solve_contraction(const MapSpec& map, double k, const Vector& x0,
                               const SeminormFamily& family, const PicardOptions& opt) {
    if (!(k > 0.0 && k < 1.0)) throw ConfigurationError("solve_contraction: k must lie in (0, 1)");
    if (!family.is_separated()) throw ConfigurationError("solve_contraction: family must be separated");
    if (x0.size() != map.dimension()) throw std::invalid_argument("solve_contraction: x0 dimension mismatch");
    if (!(opt.tol > 0.0)) throw std::invalid_argument("solve_contraction: tol must be positive");

    const std::size_t nq = family.size();
    PicardReport report;
    report.contraction_constant = k;
    if (opt.record_history) {
        report.gap_history.resize(nq);
        report.bound_history.resize(nq);
    }

    Vector x = x0;
    Vector tx = map(x);
    report.initial_gap.resize(nq);
    std::vector<double> scale(nq);  // (1-k)^-1 q(x0 - x1), decays by k per step
    double worst = 0.0;
    for (std::size_t i = 0; i < nq; ++i) {
        report.initial_gap[i] = family[i](x - tx);
        scale[i] = report.initial_gap[i] / (1.0 - k);
        worst = std::max(worst, scale[i]);
    }
    if (opt.record_history) report.iterates.push_back(x);

    long n = 0;
    while (true) {
        if (opt.record_history) {
            for (std::size_t i = 0; i < nq; ++i) {
                report.gap_history[i].push_back(family[i](x - tx));
                report.bound_history[i].push_back(scale[i]);
            }
        }
        if (worst <= opt.tol) {
            report.converged = true;
            break;
        }
        if (n >= opt.max_iter) break;
        x = tx;
        tx = map(x);
        ++n;
        worst = 0.0;
        for (std::size_t i = 0; i < nq; ++i) {
            scale[i] *= k;
            worst = std::max(worst, scale[i]);
        }
        if (opt.record_history) report.iterates.push_back(x);
    }
    report.iterations = n;
    report.final_bound = worst;
    report.limit = x;
    return report;
}

DescentReport check_descent_sequence(const std::vector<Vector>& xs, const MapSpec& map, double k,
                                     const SeminormFamily& family, const Vector& limit, double slack) {
    if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("check_descent_sequence: k must lie in (0, 1)");
    DescentReport rep;
    if (xs.empty()) return rep;

    const auto phi = [&](const Vector& x, const Seminorm& q) { return q(x - map(x)) / (1.0 - k); };
    for (const auto& q : family.members()) {
        const double phi_limit = phi(limit, q);
        for (std::size_t n = 0; n + 1 < xs.size(); ++n) {
            const double gap = q(xs[n] - xs[n + 1]);
            const double viol = gap - (phi(xs[n], q) - phi(xs[n + 1], q));
            rep.max_premise_violation = std::max(rep.max_premise_violation, viol);
        }
        for (const auto& x : xs) {
            const double viol = q(x - limit) - (phi(x, q) - phi_limit);
            rep.max_conclusion_violation = std::max(rep.max_conclusion_violation, viol);
        }
    }
    rep.steps_checked = static_cast<long>(xs.size()) - 1;
    rep.premise_ok = rep.max_premise_violation <= slack;
    rep.conclusion_ok = rep.max_conclusion_violation <= slack;
    return rep;
}

}  // namespace fpt
