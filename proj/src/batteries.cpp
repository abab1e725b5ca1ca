#include "fpt/batteries.hpp"

#include "fpt/duality.hpp"
#include "fpt/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fpt {

namespace {

constexpr double kSkipped = std::numeric_limits<double>::quiet_NaN();

BatteryResult reduce(std::string name, const std::vector<double>& violations, double tolerance) {
    BatteryResult r;
    r.name = std::move(name);
    r.samples = static_cast<long>(violations.size());
    r.tolerance = tolerance;
    for (double v : violations) {
        if (std::isnan(v))
            ++r.skipped;
        else
            r.max_violation = std::max(r.max_violation, v);
    }
    r.pass = r.max_violation <= tolerance && r.skipped < r.samples;
    return r;
}

Vector uniform_vector(int d, double span, SplitMix64& rng) {
    Vector x(d);
    for (int i = 0; i < d; ++i) x(i) = rng.uniform(-span, span);
    return x;
}

}  // namespace

Seminorm random_seminorm(int dimension, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const int rows = 1 + static_cast<int>(rng.next() % static_cast<std::uint64_t>(dimension + 1));
    Matrix a(rows, dimension);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < dimension; ++c) a(r, c) = rng.uniform(-2.0, 2.0);
    // zero a row now and then so rank-deficient seminorms show up too
    if (rows > 1 && rng.uniform() < 0.15) a.row(static_cast<int>(rng.next() % rows)).setZero();
    return Seminorm(std::move(a), "rand" + std::to_string(dimension) + "x" + std::to_string(rows));
}

BatteryResult seminorm_axiom_battery(const SeminormFamily& family, const Region& domain, long n,
                                     std::uint64_t seed, ExecPolicy policy) {
    std::vector<double> violations(static_cast<std::size_t>(n));
    for_each_index(static_cast<std::size_t>(n), policy, [&](std::size_t i) {
        SplitMix64 rng(derive_seed(seed, 31, i));
        const Vector x = sample_in_region(domain, rng);
        const Vector y = sample_in_region(domain, rng);
        const double lambda = rng.uniform(-4.0, 4.0);
        double worst = 0.0;
        for (const auto& q : family.members()) {
            const double qx = q(x);
            const double homog = std::abs(q(lambda * x) - std::abs(lambda) * qx) / (1.0 + std::abs(lambda) * qx);
            const double tri = std::max(0.0, q(x + y) - qx - q(y)) / (1.0 + qx + q(y));
            worst = std::max({worst, homog, tri});
        }
        violations[i] = worst;
    });
    return reduce("seminorm_axioms", violations, 1e-12);
}

namespace {

struct DualityDraw {
    double pairing_violation;
    double dual_norm_violation;
};

DualityDraw duality_violations(const Seminorm& q, const Vector& x) {
    const DualFunctional j = duality_map(q, x);
    const double qx = q(x);
    DualityDraw out;
    out.pairing_violation = std::abs(x.dot(j.riesz) - qx * qx) / (1.0 + qx * qx);
    const double dual = dual_seminorm(q, j.riesz);
    out.dual_norm_violation =
        std::isinf(dual) ? std::numeric_limits<double>::infinity() : std::abs(dual - qx) / (1.0 + qx);
    return out;
}

DualityBatteryResult assemble_duality(const std::vector<double>& v1, const std::vector<double>& v2) {
    DualityBatteryResult out;
    out.pairing_identity = reduce("duality_pairing_identity", v1, 1e-10);
    out.dual_norm_identity = reduce("duality_dual_norm_identity", v2, 1e-8);
    out.pass = out.pairing_identity.pass && out.dual_norm_identity.pass;
    return out;
}

}  // namespace

DualityBatteryResult duality_identity_battery(const std::vector<int>& dimensions, long n,
                                              std::uint64_t seed, ExecPolicy policy) {
    if (dimensions.empty()) throw std::invalid_argument("duality battery: no dimensions given");
    std::vector<double> v1(static_cast<std::size_t>(n)), v2(static_cast<std::size_t>(n));
    for_each_index(static_cast<std::size_t>(n), policy, [&](std::size_t i) {
        const int d = dimensions[i % dimensions.size()];
        const Seminorm q = random_seminorm(d, derive_seed(seed, 41, i));
        SplitMix64 rng(derive_seed(seed, 42, i));
        const Vector x = uniform_vector(d, 3.0, rng);
        const DualityDraw draw = duality_violations(q, x);
        v1[i] = draw.pairing_violation;
        v2[i] = draw.dual_norm_violation;
    });
    return assemble_duality(v1, v2);
}

DualityBatteryResult duality_identity_battery(const SeminormFamily& family, const Region& domain,
                                              long n, std::uint64_t seed, ExecPolicy policy) {
    std::vector<double> v1(static_cast<std::size_t>(n)), v2(static_cast<std::size_t>(n));
    for_each_index(static_cast<std::size_t>(n), policy, [&](std::size_t i) {
        SplitMix64 rng(derive_seed(seed, 43, i));
        const Vector x = sample_in_region(domain, rng);
        double w1 = 0.0, w2 = 0.0;
        for (const auto& q : family.members()) {
            const DualityDraw draw = duality_violations(q, x);
            w1 = std::max(w1, draw.pairing_violation);
            w2 = std::max(w2, draw.dual_norm_violation);
        }
        v1[i] = w1;
        v2[i] = w2;
    });
    return assemble_duality(v1, v2);
}

namespace {

double subgradient_violation(const Seminorm& q, const Vector& x, const Vector& y) {
    if (q(y) < 1e-12) return kSkipped;
    const double qx = q(x);
    const double qy = q(y);
    const double slack = subgradient_slack(q, x, y);
    return std::max(0.0, -slack) / (1.0 + qx * qx + qy * qy);
}

}  // namespace

BatteryResult subgradient_battery(const std::vector<int>& dimensions, long n, std::uint64_t seed,
                                  ExecPolicy policy) {
    if (dimensions.empty()) throw std::invalid_argument("subgradient battery: no dimensions given");
    std::vector<double> violations(static_cast<std::size_t>(n));
    for_each_index(static_cast<std::size_t>(n), policy, [&](std::size_t i) {
        const int d = dimensions[i % dimensions.size()];
        const Seminorm q = random_seminorm(d, derive_seed(seed, 51, i));
        SplitMix64 rng(derive_seed(seed, 52, i));
        const Vector x = uniform_vector(d, 3.0, rng);
        const Vector y = uniform_vector(d, 3.0, rng);
        violations[i] = subgradient_violation(q, x, y);
    });
    return reduce("subgradient_inequality", violations, 1e-10);
}

BatteryResult subgradient_battery(const SeminormFamily& family, const Region& domain, long n,
                                  std::uint64_t seed, ExecPolicy policy) {
    std::vector<double> violations(static_cast<std::size_t>(n));
    for_each_index(static_cast<std::size_t>(n), policy, [&](std::size_t i) {
        SplitMix64 rng(derive_seed(seed, 53, i));
        const Vector x = sample_in_region(domain, rng);
        const Vector y = sample_in_region(domain, rng);
        double worst = kSkipped;
        for (const auto& q : family.members()) {
            const double v = subgradient_violation(q, x, y);
            if (std::isnan(v)) continue;
            worst = std::isnan(worst) ? v : std::max(worst, v);
        }
        violations[i] = worst;
    });
    return reduce("subgradient_inequality", violations, 1e-10);
}

BatteryResult directional_lemma_battery(const SeminormFamily& family, const Region& domain, long n,
                                        std::uint64_t seed, ExecPolicy policy) {
    static const std::vector<double> grid{1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0};
    std::vector<double> violations(static_cast<std::size_t>(n));
    for_each_index(static_cast<std::size_t>(n), policy, [&](std::size_t i) {
        SplitMix64 rng(derive_seed(seed, 61, i));
        const Vector x = sample_in_region(domain, rng);
        const Vector y = sample_in_region(domain, rng);
        double worst = kSkipped;
        for (const auto& q : family.members()) {
            if (q(x) == 0.0) continue;
            const auto rep = check_directional_lemma(q, x, y, grid);
            // Equivalence is only decidable on a finite grid when the pairing
            // sign is unambiguous; boundary draws are skipped.
            if (std::abs(rep.pairing) <= 1e-6 * (1.0 + q(x))) continue;
            const double v = rep.equivalent_on_grid ? 0.0 : 1.0;
            worst = std::isnan(worst) ? v : std::max(worst, v);
        }
        violations[i] = worst;
    });
    return reduce("directional_growth_lemma", violations, 0.5);
}

}  // namespace fpt
