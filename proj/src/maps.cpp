#include "fpt/maps.hpp"

#include "fpt/sampling.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace fpt {

namespace {

Eigen::Index node_dimension(const MapSpec::Node& node) {
    return std::visit(
        [](const auto& n) -> Eigen::Index {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AffineMap>)
                return n.linear.cols();
            else if constexpr (std::is_same_v<T, ProjectionMap>)
                return n.region.dimension();
            else if constexpr (std::is_same_v<T, ContractionToward>)
                return n.target.size();
            else
                return n.maps.front().dimension();
        },
        node);
}

Matrix orthonormalize(const Matrix& basis) {
    if (basis.cols() == 0) return basis;
    Eigen::HouseholderQR<Matrix> qr(basis);
    Matrix q = qr.householderQ() * Matrix::Identity(basis.rows(), basis.cols());
    return q;
}

bool same_region(const Region& a, const Region& b) {
    if (a.kind() != b.kind() || a.dimension() != b.dimension()) return false;
    if (a.center() != b.center()) return false;
    if (a.kind() == Region::Kind::Ball) return a.radius() == b.radius();
    return a.halfwidths() == b.halfwidths();
}

}  // namespace

MapSpec::MapSpec(Node node, double declared_modulus, Eigen::Index dimension)
    : node_(std::move(node)), declared_modulus_(declared_modulus), dimension_(dimension) {
    if (!(declared_modulus_ >= 0.0) || !std::isfinite(declared_modulus_))
        throw std::invalid_argument("map: declared modulus must be a finite nonnegative real");
}

MapSpec MapSpec::affine(Matrix linear, Vector offset, double declared_modulus) {
    if (linear.rows() != linear.cols()) throw std::invalid_argument("affine map: matrix must be square");
    if (offset.size() != linear.rows()) throw std::invalid_argument("affine map: offset size mismatch");
    if (!all_finite(linear) || !all_finite(offset)) throw std::invalid_argument("affine map: non-finite entry");
    const Eigen::Index d = linear.cols();
    return MapSpec(AffineMap{std::move(linear), std::move(offset)}, declared_modulus, d);
}

MapSpec MapSpec::projection(Region region) {
    const Eigen::Index d = region.dimension();
    return MapSpec(ProjectionMap{std::move(region)}, 1.0, d);
}

MapSpec MapSpec::contraction_toward(Vector target, double beta) {
    if (!(beta >= 0.0 && beta < 1.0))
        throw std::invalid_argument("contraction_toward: beta must lie in [0, 1)");
    if (!all_finite(target)) throw std::invalid_argument("contraction_toward: non-finite target");
    const Eigen::Index d = target.size();
    return MapSpec(ContractionToward{std::move(target), beta}, beta, d);
}

MapSpec MapSpec::compose(std::vector<MapSpec> maps, std::optional<double> declared_modulus) {
    if (maps.empty()) throw std::invalid_argument("compose: at least one map required");
    const Eigen::Index d = maps.front().dimension();
    double product = 1.0;
    for (const auto& m : maps) {
        if (m.dimension() != d) throw std::invalid_argument("compose: member dimension mismatch");
        product *= m.declared_modulus();
    }
    return MapSpec(ComposeMap{std::move(maps)}, declared_modulus.value_or(product), d);
}

MapSpec MapSpec::convex_combo(std::vector<double> weights, std::vector<MapSpec> maps,
                              std::optional<double> declared_modulus) {
    if (maps.empty() || weights.size() != maps.size())
        throw std::invalid_argument("convex_combo: weights and maps must be nonempty and aligned");
    const Eigen::Index d = maps.front().dimension();
    double sum = 0.0;
    double bound = 0.0;
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (maps[i].dimension() != d) throw std::invalid_argument("convex_combo: member dimension mismatch");
        if (!(weights[i] >= 0.0)) throw std::invalid_argument("convex_combo: weights must be nonnegative");
        sum += weights[i];
        bound += weights[i] * maps[i].declared_modulus();
    }
    if (std::abs(sum - 1.0) > 1e-12) throw std::invalid_argument("convex_combo: weights must sum to 1");
    return MapSpec(ConvexComboMap{std::move(weights), std::move(maps)}, declared_modulus.value_or(bound), d);
}

Vector MapSpec::operator()(const Vector& x) const {
    if (x.size() != dimension_) throw std::invalid_argument("map: vector dimension mismatch");
    return std::visit(
        [&x](const auto& n) -> Vector {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AffineMap>) {
                return n.linear * x + n.offset;
            } else if constexpr (std::is_same_v<T, ProjectionMap>) {
                return n.region.project(x);
            } else if constexpr (std::is_same_v<T, ContractionToward>) {
                return n.beta * x + (1.0 - n.beta) * n.target;
            } else if constexpr (std::is_same_v<T, ComposeMap>) {
                Vector v = x;
                for (auto it = n.maps.rbegin(); it != n.maps.rend(); ++it) v = (*it)(v);
                return v;
            } else {
                Vector v = Vector::Zero(x.size());
                for (std::size_t i = 0; i < n.maps.size(); ++i) v += n.weights[i] * n.maps[i](x);
                return v;
            }
        },
        node_);
}

std::optional<AffineMap> as_affine(const MapSpec& map) {
    return std::visit(
        [&map](const auto& n) -> std::optional<AffineMap> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AffineMap>) {
                return n;
            } else if constexpr (std::is_same_v<T, ContractionToward>) {
                const Eigen::Index d = n.target.size();
                return AffineMap{n.beta * Matrix::Identity(d, d), (1.0 - n.beta) * n.target};
            } else if constexpr (std::is_same_v<T, ComposeMap>) {
                const Eigen::Index d = map.dimension();
                Matrix m = Matrix::Identity(d, d);
                Vector b = Vector::Zero(d);
                // Innermost map acts first: fold from the back.
                for (auto it = n.maps.rbegin(); it != n.maps.rend(); ++it) {
                    auto part = as_affine(*it);
                    if (!part) return std::nullopt;
                    m = part->linear * m;
                    b = part->linear * b + part->offset;
                }
                return AffineMap{std::move(m), std::move(b)};
            } else if constexpr (std::is_same_v<T, ConvexComboMap>) {
                const Eigen::Index d = map.dimension();
                Matrix m = Matrix::Zero(d, d);
                Vector b = Vector::Zero(d);
                for (std::size_t i = 0; i < n.maps.size(); ++i) {
                    auto part = as_affine(n.maps[i]);
                    if (!part) return std::nullopt;
                    m += n.weights[i] * part->linear;
                    b += n.weights[i] * part->offset;
                }
                return AffineMap{std::move(m), std::move(b)};
            } else {
                return std::nullopt;
            }
        },
        map.node());
}

namespace {

FixedSet fixed_set_of_affine(const AffineMap& a) {
    const Eigen::Index d = a.linear.cols();
    const Matrix s = Matrix::Identity(d, d) - a.linear;
    Eigen::FullPivLU<Matrix> lu(s);
    FixedSet out;
    if (lu.rank() == d) {
        out.kind = FixedSet::Kind::ExplicitPoint;
        out.point = lu.solve(a.offset);
        return out;
    }
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(s);
    const Vector particular = cod.solve(a.offset);
    if ((s * particular - a.offset).norm() > 1e-10 * (1.0 + a.offset.norm())) {
        out.kind = FixedSet::Kind::Empty;
        return out;
    }
    out.kind = FixedSet::Kind::AffineSubspace;
    out.base = particular;
    out.basis = orthonormalize(lu.kernel());
    return out;
}

bool same_explicit_point(const FixedSet& a, const FixedSet& b) {
    return a.kind == FixedSet::Kind::ExplicitPoint && b.kind == FixedSet::Kind::ExplicitPoint &&
           (a.point - b.point).norm() <= 1e-12 * (1.0 + a.point.norm());
}

}  // namespace

FixedSet fixed_set_oracle(const MapSpec& map) {
    if (const auto* p = std::get_if<ProjectionMap>(&map.node())) {
        FixedSet out;
        out.kind = FixedSet::Kind::RegionSet;
        out.region = p->region;
        return out;
    }
    if (const auto* c = std::get_if<ContractionToward>(&map.node())) {
        FixedSet out;
        out.kind = FixedSet::Kind::ExplicitPoint;
        out.point = c->target;
        return out;
    }
    if (auto aff = as_affine(map)) return fixed_set_of_affine(*aff);

    // Composite trees containing projections: only a shared declared fixed
    // set transfers to the composite.
    const std::vector<MapSpec>* children = nullptr;
    if (const auto* cm = std::get_if<ComposeMap>(&map.node())) children = &cm->maps;
    if (const auto* cc = std::get_if<ConvexComboMap>(&map.node())) children = &cc->maps;
    FixedSet out;
    if (!children) return out;
    std::vector<FixedSet> parts;
    parts.reserve(children->size());
    for (const auto& child : *children) parts.push_back(fixed_set_oracle(child));
    bool all_same_point = true;
    bool all_same_region = true;
    for (const auto& p : parts) {
        all_same_point = all_same_point && same_explicit_point(parts.front(), p);
        all_same_region = all_same_region && p.kind == FixedSet::Kind::RegionSet &&
                          same_region(*parts.front().region, *p.region);
    }
    if (all_same_point) return parts.front();
    if (all_same_region) return parts.front();
    return out;
}

std::vector<Vector> sample_fixed_set(const FixedSet& fs, const Region& enclosing, int count,
                                     std::uint64_t seed) {
    std::vector<Vector> out;
    if (count <= 0) return out;
    switch (fs.kind) {
        case FixedSet::Kind::ExplicitPoint:
            if (enclosing.contains(fs.point, 1e-8)) out.push_back(fs.point);
            return out;
        case FixedSet::Kind::RegionSet: {
            SplitMix64 rng(derive_seed(seed, 101, 0));
            long attempts = 0;
            const long cap = 200L * count;
            while (static_cast<int>(out.size()) < count && attempts++ < cap) {
                Vector x = sample_in_region(*fs.region, rng);
                if (enclosing.contains(x, 1e-10)) out.push_back(std::move(x));
            }
            return out;
        }
        case FixedSet::Kind::AffineSubspace: {
            if (fs.basis.cols() == 0) {
                if (enclosing.contains(fs.base, 1e-8)) out.push_back(fs.base);
                return out;
            }
            SplitMix64 rng(derive_seed(seed, 102, 0));
            double reach = (fs.base - enclosing.center()).norm();
            reach += enclosing.kind() == Region::Kind::Ball ? enclosing.radius() : enclosing.halfwidths().norm();
            long attempts = 0;
            const long cap = 1000L * count;
            while (static_cast<int>(out.size()) < count && attempts++ < cap) {
                Vector t(fs.basis.cols());
                for (Eigen::Index i = 0; i < t.size(); ++i) t(i) = rng.uniform(-reach, reach);
                Vector x = fs.base + fs.basis * t;
                if (enclosing.contains(x, 1e-10)) out.push_back(std::move(x));
            }
            return out;
        }
        default:
            return out;
    }
}

namespace {

// Exact Lipschitz modulus of an affine map through the seminorm q = |A.|:
// sup over q(u) <= 1 of q(M u).  Infinite when M sends ker(A) outside
// ker(A); otherwise the spectral norm of A M V_r diag(1/sigma).
double exact_affine_modulus(const AffineMap& aff, const Seminorm& q) {
    if (q.rank() == 0) return 0.0;
    const Matrix am = q.matrix() * aff.linear;
    if (q.kernel_basis().cols() > 0) {
        const double leak = (am * q.kernel_basis()).norm();
        if (leak > 1e-12 * (1.0 + am.norm())) return std::numeric_limits<double>::infinity();
    }
    Matrix induced = am * q.row_space_basis();
    for (Eigen::Index c = 0; c < induced.cols(); ++c) induced.col(c) /= q.singular_values()(c);
    Eigen::JacobiSVD<Matrix> svd(induced);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

}  // namespace

ModulusReport verify_modulus(const MapSpec& map, const SeminormFamily& family, const Region& domain,
                             int n_pairs, std::uint64_t seed, ExecPolicy policy) {
    if (n_pairs < 2) throw std::invalid_argument("verify_modulus: need at least 2 sample pairs");
    if (family.dimension() != map.dimension() || domain.dimension() != map.dimension())
        throw std::invalid_argument("verify_modulus: dimension mismatch");

    const std::size_t nq = family.size();
    const std::size_t n = static_cast<std::size_t>(n_pairs);
    // Per-pair ratios, NaN marking pairs that fall inside ker(q).  Filled
    // index-by-index so Serial and Parallel agree bit for bit.
    std::vector<double> ratios(n * nq);
    for_each_index(n, policy, [&](std::size_t i) {
        SplitMix64 rng(derive_seed(seed, 7, i));
        const Vector x = sample_in_region(domain, rng);
        const Vector y = sample_in_region(domain, rng);
        const Vector tx = map(x);
        const Vector ty = map(y);
        for (std::size_t k = 0; k < nq; ++k) {
            const double den = family[k](x - y);
            ratios[i * nq + k] =
                den < 1e-12 ? std::numeric_limits<double>::quiet_NaN() : family[k](tx - ty) / den;
        }
    });

    const auto aff = as_affine(map);
    ModulusReport report;
    report.declared = map.declared_modulus();
    for (std::size_t k = 0; k < nq; ++k) {
        SeminormModulus m;
        m.label = family[k].label();
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ratios[i * nq + k];
            if (std::isnan(r)) continue;
            ++m.pairs_used;
            m.estimate = std::max(m.estimate, r);
        }
        m.inconclusive = (m.pairs_used == 0);
        if (aff) m.exact = exact_affine_modulus(*aff, family[k]);
        m.violated = m.estimate > report.declared + 1e-9 ||
                     (m.exact && *m.exact > report.declared + 1e-9);
        report.violation = report.violation || m.violated;
        report.inconclusive = report.inconclusive || m.inconclusive;
        report.per_seminorm.push_back(std::move(m));
    }
    return report;
}

}  // namespace fpt
