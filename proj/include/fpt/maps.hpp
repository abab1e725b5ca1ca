#pragma once

#include "fpt/parallel.hpp"
#include "fpt/space.hpp"

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

namespace fpt {

class MapSpec;

struct AffineMap {
    Matrix linear;
    Vector offset;
};

struct ProjectionMap {
    Region region;
};

/// x -> beta x + (1 - beta) target; a contraction with modulus beta under
/// every seminorm.  beta = 0 is the constant map at target.
struct ContractionToward {
    Vector target;
    double beta;
};

/// compose({f1, f2, ..., fk}) applies fk first: x -> f1(f2(...fk(x))).
struct ComposeMap {
    std::vector<MapSpec> maps;
};

struct ConvexComboMap {
    std::vector<double> weights;
    std::vector<MapSpec> maps;
};

/// Declarative operator with a declared Lipschitz bound that downstream
/// certificates rely on.  The bound is uniform over the seminorm family:
/// <= 1 claims nonexpansive, < 1 claims a contraction with that modulus.
/// verify_modulus audits the claim per seminorm.
class MapSpec {
public:
    using Node = std::variant<AffineMap, ProjectionMap, ContractionToward, ComposeMap, ConvexComboMap>;

    static MapSpec affine(Matrix linear, Vector offset, double declared_modulus);
    static MapSpec projection(Region region);
    static MapSpec contraction_toward(Vector target, double beta);
    static MapSpec compose(std::vector<MapSpec> maps, std::optional<double> declared_modulus = {});
    static MapSpec convex_combo(std::vector<double> weights, std::vector<MapSpec> maps,
                                std::optional<double> declared_modulus = {});

    Vector operator()(const Vector& x) const;

    double declared_modulus() const { return declared_modulus_; }
    Eigen::Index dimension() const { return dimension_; }
    const Node& node() const { return node_; }

private:
    MapSpec(Node node, double declared_modulus, Eigen::Index dimension);
    Node node_;
    double declared_modulus_ = 1.0;
    Eigen::Index dimension_ = 0;
};

/// Flattens affine-representable trees (affine, contraction_toward, and
/// compositions / convex combinations thereof) to x -> linear x + offset.
std::optional<AffineMap> as_affine(const MapSpec& map);

/// Description of Fix(T) for the declared map kinds.
struct FixedSet {
    enum class Kind { ExplicitPoint, AffineSubspace, RegionSet, Empty, Unknown };
    Kind kind = Kind::Unknown;
    Vector point;                       ///< ExplicitPoint
    Vector base;                        ///< AffineSubspace
    Matrix basis;                       ///< AffineSubspace, orthonormal columns
    std::optional<Region> region;       ///< RegionSet
};

FixedSet fixed_set_oracle(const MapSpec& map);

/// Up to `count` fixed points inside `enclosing` (seeded, reproducible).
/// An explicit point yields a single sample; subspaces are sampled by
/// rejection against the region.
std::vector<Vector> sample_fixed_set(const FixedSet& fs, const Region& enclosing, int count,
                                     std::uint64_t seed);

/// Per-seminorm Lipschitz audit of a declared map.
struct SeminormModulus {
    std::string label;
    double estimate = 0.0;              ///< max sampled ratio q(Tx - Ty) / q(x - y)
    std::optional<double> exact;        ///< operator bound through A, affine maps only
    long pairs_used = 0;
    bool inconclusive = false;          ///< every sampled pair fell in ker(q)
    bool violated = false;              ///< estimate or exact exceeds declared + 1e-9
};

struct ModulusReport {
    std::vector<SeminormModulus> per_seminorm;
    double declared = 1.0;
    bool violation = false;
    bool inconclusive = false;
};

ModulusReport verify_modulus(const MapSpec& map, const SeminormFamily& family, const Region& domain,
                             int n_pairs, std::uint64_t seed, ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace fpt
