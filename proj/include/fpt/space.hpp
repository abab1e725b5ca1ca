#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace fpt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Thrown when an instance is structurally unusable (unseparated family,
/// modulus out of range, ...), as opposed to a bad argument.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

bool all_finite(const Vector& v);
bool all_finite(const Matrix& m);

/// A matrix seminorm q(x) = |A x|_2 on R^d.  The kernel of q is the
/// nullspace of A; q is a norm exactly when A has full column rank.
///
/// The SVD of A is taken once at construction so that rank decisions,
/// row-space projections and dual-seminorm evaluations are cheap and
/// consistent across every operation that touches this seminorm.
class Seminorm {
public:
    Seminorm(Matrix a, std::string label);

    double operator()(const Vector& x) const;

    const std::string& label() const { return label_; }
    const Matrix& matrix() const { return a_; }
    /// A^T A; the duality map of q is x -> gram() * x.
    const Matrix& gram() const { return gram_; }
    Eigen::Index dimension() const { return a_.cols(); }
    Eigen::Index rank() const { return rank_; }
    /// Orthonormal basis of the row space of A (d x rank).
    const Matrix& row_space_basis() const { return row_space_; }
    /// Orthonormal basis of ker(q) = null(A) (d x (d - rank)); empty when q is a norm.
    const Matrix& kernel_basis() const { return kernel_; }
    /// Nonzero singular values of A, aligned with row_space_basis() columns.
    const Vector& singular_values() const { return sigma_; }

private:
    Matrix a_;
    std::string label_;
    Matrix gram_;
    Matrix row_space_;
    Matrix kernel_;
    Vector sigma_;
    Eigen::Index rank_ = 0;
};

/// Finite ordered family of matrix seminorms sharing one ambient dimension.
/// The family is separated iff the joint kernel of all members is {0};
/// the separation audit runs at construction.
class SeminormFamily {
public:
    explicit SeminormFamily(std::vector<Seminorm> members);

    const std::vector<Seminorm>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    const Seminorm& operator[](std::size_t i) const { return members_[i]; }
    Eigen::Index dimension() const { return members_.front().dimension(); }

    bool is_separated() const { return separated_; }
    /// Orthonormal basis of the joint kernel; empty when separated.
    const Matrix& joint_kernel_basis() const { return joint_kernel_; }

    /// max_q q(x).  A norm when the family is separated; throws
    /// ConfigurationError otherwise since the value cannot certify limits.
    double sup(const Vector& x) const;

    /// Per-member values, in family order.
    std::vector<double> values(const Vector& x) const;

private:
    std::vector<Seminorm> members_;
    bool separated_ = false;
    Matrix joint_kernel_;
};

/// Closed convex bounded region (ball or axis-aligned box), the concrete C.
class Region {
public:
    enum class Kind { Ball, Box };

    static Region ball(Vector center, double radius);
    static Region box(Vector center, Vector halfwidths);

    Kind kind() const { return kind_; }
    const Vector& center() const { return center_; }
    double radius() const { return radius_; }
    const Vector& halfwidths() const { return halfwidths_; }
    Eigen::Index dimension() const { return center_.size(); }

    bool contains(const Vector& x, double tol = 1e-10) const;
    /// Euclidean metric projection onto the region; identity on members.
    Vector project(const Vector& x) const;

private:
    Region() = default;
    Kind kind_ = Kind::Ball;
    Vector center_;
    double radius_ = 0.0;
    Vector halfwidths_;
};

}  // namespace fpt
