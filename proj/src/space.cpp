#include "fpt/space.hpp"

#include <algorithm>
#include <cmath>

namespace fpt {

bool all_finite(const Vector& v) { return v.allFinite(); }
bool all_finite(const Matrix& m) { return m.allFinite(); }

namespace {

// Rank cutoff relative to the largest singular value, matching the usual
// dense-LAPACK convention.
Eigen::Index numeric_rank(const Vector& sigma, Eigen::Index rows, Eigen::Index cols) {
    if (sigma.size() == 0) return 0;
    const double eps = std::numeric_limits<double>::epsilon();
    const double cut = static_cast<double>(std::max(rows, cols)) * eps * sigma(0);
    Eigen::Index r = 0;
    while (r < sigma.size() && sigma(r) > cut) ++r;
    return r;
}

}  // namespace

Seminorm::Seminorm(Matrix a, std::string label) : a_(std::move(a)), label_(std::move(label)) {
    if (a_.rows() == 0 || a_.cols() == 0) throw std::invalid_argument("seminorm '" + label_ + "': empty matrix");
    if (!all_finite(a_)) throw std::invalid_argument("seminorm '" + label_ + "': non-finite matrix entry");
    gram_ = a_.transpose() * a_;
    Eigen::JacobiSVD<Matrix> svd(a_, Eigen::ComputeFullV);
    rank_ = numeric_rank(svd.singularValues(), a_.rows(), a_.cols());
    row_space_ = svd.matrixV().leftCols(rank_);
    kernel_ = svd.matrixV().rightCols(a_.cols() - rank_);
    sigma_ = svd.singularValues().head(rank_);
}

double Seminorm::operator()(const Vector& x) const {
    if (x.size() != a_.cols())
        throw std::invalid_argument("seminorm '" + label_ + "': vector of length " + std::to_string(x.size()) +
                                    " in dimension " + std::to_string(a_.cols()));
    return (a_ * x).norm();
}

SeminormFamily::SeminormFamily(std::vector<Seminorm> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("seminorm family: at least one member required");
    const Eigen::Index d = members_.front().dimension();
    Eigen::Index total_rows = 0;
    for (const auto& q : members_) {
        if (q.dimension() != d)
            throw std::invalid_argument("seminorm family: member '" + q.label() + "' has mismatched dimension");
        total_rows += q.matrix().rows();
    }
    Matrix stacked(total_rows, d);
    Eigen::Index row = 0;
    for (const auto& q : members_) {
        stacked.middleRows(row, q.matrix().rows()) = q.matrix();
        row += q.matrix().rows();
    }
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
    const Eigen::Index r = numeric_rank(svd.singularValues(), stacked.rows(), stacked.cols());
    joint_kernel_ = svd.matrixV().rightCols(d - r);
    separated_ = (r == d);
}

double SeminormFamily::sup(const Vector& x) const {
    if (!separated_)
        throw ConfigurationError("sup-seminorm requested for an unseparated family (joint kernel is nontrivial)");
    double m = 0.0;
    for (const auto& q : members_) m = std::max(m, q(x));
    return m;
}

std::vector<double> SeminormFamily::values(const Vector& x) const {
    std::vector<double> out;
    out.reserve(members_.size());
    for (const auto& q : members_) out.push_back(q(x));
    return out;
}

Region Region::ball(Vector center, double radius) {
    if (!all_finite(center)) throw std::invalid_argument("region: non-finite center");
    if (!(radius > 0.0)) throw std::invalid_argument("region: ball radius must be positive");
    Region r;
    r.kind_ = Kind::Ball;
    r.center_ = std::move(center);
    r.radius_ = radius;
    return r;
}

Region Region::box(Vector center, Vector halfwidths) {
    if (!all_finite(center) || !all_finite(halfwidths)) throw std::invalid_argument("region: non-finite data");
    if (center.size() != halfwidths.size()) throw std::invalid_argument("region: center/halfwidth size mismatch");
    if ((halfwidths.array() <= 0.0).any()) throw std::invalid_argument("region: box halfwidths must be positive");
    Region r;
    r.kind_ = Kind::Box;
    r.center_ = std::move(center);
    r.halfwidths_ = std::move(halfwidths);
    return r;
}

bool Region::contains(const Vector& x, double tol) const {
    if (x.size() != center_.size()) throw std::invalid_argument("region: dimension mismatch");
    if (kind_ == Kind::Ball) return (x - center_).norm() <= radius_ + tol;
    return ((x - center_).cwiseAbs().array() <= halfwidths_.array() + tol).all();
}

Vector Region::project(const Vector& x) const {
    if (x.size() != center_.size()) throw std::invalid_argument("region: dimension mismatch");
    if (kind_ == Kind::Ball) {
        const Vector delta = x - center_;
        const double n = delta.norm();
        if (n <= radius_) return x;
        return center_ + delta * (radius_ / n);
    }
    Vector out = x;
    for (Eigen::Index i = 0; i < out.size(); ++i)
        out(i) = std::clamp(out(i), center_(i) - halfwidths_(i), center_(i) + halfwidths_(i));
    return out;
}

}  // namespace fpt
