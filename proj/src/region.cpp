#include "copmarkov/region.hpp"

#include "copmarkov/error.hpp"

#include <algorithm>
#include <numeric>

namespace copmarkov {

WeightedL1Region::WeightedL1Region(Vector weights, double radius)
    : weights_(std::move(weights)), radius_(radius)
{
    if (weights_.size() == 0 || (weights_.array() <= 0.0).any() || !(radius_ > 0.0)) {
        throw Error(ErrorCode::DomainError, "weighted L1 region needs positive weights and radius");
    }
}

double WeightedL1Region::weighted_norm(const Vector& x) const
{
    if (x.size() != weights_.size()) {
        throw Error(ErrorCode::LengthMismatch, "parameter vector has the wrong dimension");
    }
    return weights_.dot(x.cwiseAbs());
}

double WeightedL1Region::boundary_distance(const Vector& x) const
{
    const double s = slack(x);
    if (s < 0.0) {
        return -(x - project(x)).norm();
    }
    // The closest face has normal sign(x) * w; faces are reached by moving
    // along it, and coordinate planes never bound the region.
    return s / weights_.norm();
}

Vector WeightedL1Region::project(const Vector& x) const { return project_weighted_l1(x, weights_, radius_); }

Vector WeightedL1Region::project_interior(const Vector& x, double margin) const
{
    const double shrunk = radius_ - margin * weights_.norm();
    if (shrunk <= 0.0) {
        throw Error(ErrorCode::DomainError, "margin exceeds the region's inradius");
    }
    return project_weighted_l1(x, weights_, shrunk);
}

Matrix WeightedL1Region::halfspace_normals() const
{
    const auto s = weights_.size();
    const Eigen::Index count = Eigen::Index{1} << s;
    Matrix normals(count, s);
    for (Eigen::Index pattern = 0; pattern < count; ++pattern) {
        for (Eigen::Index i = 0; i < s; ++i) {
            normals(pattern, i) = ((pattern >> i) & 1) ? -weights_[i] : weights_[i];
        }
    }
    return normals;
}

Vector project_weighted_l1(const Vector& x, const Vector& weights, double radius)
{
    if (x.size() != weights.size()) {
        throw Error(ErrorCode::LengthMismatch, "parameter vector has the wrong dimension");
    }
    const Vector magnitude = x.cwiseAbs();
    if (weights.dot(magnitude) <= radius) {
        return x;
    }
    // Soft-threshold |x_i| by theta * w_i; theta solves sum w_i (|x_i| - theta w_i)_+ = radius.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(x.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return magnitude[a] / weights[a] > magnitude[b] / weights[b];
    });
    double weighted_sum = 0.0;
    double weight_sq = 0.0;
    double theta = 0.0;
    for (Eigen::Index idx : order) {
        const double candidate_sum = weighted_sum + weights[idx] * magnitude[idx];
        const double candidate_sq = weight_sq + weights[idx] * weights[idx];
        const double candidate_theta = (candidate_sum - radius) / candidate_sq;
        if (magnitude[idx] / weights[idx] <= candidate_theta) {
            break;
        }
        weighted_sum = candidate_sum;
        weight_sq = candidate_sq;
        theta = candidate_theta;
    }
    Vector out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double shrunk = std::max(magnitude[i] - theta * weights[i], 0.0);
        out[i] = x[i] < 0.0 ? -shrunk : shrunk;
    }
    return out;
}

}  // namespace copmarkov
