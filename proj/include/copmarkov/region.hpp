#pragma once

#include "copmarkov/types.hpp"

namespace copmarkov {

/**
 * @brief The convex set { x : sum_i w_i |x_i| <= radius } with w_i > 0.
 *
 * Every family's admissible parameter region has this shape: Sine and
 * SineCosine use unit weights and radius 1/2, Legendre uses weights (3, 5)
 * and radius 1.
 */
class WeightedL1Region {
public:
    WeightedL1Region(Vector weights, double radius);

    [[nodiscard]] const Vector& weights() const { return weights_; }
    [[nodiscard]] double radius() const { return radius_; }
    [[nodiscard]] Eigen::Index dimension() const { return weights_.size(); }

    [[nodiscard]] double weighted_norm(const Vector& x) const;

    /// radius - weighted_norm(x); positive inside.
    [[nodiscard]] double slack(const Vector& x) const { return radius_ - weighted_norm(x); }

    /// Euclidean distance from an interior point to the boundary (negative outside).
    [[nodiscard]] double boundary_distance(const Vector& x) const;

    /// Euclidean projection onto the region.
    [[nodiscard]] Vector project(const Vector& x) const;

    /**
     * @brief Nearest point lying at least `margin` (Euclidean) inside the boundary.
     * Points already that deep are returned unchanged.
     */
    [[nodiscard]] Vector project_interior(const Vector& x, double margin) const;

    /**
     * @brief The region as 2^s half-spaces a_j^T x <= radius, one per sign
     * pattern. Rows of the returned matrix are the a_j.
     */
    [[nodiscard]] Matrix halfspace_normals() const;

private:
    Vector weights_;
    double radius_;
};

/// Euclidean projection onto { x : sum_i w_i |x_i| <= radius }.
Vector project_weighted_l1(const Vector& x, const Vector& weights, double radius);

}  // namespace copmarkov
