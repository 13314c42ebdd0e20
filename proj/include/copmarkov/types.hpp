#pragma once

#include <Eigen/Dense>

#include <vector>

namespace copmarkov {

/**
 * @brief Dense type aliases used throughout the library.
 */
template <typename Scalar_>
struct Types {
    using Scalar = Scalar_;
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
};

using Vector = Types<double>::Vector;
using Matrix = Types<double>::Matrix;

/// Closed interval (lower, upper).
struct Interval {
    double lower = 0.0;
    double upper = 0.0;

    [[nodiscard]] double length() const { return upper - lower; }
    [[nodiscard]] bool contains(double x) const { return lower <= x && x <= upper; }
};

using IntervalList = std::vector<Interval>;

}  // namespace copmarkov
