#pragma once

#include "copmarkov/copula.hpp"
#include "copmarkov/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace copmarkov {

enum class Method { Moment, Mle, RobustEmpirical, RobustModel };

[[nodiscard]] std::string to_string(Method method);
[[nodiscard]] Method parse_method(std::string_view name);

/**
 * @brief Point estimates with their uncertainty, as produced by any estimator.
 *
 * `sigma` is the asymptotic covariance of sqrt(n)(estimate - truth) for the
 * moment estimator, the observed information I_n for the MLE, and a diagonal
 * of per-parameter variances sigma_k^2 = E[Y^2] / (h sqrt 2) for the kernel
 * estimators (whose bandwidths are recorded alongside).
 */
struct EstimateReport {
    Method method = Method::Moment;
    std::optional<Family> family;
    std::vector<std::string> parameter_names;
    Vector estimates;
    Matrix sigma;
    IntervalList intervals;
    double alpha = 0.05;
    Eigen::Index n = 0;
    std::vector<double> bandwidths;  ///< kernel estimators only
    bool at_boundary = false;        ///< MLE only
};

/// JSON document with method, family, parameters, estimates, sigma (row-major), intervals, alpha, n.
[[nodiscard]] std::string to_json(const EstimateReport& report, int indent = 2);

/// Parses a document produced by to_json. Throws ParseError.
[[nodiscard]] EstimateReport report_from_json(std::string_view text);

}  // namespace copmarkov
