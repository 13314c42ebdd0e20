#pragma once

#include "copmarkov/chain.hpp"
#include "copmarkov/copula.hpp"
#include "copmarkov/report.hpp"

#include <optional>
#include <vector>

namespace copmarkov {

enum class BandwidthVariant { Empirical, Model };

/// Threshold below which |mean(Y)| or |lambda_hat_k| is treated as zero.
inline constexpr double kDegenerateMeanThreshold = 1e-6;

/// Kernel-smoothed estimate of one parameter.
struct KernelEstimate {
    double raw = 0.0;
    double bandwidth = 0.0;
    double corrected = 0.0;  ///< raw * sqrt(1 + bandwidth^2)
    Interval interval;
    BandwidthVariant variant = BandwidthVariant::Empirical;
};

/// Y_i = phi_k(U_i) phi_k(U_{i-1}), i = 1..n. Throws EmptyChain.
[[nodiscard]] Vector transform_series(const Vector& path, const BasisFunctionId& id);

/**
 * @brief h = [mean(Y^2) / (mean(Y)^2 n sqrt 2)]^{1/5}.
 * Throws DegenerateMean when |mean(Y)| < threshold.
 */
[[nodiscard]] double empirical_bandwidth(const Vector& y, double threshold = kDegenerateMeanThreshold);

/**
 * @brief Model second moment E[Y_k^2] = 1 + sum_z lambda_z (int phi_z phi_k^2)^2 of parameter k.
 *
 * Sine and SineCosine give 1 + lambda2/2 for the first cosine and first sine
 * term and 1 for the others; Legendre gives 1 + 4 lambda2/5 and 1 + 20 lambda2/49.
 */
[[nodiscard]] double model_second_moment(Family family, Eigen::Index k, const Vector& lambdas);

/**
 * @brief h_k = [E[Y_k^2] / (lambda_k^2 n sqrt 2)]^{1/5} with the model second moment.
 * Throws NonInteriorSpec for non-interior lambdas and DegenerateMean when |lambda_k| < threshold.
 */
[[nodiscard]] double model_bandwidth(Family family, Eigen::Index k, const Vector& lambdas, Eigen::Index n,
                                     double threshold = kDegenerateMeanThreshold);

/**
 * @brief Gaussian-kernel estimate raw = (1/(n h)) sum Y_i exp(-(X_i/h)^2 / 2).
 *
 * The interval is corrected -/+ z_{alpha/2} sqrt(m2 / (n h sqrt 2)), where m2 is
 * `second_moment` when given (model variant) and mean(Y^2) otherwise.
 * Throws LengthMismatch when noise and Y differ in length.
 */
[[nodiscard]] KernelEstimate robust_estimate(const Vector& y, double h, const Vector& noise, double alpha,
                                             std::optional<double> second_moment = std::nullopt);

/**
 * @brief Both-variant driver over all family parameters.
 *
 * One noise vector (length n) is shared by every parameter. The model variant
 * evaluates its bandwidths at the moment estimate, projected into the region
 * interior when necessary.
 */
[[nodiscard]] std::vector<KernelEstimate> robust_estimates(const Vector& path, Family family,
                                                           BandwidthVariant variant, const Vector& noise,
                                                           double alpha);

/// Report with corrected estimates, diagonal sigma m2 / (h sqrt 2) and bandwidths.
[[nodiscard]] EstimateReport robust_report(const Vector& path, Family family, BandwidthVariant variant,
                                           const Vector& noise, double alpha);

}  // namespace copmarkov
