#pragma once

#include "copmarkov/chain.hpp"
#include "copmarkov/copula.hpp"
#include "copmarkov/report.hpp"

namespace copmarkov {

struct MleOptions {
    double tol = 1e-8;  ///< per-observation tolerance on the gradient norm and on the step length
    int max_iterations = 500;
};

struct MleResult {
    Family family = Family::Sine;
    Vector estimates;
    double loglik = 0.0;
    Matrix information;  ///< observed information I_n at the estimate
    bool converged = false;
    int iterations = 0;
    bool at_boundary = false;
    Eigen::Index n = 0;
};

/**
 * @brief Coefficient functions g_j(U_i, U_{i-1}) = phi_j(U_i) phi_j(U_{i-1}) as an n x s matrix,
 * so that c(U_i, U_{i-1}) = 1 + (G params)_i.
 */
[[nodiscard]] Matrix pair_features(const Vector& path, Family family);

/// sum_i ln c(U_i, U_{i-1}); throws NonPositiveDensity when some c <= 0.
[[nodiscard]] double log_likelihood(const Vector& params, const Vector& path, Family family);

/// Gradient of log_likelihood.
[[nodiscard]] Vector score(const Vector& params, const Vector& path, Family family);

/// I_n(params) = sum_i g g^T / c^2 (the negative Hessian of the log-likelihood).
[[nodiscard]] Matrix observed_information(const Vector& params, const Vector& path, Family family);

/**
 * @brief Constrained maximum likelihood over the family region.
 *
 * Log-barrier Newton method started at the zero vector: one barrier term per
 * half-space of the weighted-L1 region, barrier weight reduced tenfold per
 * stage, then unconstrained Newton polishing when the optimum is interior.
 * Throws DomainError for n < 10 and OptimizerDiverged when no stage converges.
 */
[[nodiscard]] MleResult fit_mle(const Vector& path, Family family, const MleOptions& options = {});

/**
 * @brief estimate_k -/+ z_{alpha/2} sqrt([I_n^{-1}]_kk).
 * Throws BoundaryEstimate for boundary fits and SingularInformation when I_n is not invertible.
 */
[[nodiscard]] IntervalList mle_confidence_intervals(const MleResult& result, double alpha);

/// Report with sigma = I_n; intervals are left empty for boundary fits.
[[nodiscard]] EstimateReport mle_report(const MleResult& result, double alpha);

}  // namespace copmarkov
