#pragma once

#include "copmarkov/chain.hpp"
#include "copmarkov/copula.hpp"
#include "copmarkov/report.hpp"

#include <optional>
#include <span>
#include <vector>

namespace copmarkov {

/// Symmetric s x s covariance matrix of sqrt(n)(estimate - truth).
class SigmaMatrix {
public:
    /// Throws DomainError if `entries` is not square and symmetric within 1e-12.
    explicit SigmaMatrix(Matrix entries);

    [[nodiscard]] const Matrix& entries() const { return entries_; }
    [[nodiscard]] Eigen::Index size() const { return entries_.rows(); }
    [[nodiscard]] double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }

private:
    Matrix entries_;
};

struct TestResult {
    double statistic = 0.0;
    int df = 0;
    double critical_value = 0.0;
    double p_value = 1.0;
    bool reject = false;
    std::optional<double> normal_approximation;  ///< (statistic - s) / sqrt(2 s), independence test only
};

/// Number of consecutive pairs per unit of s required by independence_test.
inline constexpr Eigen::Index kIndependenceMinPairsPerDof = 30;

/// Plug-in margin (Euclidean) used when an estimate leaves the family region.
inline constexpr double kPlugInMargin = 1e-6;

/**
 * @brief lambda_hat_k = (1/n) sum_{i=1..n} phi_k(U_i) phi_k(U_{i-1}).
 * Throws EmptyChain when fewer than two values are given.
 */
[[nodiscard]] Vector estimate_lambda(const Vector& path, std::span<const BasisFunctionId> ids);
[[nodiscard]] Vector estimate_lambda(const ChainSample& chain, std::span<const BasisFunctionId> ids);

/// Estimates for a family's parameters, in family parameter order.
[[nodiscard]] Vector estimate_lambda(const Vector& path, Family family);

/// Spearman's rho of the copula; identified with lambda_hat_1.
[[nodiscard]] double spearman_rho(const Vector& path, Family family);

/**
 * @brief Closed-form Sigma of a family evaluated at `at`.
 *
 * For SineCosine the (1,3) entry includes the term -lambda1 mu1 lambda2 / (1 - lambda2)
 * that a direct evaluation of the covariance series produces.
 * Throws NonInteriorSpec unless `at` is interior to the family region.
 */
[[nodiscard]] SigmaMatrix asymptotic_sigma(Family family, const Vector& at);
[[nodiscard]] SigmaMatrix asymptotic_sigma(const CopulaSpec& spec);

/**
 * @brief Sigma for an arbitrary expansion from basis moment integrals.
 *
 * Sigma_kj = delta_kj + sum_z lambda_z b_zkj^2 - lambda_k lambda_j
 *          + 2 lambda_k lambda_j (int phi_k^2 phi_j^2 - 1)
 *          + 2 lambda_k lambda_j sum_z lambda_z / (1 - lambda_z) a_zk a_zj
 * with b_zkj = int phi_z phi_k phi_j and a_zk = b_zkk. The z-sum runs over `ids`.
 * Throws DivergentSeries if some |lambda_z| >= 1.
 */
[[nodiscard]] SigmaMatrix general_sigma(std::span<const BasisFunctionId> ids, const Vector& lambdas);

/// Nearest point at least kPlugInMargin inside the family region.
[[nodiscard]] Vector plug_in_point(Family family, const Vector& estimate);

/**
 * @brief lambda_hat_k -/+ z_{alpha/2} sqrt(Sigma_kk / n).
 * Throws NonPositiveVariance, DomainError for n < 2 or alpha outside (0,1).
 */
[[nodiscard]] IntervalList confidence_intervals(const Vector& estimate, const SigmaMatrix& sigma, Eigen::Index n,
                                                double alpha);

/**
 * @brief Q = n (est - null)^T Sigma^{-1} (est - null) against chi^2_alpha(s).
 * Throws SingularMatrix when Sigma is not invertible.
 */
[[nodiscard]] TestResult region_statistic(const Vector& estimate, const Vector& null_value, const SigmaMatrix& sigma,
                                          Eigen::Index n, double alpha);

/// First s basis functions used by the independence test; TrigFull interleaves cos and sin.
[[nodiscard]] std::vector<BasisFunctionId> independence_basis(BasisFamily family, int s);

/**
 * @brief Chi-square test of independence: n sum W_i^2 ~ chi^2(s) under H0.
 * Throws ChainTooShort when n < 30 s.
 */
[[nodiscard]] TestResult independence_test(const Vector& path, BasisFamily family, int s, double alpha);

/// Full moment-estimator report: estimates, plug-in Sigma and per-parameter intervals.
[[nodiscard]] EstimateReport moment_report(const Vector& path, Family family, double alpha);

}  // namespace copmarkov
