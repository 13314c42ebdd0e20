#pragma once

#include "copmarkov/types.hpp"

#include <functional>

namespace copmarkov::numerics {

struct ToleranceConfig {
    double root_abs_tol = 1e-10;
    double quad_abs_tol = 1e-12;
    int max_iterations = 200;

    /// Throws DomainError unless all tolerances are positive and max_iterations >= 1.
    void validate() const;
};

using RealFunction = std::function<double(double)>;

/**
 * @brief Root of a continuous function on a sign-changing bracket.
 *
 * Illinois-modified regula falsi, falling back to bisection whenever a step
 * fails to halve the bracket. Terminates when the bracket is narrower than
 * root_abs_tol or an exact zero is hit. Endpoints whose residual is already
 * below root_abs_tol are returned directly.
 *
 * Throws NoSignChange or MaxIterationsExceeded.
 */
double find_root_bracketed(const RealFunction& f, double lo, double hi,
                           const ToleranceConfig& tol = {});

/// Gauss–Legendre rule on [0, 1] with the given number of nodes.
struct QuadratureRule {
    Vector nodes;
    Vector weights;
};

/// Nodes and weights from the Golub–Welsch eigenproblem, mapped to [0, 1]. Cached per size.
const QuadratureRule& gauss_legendre_01(int points);

/**
 * @brief Adaptive composite Gauss–Legendre integral over (0, 1).
 *
 * Each panel is integrated with a 32-point rule and compared against its two
 * halves; panels are split until the local discrepancy is within a width-
 * weighted share of quad_abs_tol. Throws MaxIterationsExceeded when more than
 * max_iterations splits are required.
 */
double integrate_01(const RealFunction& f, const ToleranceConfig& tol = {});

/// Distributions whose quantiles are needed for intervals and tests.
struct Distribution {
    enum class Kind { StandardNormal, ChiSquare };
    Kind kind = Kind::StandardNormal;
    int df = 1;

    static Distribution standard_normal() { return {Kind::StandardNormal, 1}; }
    static Distribution chi_square(int df) { return {Kind::ChiSquare, df}; }
};

double cdf(const Distribution& dist, double x);

/// Upper tail 1 - cdf, computed without cancellation.
double survival(const Distribution& dist, double x);

/// x with cdf(x) = p. Throws DomainError for p outside (0, 1) or df < 1.
double quantile(const Distribution& dist, double p);

/// Two-sided normal critical value z_{alpha/2}.
double normal_critical(double alpha);

/// Regularized lower incomplete gamma P(a, x).
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

}  // namespace copmarkov::numerics
