#pragma once

// Reference computations used only by the tests. Each one reaches the
// quantity of interest by a route that does not share code with the library
// path it checks.

#include "copmarkov/copula.hpp"
#include "copmarkov/numerics.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using copmarkov::Matrix;
using copmarkov::Vector;

/// Plain bisection to the given width.
inline double bisect(const std::function<double(double)>& f, double lo, double hi, double width = 1e-14)
{
    double flo = f(lo);
    while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Normal quantile by bisection on the complementary error function.
inline double normal_quantile(double p)
{
    return bisect([p](double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2) - p; }, -40.0, 40.0, 1e-13);
}

/// Shifted Legendre phi_k expanded from Rodrigues' formula, k <= 4.
inline double rodrigues_phi(int k, double x)
{
    const double y = 2.0 * x - 1.0;
    double p = 0.0;
    switch (k) {
    case 0: p = 1.0; break;
    case 1: p = y; break;
    case 2: p = (3.0 * y * y - 1.0) / 2.0; break;
    case 3: p = (5.0 * y * y * y - 3.0 * y) / 2.0; break;
    case 4: p = (35.0 * std::pow(y, 4) - 30.0 * y * y + 3.0) / 8.0; break;
    default: throw std::invalid_argument("rodrigues_phi: k <= 4 only");
    }
    return std::sqrt(2.0 * k + 1.0) * p;
}

/**
 * @brief Sigma of the moment estimator computed from the transition kernel.
 *
 * The chain's kernel is discretized on a Gauss-Legendre grid and the
 * autocovariances Gamma_m of Y_i = (phi_k(U_i) phi_k(U_{i-1}))_k are summed
 * directly: Sigma = Gamma_0 + sum_{m>=1} (Gamma_m + Gamma_m^T).
 */
inline Matrix kernel_sigma(const copmarkov::CopulaSpec& spec, int nodes = 64, int max_lag = 400)
{
    const copmarkov::Copula copula(spec);
    const auto& rule = copmarkov::numerics::gauss_legendre_01(nodes);
    const auto& ids = copula.ids();
    const auto s = static_cast<Eigen::Index>(ids.size());
    const Eigen::Index q = rule.nodes.size();
    const Vector& x = rule.nodes;
    const Vector& w = rule.weights;

    Matrix c(q, q);
    for (Eigen::Index a = 0; a < q; ++a) {
        for (Eigen::Index b = 0; b < q; ++b) {
            c(a, b) = copula.density(x[a], x[b]);
        }
    }
    const Matrix transition = c * w.asDiagonal();  // (P f)(x_a) = sum_b c(x_a, x_b) w_b f(x_b)

    Matrix phi(q, s);
    for (Eigen::Index a = 0; a < q; ++a) {
        for (Eigen::Index k = 0; k < s; ++k) {
            phi(a, k) = copmarkov::eval_phi(ids[static_cast<std::size_t>(k)], x[a]);
        }
    }
    // left(b, k) = phi_k(x_b) E[phi_k(U_0) | U_1 = x_b]; right(a, j) = phi_j(x_a) E[phi_j(U_1) | U_0 = x_a]
    Matrix left(q, s);
    Matrix right(q, s);
    for (Eigen::Index k = 0; k < s; ++k) {
        const Vector wphi = w.cwiseProduct(phi.col(k));
        left.col(k) = phi.col(k).cwiseProduct(c.transpose() * wphi);
        right.col(k) = phi.col(k).cwiseProduct(c * wphi);
    }
    const Vector lambdas = copula.coefficients();

    Matrix sigma(s, s);
    for (Eigen::Index k = 0; k < s; ++k) {
        for (Eigen::Index j = 0; j < s; ++j) {
            const Vector fu = phi.col(k).cwiseProduct(phi.col(j)).cwiseProduct(w);
            sigma(k, j) = fu.dot(c * fu) - lambdas[k] * lambdas[j];
        }
    }
    Matrix propagated = right;  // P^{m-1} right
    for (int m = 1; m <= max_lag; ++m) {
        Matrix gamma(s, s);
        for (Eigen::Index k = 0; k < s; ++k) {
            for (Eigen::Index j = 0; j < s; ++j) {
                gamma(k, j) = w.cwiseProduct(left.col(k)).dot(propagated.col(j)) - lambdas[k] * lambdas[j];
            }
        }
        sigma += gamma + gamma.transpose();
        if (gamma.cwiseAbs().maxCoeff() < 1e-17) {
            break;
        }
        propagated = transition * propagated;
    }
    return sigma;
}

/// Uniform random point strictly inside a weighted-L1 region, at most `fill` of the way to the boundary.
inline Vector random_interior(const copmarkov::WeightedL1Region& region, std::mt19937_64& gen, double fill = 0.95)
{
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> scale(0.0, fill);
    Vector x(region.dimension());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        x[i] = unit(gen);
    }
    const double norm = region.weighted_norm(x);
    return norm > 0.0 ? Vector(x * (scale(gen) * region.radius() / norm)) : x;
}

}  // namespace oracle
