#include "copmarkov/numerics.hpp"

#include "copmarkov/error.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace copmarkov::numerics {

void ToleranceConfig::validate() const
{
    if (!(root_abs_tol > 0.0) || !(quad_abs_tol > 0.0)) {
        throw Error(ErrorCode::DomainError, "tolerances must be strictly positive");
    }
    if (max_iterations < 1) {
        throw Error(ErrorCode::DomainError, "max_iterations must be at least 1");
    }
}

double find_root_bracketed(const RealFunction& f, double lo, double hi, const ToleranceConfig& tol)
{
    tol.validate();
    if (lo > hi) {
        std::swap(lo, hi);
    }
    double flo = f(lo);
    double fhi = f(hi);
    if (std::abs(flo) <= tol.root_abs_tol && std::abs(flo) <= std::abs(fhi)) {
        return lo;
    }
    if (std::abs(fhi) <= tol.root_abs_tol) {
        return hi;
    }
    if (std::signbit(flo) == std::signbit(fhi)) {
        throw Error(ErrorCode::NoSignChange, "f(lo) and f(hi) have the same sign");
    }

    // Illinois variant of regula falsi; `side` remembers which end moved last.
    int side = 0;
    for (int iter = 0; iter < tol.max_iterations; ++iter) {
        const double width = hi - lo;
        if (width <= tol.root_abs_tol) {
            return std::abs(flo) < std::abs(fhi) ? lo : hi;
        }
        double x = (lo * fhi - hi * flo) / (fhi - flo);
        if (!(x > lo && x < hi) || iter % 3 == 2) {
            x = 0.5 * (lo + hi);
        }
        const double fx = f(x);
        if (fx == 0.0) {
            return x;
        }
        if (std::signbit(fx) == std::signbit(flo)) {
            lo = x;
            flo = fx;
            if (side == -1) {
                fhi *= 0.5;
            }
            side = -1;
        } else {
            hi = x;
            fhi = fx;
            if (side == +1) {
                flo *= 0.5;
            }
            side = +1;
        }
    }
    if (hi - lo <= tol.root_abs_tol) {
        return 0.5 * (lo + hi);
    }
    throw Error(ErrorCode::MaxIterationsExceeded, "root bracket did not shrink below tolerance");
}

const QuadratureRule& gauss_legendre_01(int points)
{
    if (points < 1) {
        throw Error(ErrorCode::DomainError, "quadrature rule needs at least one node");
    }
    static std::mutex mutex;
    static std::map<int, QuadratureRule> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(points); it != cache.end()) {
        return it->second;
    }

    // Golub–Welsch: the Jacobi matrix of the Legendre recurrence has the nodes
    // as eigenvalues; weights are 2 * (first eigenvector component)^2.
    Matrix jacobi = Matrix::Zero(points, points);
    for (int k = 1; k < points; ++k) {
        const double beta = k / std::sqrt(4.0 * k * k - 1.0);
        jacobi(k, k - 1) = beta;
        jacobi(k - 1, k) = beta;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi);
    QuadratureRule rule;
    rule.nodes = (solver.eigenvalues().array() + 1.0) * 0.5;
    rule.weights = solver.eigenvectors().row(0).transpose().array().square();
    return cache.emplace(points, std::move(rule)).first->second;
}

namespace {

constexpr int kPanelPoints = 32;

double panel(const RealFunction& f, const QuadratureRule& rule, double a, double b)
{
    const double width = b - a;
    double sum = 0.0;
    for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * f(a + width * rule.nodes[i]);
    }
    return sum * width;
}

}  // namespace

double integrate_01(const RealFunction& f, const ToleranceConfig& tol)
{
    tol.validate();
    const QuadratureRule& rule = gauss_legendre_01(kPanelPoints);

    struct Panel {
        double a, b, value;
    };
    std::vector<Panel> stack{{0.0, 1.0, panel(f, rule, 0.0, 1.0)}};
    double total = 0.0;
    int splits = 0;
    while (!stack.empty()) {
        const Panel p = stack.back();
        stack.pop_back();
        const double mid = 0.5 * (p.a + p.b);
        const double left = panel(f, rule, p.a, mid);
        const double right = panel(f, rule, mid, p.b);
        const double refined = left + right;
        if (std::abs(refined - p.value) <= tol.quad_abs_tol * (p.b - p.a)) {
            total += refined;
            continue;
        }
        if (++splits > tol.max_iterations) {
            throw Error(ErrorCode::MaxIterationsExceeded, "adaptive quadrature did not converge");
        }
        stack.push_back({p.a, mid, left});
        stack.push_back({mid, p.b, right});
    }
    return total;
}

// ---------------------------------------------------------------------------
// Distributions

namespace {

// Acklam's rational approximation; relative error below 1.2e-9 before refinement.
double normal_quantile_initial(double p)
{
    static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                             -2.759285104469687e+02, 1.383577518672690e+02,
                                             -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                             -1.556989798598866e+02, 6.680131188771972e+01,
                                             -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                             -2.400758277161838e+00, -2.549732539343734e+00,
                                             4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                             2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p)
{
    if (p == 0.5) {
        return 0.0;
    }
    double x = normal_quantile_initial(p);
    // Two Halley steps bring the approximation to full double precision.
    for (int i = 0; i < 2; ++i) {
        const double e = normal_cdf(x) - p;
        const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

void check_distribution(const Distribution& dist)
{
    if (dist.kind == Distribution::Kind::ChiSquare && dist.df < 1) {
        throw Error(ErrorCode::DomainError, "chi-square degrees of freedom must be >= 1");
    }
}

}  // namespace

double regularized_gamma_p(double a, double x)
{
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= a + 1.0) {
        return 1.0 - regularized_gamma_q(a, x);
    }
    // Series expansion.
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 10000; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::abs(term) < std::abs(sum) * 1e-17) {
            break;
        }
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double regularized_gamma_q(double a, double x)
{
    if (x <= 0.0) {
        return 1.0;
    }
    if (x < a + 1.0) {
        return 1.0 - regularized_gamma_p(a, x);
    }
    // Continued fraction, modified Lentz.
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 10000; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-17) {
            break;
        }
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

double cdf(const Distribution& dist, double x)
{
    check_distribution(dist);
    if (dist.kind == Distribution::Kind::StandardNormal) {
        return normal_cdf(x);
    }
    return regularized_gamma_p(0.5 * dist.df, 0.5 * x);
}

double survival(const Distribution& dist, double x)
{
    check_distribution(dist);
    if (dist.kind == Distribution::Kind::StandardNormal) {
        return normal_cdf(-x);
    }
    return regularized_gamma_q(0.5 * dist.df, 0.5 * x);
}

double quantile(const Distribution& dist, double p)
{
    check_distribution(dist);
    if (!(p > 0.0 && p < 1.0)) {
        throw Error(ErrorCode::DomainError, "probability must lie in (0, 1)");
    }
    if (dist.kind == Distribution::Kind::StandardNormal) {
        return normal_quantile(p);
    }

    double hi = std::max(1.0, static_cast<double>(dist.df));
    while (cdf(dist, hi) < p) {
        hi *= 2.0;
    }
    ToleranceConfig tol;
    tol.root_abs_tol = 1e-13 * hi;
    tol.max_iterations = 500;
    // Work with the smaller tail so that p near 1 keeps its precision.
    const bool upper = p > 0.5;
    const double target = upper ? 1.0 - p : p;
    return find_root_bracketed(
        [&](double x) { return upper ? target - survival(dist, x) : cdf(dist, x) - target; },
        0.0, hi, tol);
}

double normal_critical(double alpha)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error(ErrorCode::DomainError, "alpha must lie in (0, 1)");
    }
    return quantile(Distribution::standard_normal(), 1.0 - 0.5 * alpha);
}

}  // namespace copmarkov::numerics
