#include "copmarkov/mle.hpp"

#include "copmarkov/error.hpp"
#include "copmarkov/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace copmarkov {

namespace {

void check_params(const Vector& params, Family family)
{
    if (params.size() != parameter_count(family)) {
        throw Error(ErrorCode::InvalidSpec, to_string(family) + " expects " + std::to_string(parameter_count(family)) +
                                                " parameters");
    }
}

Vector densities(const Matrix& g, const Vector& params)
{
    return (g * params).array() + 1.0;
}

void require_positive(const Vector& c)
{
    for (Eigen::Index i = 0; i < c.size(); ++i) {
        if (!(c[i] > 0.0)) {
            throw Error(ErrorCode::NonPositiveDensity,
                        "density " + std::to_string(c[i]) + " at pair " + std::to_string(i + 1));
        }
    }
}

double loglik_from(const Vector& c)
{
    return c.array().log().sum();
}

Matrix information_from(const Matrix& g, const Vector& c)
{
    const Vector w = c.array().square().inverse();
    Matrix info = g.transpose() * w.asDiagonal() * g;
    // Mirror the upper triangle so the result is symmetric bit for bit.
    info.triangularView<Eigen::StrictlyLower>() = info.transpose().triangularView<Eigen::StrictlyLower>();
    return info;
}

/// Log-barrier problem F(x) = -l(x)/n - mu sum_j ln(r - a_j^T x).
class BarrierProblem {
public:
    BarrierProblem(const Matrix& g, const WeightedL1Region& region)
        : g_(g), normals_(region.halfspace_normals()), radius_(region.radius()),
          scale_(1.0 / static_cast<double>(std::max<Eigen::Index>(g.rows(), 1)))
    {
    }

    /// Infinity outside the domain (a slack or a density that is not positive).
    [[nodiscard]] double value(const Vector& x, double mu) const
    {
        const Vector slack = slacks(x);
        if ((slack.array() <= 0.0).any()) {
            return std::numeric_limits<double>::infinity();
        }
        const Vector c = densities(g_, x);
        if ((c.array() <= 0.0).any()) {
            return std::numeric_limits<double>::infinity();
        }
        return -scale_ * loglik_from(c) - mu * slack.array().log().sum();
    }

    void derivatives(const Vector& x, double mu, Vector& grad, Matrix& hess) const
    {
        const Vector c = densities(g_, x);
        const Vector inv_c = c.array().inverse();
        grad = -scale_ * (g_.transpose() * inv_c);
        hess = scale_ * information_from(g_, c);
        if (mu > 0.0) {
            const Vector inv_slack = slacks(x).array().inverse();
            grad += mu * (normals_.transpose() * inv_slack);
            hess += mu * (normals_.transpose() * inv_slack.array().square().matrix().asDiagonal() * normals_);
        }
    }

    [[nodiscard]] Vector slacks(const Vector& x) const
    {
        return radius_ - (normals_ * x).array();
    }

    [[nodiscard]] Eigen::Index constraint_count() const { return normals_.rows(); }

private:
    const Matrix& g_;
    Matrix normals_;
    double radius_;
    double scale_;
};

struct NewtonOutcome {
    bool converged = false;
    double last_step = 0.0;
};

/**
 * Damped Newton on the barrier problem at fixed mu. Stops when half the
 * squared Newton decrement drops below `decrement_tol` or the gradient norm
 * drops below `grad_tol`.
 */
NewtonOutcome newton_stage(const BarrierProblem& problem, Vector& x, double mu, double decrement_tol,
                           double grad_tol, int& iterations, int max_iterations)
{
    NewtonOutcome outcome;
    Vector grad;
    Matrix hess;
    while (iterations < max_iterations) {
        problem.derivatives(x, mu, grad, hess);
        if (!grad.allFinite() || !hess.allFinite()) {
            throw Error(ErrorCode::OptimizerDiverged, "non-finite derivatives during the MLE search");
        }
        const Eigen::LDLT<Matrix> ldlt(hess);
        Vector step = -ldlt.solve(grad);
        if (ldlt.info() != Eigen::Success || !step.allFinite() || grad.dot(step) > 0.0) {
            step = -grad;  // fall back to steepest descent
        }
        const double decrement = -grad.dot(step);
        ++iterations;
        if (decrement / 2.0 <= decrement_tol || grad.norm() <= grad_tol) {
            outcome.converged = true;
            outcome.last_step = step.norm();
            return outcome;
        }
        const double f0 = problem.value(x, mu);
        // Below this decrement the Armijo test only sees rounding noise in F;
        // take the full step when it stays feasible.
        if (decrement <= 1e-12 * std::max(1.0, std::abs(f0)) && std::isfinite(problem.value(x + step, mu))) {
            x += step;
            outcome.last_step = step.norm();
            continue;
        }
        double t = 1.0;
        Vector candidate = x + step;
        double f1 = problem.value(candidate, mu);
        while (!(f1 <= f0 - 0.25 * t * decrement) && t > 1e-20) {
            t *= 0.5;
            candidate = x + t * step;
            f1 = problem.value(candidate, mu);
        }
        if (t <= 1e-20) {
            // No further decrease is representable; x is as good as it gets at this mu.
            outcome.converged = true;
            outcome.last_step = 0.0;
            return outcome;
        }
        outcome.last_step = t * step.norm();
        x = candidate;
    }
    return outcome;
}

}  // namespace

Matrix pair_features(const Vector& path, Family family)
{
    const auto& ids = family_basis(family);
    const Eigen::Index n = path.size() > 0 ? path.size() - 1 : 0;
    const auto s = static_cast<Eigen::Index>(ids.size());
    Matrix g(n, s);
    for (Eigen::Index k = 0; k < s; ++k) {
        const auto& id = ids[static_cast<std::size_t>(k)];
        for (Eigen::Index i = 1; i <= n; ++i) {
            g(i - 1, k) = eval_phi_unchecked(id, path[i]) * eval_phi_unchecked(id, path[i - 1]);
        }
    }
    return g;
}

double log_likelihood(const Vector& params, const Vector& path, Family family)
{
    check_params(params, family);
    const Vector c = densities(pair_features(path, family), params);
    require_positive(c);
    return loglik_from(c);
}

Vector score(const Vector& params, const Vector& path, Family family)
{
    check_params(params, family);
    const Matrix g = pair_features(path, family);
    const Vector c = densities(g, params);
    require_positive(c);
    return g.transpose() * c.array().inverse().matrix();
}

Matrix observed_information(const Vector& params, const Vector& path, Family family)
{
    check_params(params, family);
    const Matrix g = pair_features(path, family);
    const Vector c = densities(g, params);
    require_positive(c);
    return information_from(g, c);
}

MleResult fit_mle(const Vector& path, Family family, const MleOptions& options)
{
    const Eigen::Index n = path.size() > 0 ? path.size() - 1 : 0;
    if (n < 10) {
        throw Error(ErrorCode::DomainError, "MLE needs n >= 10, got " + std::to_string(n));
    }
    if (!(options.tol > 0.0) || options.max_iterations < 1) {
        throw Error(ErrorCode::DomainError, "MLE tolerance and iteration cap must be positive");
    }
    const Matrix g = pair_features(path, family);
    const WeightedL1Region& region = family_region(family);
    const BarrierProblem problem(g, region);
    const double tol2 = options.tol * options.tol;

    MleResult result;
    result.family = family;
    result.n = n;
    Vector x = Vector::Zero(parameter_count(family));
    int iterations = 0;

    // Barrier path: mu -> 0 until the duality gap m * mu is negligible.
    bool path_converged = true;
    for (double mu = 1.0; mu * static_cast<double>(problem.constraint_count()) > 1e-14; mu *= 0.1) {
        const auto stage = newton_stage(problem, x, mu, tol2, 0.0, iterations, options.max_iterations);
        if (!stage.converged) {
            path_converged = false;
            break;
        }
    }

    result.at_boundary = region.slack(x) <= 1e-8;
    bool converged = path_converged;
    if (path_converged && !result.at_boundary) {
        // Polish on the unconstrained likelihood; the barrier problem with mu = 0
        // still rejects infeasible trial points.
        const auto stage = newton_stage(problem, x, 0.0, 0.0, 0.5 * options.tol, iterations, options.max_iterations);
        const Vector c = densities(g, x);
        const Vector grad = g.transpose() * c.array().inverse().matrix();
        converged = stage.converged && grad.norm() <= options.tol * static_cast<double>(n);
        result.at_boundary = region.slack(x) <= 1e-8;
    }
    if (!x.allFinite()) {
        throw Error(ErrorCode::OptimizerDiverged, "MLE iterate is not finite");
    }

    const Vector c = densities(g, x);
    require_positive(c);
    result.estimates = x;
    result.loglik = loglik_from(c);
    result.information = information_from(g, c);
    result.converged = converged;
    result.iterations = iterations;
    return result;
}

IntervalList mle_confidence_intervals(const MleResult& result, double alpha)
{
    if (result.at_boundary) {
        throw Error(ErrorCode::BoundaryEstimate, "intervals are not available for an estimate on the boundary");
    }
    const Eigen::FullPivLU<Matrix> lu(result.information);
    if (!lu.isInvertible()) {
        throw Error(ErrorCode::SingularInformation, "observed information is singular");
    }
    const Matrix inverse = lu.inverse();
    const double z = numerics::normal_critical(alpha);
    IntervalList out;
    for (Eigen::Index k = 0; k < result.estimates.size(); ++k) {
        const double var = inverse(k, k);
        if (!(var > 0.0)) {
            throw Error(ErrorCode::SingularInformation, "inverse information has a non-positive diagonal");
        }
        const double half = z * std::sqrt(var);
        out.push_back({result.estimates[k] - half, result.estimates[k] + half});
    }
    return out;
}

EstimateReport mle_report(const MleResult& result, double alpha)
{
    EstimateReport report;
    report.method = Method::Mle;
    report.family = result.family;
    report.parameter_names = parameter_names(result.family);
    report.estimates = result.estimates;
    report.sigma = result.information;
    report.alpha = alpha;
    report.n = result.n;
    report.at_boundary = result.at_boundary;
    if (!result.at_boundary) {
        report.intervals = mle_confidence_intervals(result, alpha);
    }
    return report;
}

}  // namespace copmarkov
