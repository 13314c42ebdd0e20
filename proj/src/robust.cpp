#include "copmarkov/robust.hpp"

#include "copmarkov/error.hpp"
#include "copmarkov/moment.hpp"
#include "copmarkov/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace copmarkov {

namespace {

double fifth_root_bandwidth(double second_moment, double mean, Eigen::Index n)
{
    return std::pow(second_moment / (mean * mean * static_cast<double>(n) * std::numbers::sqrt2), 0.2);
}

}  // namespace

Vector transform_series(const Vector& path, const BasisFunctionId& id)
{
    if (path.size() < 2) {
        throw Error(ErrorCode::EmptyChain, "the transformed series needs at least one transition");
    }
    validate(id);
    const Eigen::Index n = path.size() - 1;
    Vector y(n);
    double prev = eval_phi_unchecked(id, path[0]);
    for (Eigen::Index i = 1; i <= n; ++i) {
        const double cur = eval_phi_unchecked(id, path[i]);
        y[i - 1] = cur * prev;
        prev = cur;
    }
    return y;
}

double empirical_bandwidth(const Vector& y, double threshold)
{
    if (y.size() == 0) {
        throw Error(ErrorCode::EmptyChain, "bandwidth of an empty series");
    }
    const double mean = y.mean();
    if (!(std::abs(mean) >= threshold)) {
        throw Error(ErrorCode::DegenerateMean, "|mean(Y)| = " + std::to_string(std::abs(mean)) + " is below " +
                                                   std::to_string(threshold));
    }
    return fifth_root_bandwidth(y.squaredNorm() / static_cast<double>(y.size()), mean, y.size());
}

double model_second_moment(Family family, Eigen::Index k, const Vector& lambdas)
{
    const auto& ids = family_basis(family);
    if (lambdas.size() != parameter_count(family) || k < 0 || k >= lambdas.size()) {
        throw Error(ErrorCode::InvalidSpec, "parameter index or vector size does not match " + to_string(family));
    }
    const auto& target = ids[static_cast<std::size_t>(k)];
    double m2 = 1.0;
    for (Eigen::Index z = 0; z < lambdas.size(); ++z) {
        const double a = cross_moment(ids[static_cast<std::size_t>(z)], target, target);
        m2 += lambdas[z] * a * a;
    }
    return m2;
}

double model_bandwidth(Family family, Eigen::Index k, const Vector& lambdas, Eigen::Index n, double threshold)
{
    if (lambdas.size() != parameter_count(family)) {
        throw Error(ErrorCode::InvalidSpec, to_string(family) + " expects " + std::to_string(parameter_count(family)) +
                                                " parameters");
    }
    if (!(family_region(family).slack(lambdas) > 0.0)) {
        throw Error(ErrorCode::NonInteriorSpec, "model bandwidth needs interior parameters");
    }
    if (n < 1) {
        throw Error(ErrorCode::DomainError, "model bandwidth needs n >= 1");
    }
    const double lk = lambdas[k];
    if (!(std::abs(lk) >= threshold)) {
        throw Error(ErrorCode::DegenerateMean, "|lambda_" + std::to_string(k + 1) + "| = " +
                                                   std::to_string(std::abs(lk)) + " is below " +
                                                   std::to_string(threshold));
    }
    return fifth_root_bandwidth(model_second_moment(family, k, lambdas), lk, n);
}

KernelEstimate robust_estimate(const Vector& y, double h, const Vector& noise, double alpha,
                               std::optional<double> second_moment)
{
    if (noise.size() != y.size()) {
        throw Error(ErrorCode::LengthMismatch, "noise has " + std::to_string(noise.size()) + " draws for " +
                                                   std::to_string(y.size()) + " observations");
    }
    if (!(h > 0.0) || y.size() == 0) {
        throw Error(ErrorCode::DomainError, "kernel estimate needs h > 0 and a non-empty series");
    }
    const auto n = static_cast<double>(y.size());
    const Vector weights = (-0.5 * (noise.array() / h).square()).exp();
    KernelEstimate est;
    est.raw = y.dot(weights) / (n * h);
    est.bandwidth = h;
    est.corrected = est.raw * std::sqrt(1.0 + h * h);
    est.variant = second_moment ? BandwidthVariant::Model : BandwidthVariant::Empirical;
    const double m2 = second_moment ? *second_moment : y.squaredNorm() / n;
    const double half = numerics::normal_critical(alpha) * std::sqrt(m2 / (n * h * std::numbers::sqrt2));
    est.interval = {est.corrected - half, est.corrected + half};
    return est;
}

std::vector<KernelEstimate> robust_estimates(const Vector& path, Family family, BandwidthVariant variant,
                                             const Vector& noise, double alpha)
{
    const auto& ids = family_basis(family);
    std::vector<KernelEstimate> out;
    out.reserve(ids.size());
    Vector plug_in;
    if (variant == BandwidthVariant::Model) {
        plug_in = plug_in_point(family, estimate_lambda(path, family));
    }
    for (std::size_t k = 0; k < ids.size(); ++k) {
        const Vector y = transform_series(path, ids[k]);
        if (variant == BandwidthVariant::Empirical) {
            out.push_back(robust_estimate(y, empirical_bandwidth(y), noise, alpha));
        } else {
            const auto kk = static_cast<Eigen::Index>(k);
            const double h = model_bandwidth(family, kk, plug_in, y.size());
            out.push_back(robust_estimate(y, h, noise, alpha, model_second_moment(family, kk, plug_in)));
        }
    }
    return out;
}

EstimateReport robust_report(const Vector& path, Family family, BandwidthVariant variant, const Vector& noise,
                             double alpha)
{
    const auto estimates = robust_estimates(path, family, variant, noise, alpha);
    EstimateReport report;
    report.method = variant == BandwidthVariant::Empirical ? Method::RobustEmpirical : Method::RobustModel;
    report.family = family;
    report.parameter_names = parameter_names(family);
    report.n = path.size() - 1;
    report.alpha = alpha;
    const auto s = static_cast<Eigen::Index>(estimates.size());
    report.estimates.resize(s);
    report.sigma = Matrix::Zero(s, s);
    const double z = numerics::normal_critical(alpha);
    for (Eigen::Index k = 0; k < s; ++k) {
        const auto& est = estimates[static_cast<std::size_t>(k)];
        report.estimates[k] = est.corrected;
        report.intervals.push_back(est.interval);
        report.bandwidths.push_back(est.bandwidth);
        // Recover m2 / (h sqrt 2) from the half-width.
        const double half = est.interval.length() / 2.0;
        report.sigma(k, k) = static_cast<double>(report.n) * (half / z) * (half / z);
    }
    return report;
}

}  // namespace copmarkov
