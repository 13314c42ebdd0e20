#include "copmarkov/moment.hpp"

#include "copmarkov/error.hpp"
#include "copmarkov/numerics.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include <array>
#include <cmath>
#include <string>

namespace copmarkov {

SigmaMatrix::SigmaMatrix(Matrix entries) : entries_(std::move(entries))
{
    if (entries_.rows() != entries_.cols()) {
        throw Error(ErrorCode::DomainError, "Sigma must be square");
    }
    const double asym = entries_.size() > 0 ? (entries_ - entries_.transpose()).cwiseAbs().maxCoeff() : 0.0;
    if (asym > 1e-12) {
        throw Error(ErrorCode::DomainError, "Sigma must be symmetric (max asymmetry " + std::to_string(asym) + ")");
    }
}

Vector estimate_lambda(const Vector& path, std::span<const BasisFunctionId> ids)
{
    if (path.size() < 2) {
        throw Error(ErrorCode::EmptyChain, "estimation needs at least one transition");
    }
    for (const auto& id : ids) {
        validate(id);
    }
    const Eigen::Index n = path.size() - 1;
    const auto s = static_cast<Eigen::Index>(ids.size());
    Vector sums = Vector::Zero(s);
    Vector prev(s);
    for (Eigen::Index k = 0; k < s; ++k) {
        prev[k] = eval_phi_unchecked(ids[static_cast<std::size_t>(k)], path[0]);
    }
    for (Eigen::Index i = 1; i <= n; ++i) {
        for (Eigen::Index k = 0; k < s; ++k) {
            const double cur = eval_phi_unchecked(ids[static_cast<std::size_t>(k)], path[i]);
            sums[k] += cur * prev[k];
            prev[k] = cur;
        }
    }
    return sums / static_cast<double>(n);
}

Vector estimate_lambda(const ChainSample& chain, std::span<const BasisFunctionId> ids)
{
    return estimate_lambda(chain.values, ids);
}

Vector estimate_lambda(const Vector& path, Family family)
{
    return estimate_lambda(path, family_basis(family));
}

double spearman_rho(const Vector& path, Family family)
{
    return estimate_lambda(path, family)[0];
}

SigmaMatrix asymptotic_sigma(Family family, const Vector& at)
{
    if (at.size() != parameter_count(family)) {
        throw Error(ErrorCode::InvalidSpec, to_string(family) + " expects " + std::to_string(parameter_count(family)) +
                                                " parameters");
    }
    if (!(family_region(family).slack(at) > 0.0)) {
        throw Error(ErrorCode::NonInteriorSpec, "Sigma is evaluated at interior parameters only");
    }
    const Eigen::Index s = at.size();
    Matrix m(s, s);
    switch (family) {
    case Family::Sine: {
        const double l1 = at[0];
        const double l2 = at[1];
        m(0, 0) = 1.0 + l2 / 2.0 + l1 * l1 * l2 / (1.0 - l2);
        m(0, 1) = l1 * (0.5 - l2);
        m(1, 1) = 1.0;
        break;
    }
    case Family::Legendre: {
        const double l1 = at[0];
        const double l2 = at[1];
        m(0, 0) = 1.0 + 4.0 * l2 / 5.0 + l1 * l1 * (3.0 + 5.0 * l2) / (5.0 * (1.0 - l2));
        m(0, 1) = 4.0 * l1 / 5.0 + l1 * l2 * (1.0 + 7.0 * l2) / (7.0 * (1.0 - l2));
        m(1, 1) = 1.0 + 20.0 * l2 / 49.0 + l2 * l2 * (63.0 - 23.0 * l2) / (49.0 * (1.0 - l2));
        break;
    }
    case Family::SineCosine: {
        const double l1 = at[0];
        const double l2 = at[1];
        const double m1 = at[2];
        const double m2 = at[3];
        const double g = l2 / (1.0 - l2);
        m(0, 0) = 1.0 + l2 / 2.0 + l1 * l1 * g;
        m(0, 1) = l1 * (0.5 - l2);
        m(0, 2) = m2 / 2.0 - 2.0 * l1 * m1 - l1 * m1 * g;
        m(0, 3) = m1 / 2.0 - l1 * m2;
        m(1, 1) = 1.0;
        m(1, 2) = m1 / 2.0 - l2 * m1;
        m(1, 3) = -2.0 * l2 * m2;
        m(2, 2) = 1.0 + l2 / 2.0 + m1 * m1 * g;
        m(2, 3) = l1 / 2.0 - m1 * m2;
        m(3, 3) = 1.0;
        break;
    }
    }
    m.triangularView<Eigen::StrictlyLower>() = m.transpose().triangularView<Eigen::StrictlyLower>();
    return SigmaMatrix(m);
}

SigmaMatrix asymptotic_sigma(const CopulaSpec& spec)
{
    return asymptotic_sigma(spec.family, spec.params);
}

SigmaMatrix general_sigma(std::span<const BasisFunctionId> ids, const Vector& lambdas)
{
    const auto s = static_cast<Eigen::Index>(ids.size());
    if (lambdas.size() != s) {
        throw Error(ErrorCode::LengthMismatch, "one coefficient per basis function is required");
    }
    for (Eigen::Index z = 0; z < s; ++z) {
        if (!(std::abs(lambdas[z]) < 1.0)) {
            throw Error(ErrorCode::DivergentSeries, "the lag series needs |lambda_z| < 1 for every z");
        }
    }
    const auto id = [&](Eigen::Index k) { return ids[static_cast<std::size_t>(k)]; };

    // a(z, k) = int phi_z phi_k^2
    Matrix a(s, s);
    for (Eigen::Index z = 0; z < s; ++z) {
        for (Eigen::Index k = 0; k < s; ++k) {
            a(z, k) = cross_moment(id(z), id(k), id(k));
        }
    }
    Vector geometric(s);
    for (Eigen::Index z = 0; z < s; ++z) {
        geometric[z] = lambdas[z] / (1.0 - lambdas[z]);
    }

    Matrix m(s, s);
    for (Eigen::Index k = 0; k < s; ++k) {
        for (Eigen::Index j = k; j < s; ++j) {
            const double lk = lambdas[k];
            const double lj = lambdas[j];
            double lag0 = k == j ? 1.0 : 0.0;
            double tail = 0.0;
            for (Eigen::Index z = 0; z < s; ++z) {
                const double b = k == j ? a(z, k) : cross_moment(id(z), id(k), id(j));
                lag0 += lambdas[z] * b * b;
                tail += geometric[z] * a(z, k) * a(z, j);
            }
            const std::array<BasisFunctionId, 4> quad{id(k), id(k), id(j), id(j)};
            const double squares = product_moment(quad);
            m(k, j) = lag0 - lk * lj + 2.0 * lk * lj * (squares - 1.0) + 2.0 * lk * lj * tail;
            m(j, k) = m(k, j);
        }
    }
    return SigmaMatrix(m);
}

Vector plug_in_point(Family family, const Vector& estimate)
{
    return family_region(family).project_interior(estimate, kPlugInMargin);
}

IntervalList confidence_intervals(const Vector& estimate, const SigmaMatrix& sigma, Eigen::Index n, double alpha)
{
    if (sigma.size() != estimate.size()) {
        throw Error(ErrorCode::LengthMismatch, "Sigma dimension differs from the estimate");
    }
    if (n < 2) {
        throw Error(ErrorCode::DomainError, "confidence intervals need n >= 2");
    }
    const double z = numerics::normal_critical(alpha);
    IntervalList out;
    out.reserve(static_cast<std::size_t>(estimate.size()));
    for (Eigen::Index k = 0; k < estimate.size(); ++k) {
        const double var = sigma(k, k);
        if (!(var > 0.0) || !std::isfinite(var)) {
            throw Error(ErrorCode::NonPositiveVariance, "Sigma(" + std::to_string(k) + "," + std::to_string(k) +
                                                            ") = " + std::to_string(var));
        }
        const double half = z * std::sqrt(var / static_cast<double>(n));
        out.push_back({estimate[k] - half, estimate[k] + half});
    }
    return out;
}

TestResult region_statistic(const Vector& estimate, const Vector& null_value, const SigmaMatrix& sigma,
                            Eigen::Index n, double alpha)
{
    if (estimate.size() != null_value.size() || sigma.size() != estimate.size()) {
        throw Error(ErrorCode::LengthMismatch, "estimate, null value and Sigma must share one dimension");
    }
    const Eigen::FullPivLU<Matrix> lu(sigma.entries());
    if (!lu.isInvertible()) {
        throw Error(ErrorCode::SingularMatrix, "Sigma is not invertible");
    }
    const Vector diff = estimate - null_value;
    const int df = static_cast<int>(estimate.size());
    const auto chi2 = numerics::Distribution::chi_square(df);
    TestResult result;
    result.statistic = static_cast<double>(n) * diff.dot(lu.solve(diff));
    result.df = df;
    result.critical_value = numerics::quantile(chi2, 1.0 - alpha);
    result.p_value = numerics::survival(chi2, result.statistic);
    result.reject = result.statistic > result.critical_value;
    return result;
}

std::vector<BasisFunctionId> independence_basis(BasisFamily family, int s)
{
    if (s < 1) {
        throw Error(ErrorCode::DomainError, "s must be at least 1");
    }
    std::vector<BasisFunctionId> ids;
    ids.reserve(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) {
        switch (family) {
        case BasisFamily::HalfCosine: ids.push_back(BasisFunctionId::half_cosine(i + 1)); break;
        case BasisFamily::Legendre: ids.push_back(BasisFunctionId::legendre(i + 1)); break;
        case BasisFamily::TrigFull:
            ids.push_back(i % 2 == 0 ? BasisFunctionId::trig_cos(i / 2 + 1) : BasisFunctionId::trig_sin(i / 2 + 1));
            break;
        }
    }
    return ids;
}

TestResult independence_test(const Vector& path, BasisFamily family, int s, double alpha)
{
    const auto ids = independence_basis(family, s);
    const Eigen::Index n = path.size() > 0 ? path.size() - 1 : 0;
    if (n < kIndependenceMinPairsPerDof * s) {
        throw Error(ErrorCode::ChainTooShort, "independence test with s = " + std::to_string(s) + " needs n >= " +
                                                  std::to_string(kIndependenceMinPairsPerDof * s) + ", got " +
                                                  std::to_string(n));
    }
    const Vector w = estimate_lambda(path, ids);
    const auto chi2 = numerics::Distribution::chi_square(s);
    TestResult result;
    result.statistic = static_cast<double>(n) * w.squaredNorm();
    result.df = s;
    result.critical_value = numerics::quantile(chi2, 1.0 - alpha);
    result.p_value = numerics::survival(chi2, result.statistic);
    result.reject = result.statistic > result.critical_value;
    result.normal_approximation = (result.statistic - s) / std::sqrt(2.0 * s);
    return result;
}

EstimateReport moment_report(const Vector& path, Family family, double alpha)
{
    EstimateReport report;
    report.method = Method::Moment;
    report.family = family;
    report.parameter_names = parameter_names(family);
    report.estimates = estimate_lambda(path, family);
    report.n = path.size() - 1;
    report.alpha = alpha;
    const SigmaMatrix sigma = asymptotic_sigma(family, plug_in_point(family, report.estimates));
    report.sigma = sigma.entries();
    report.intervals = confidence_intervals(report.estimates, sigma, report.n, alpha);
    return report;
}

}  // namespace copmarkov
