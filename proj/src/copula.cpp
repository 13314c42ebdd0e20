#include "copmarkov/copula.hpp"

#include "copmarkov/error.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <utility>
#include <set>
#include <sstream>

namespace copmarkov {

namespace {

constexpr double kRegionSlop = 1e-12;

std::string trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

/// max |phi_k| and max |phi_k'| over [0, 1].
std::pair<double, double> sup_norms(const BasisFunctionId& id)
{
    const double k = id.index;
    switch (id.family) {
    case BasisFamily::HalfCosine: return {std::numbers::sqrt2, std::numbers::sqrt2 * k * std::numbers::pi};
    case BasisFamily::TrigFull: return {std::numbers::sqrt2, std::numbers::sqrt2 * 2.0 * k * std::numbers::pi};
    case BasisFamily::Legendre: return {std::sqrt(2.0 * k + 1.0), std::sqrt(2.0 * k + 1.0) * k * (k + 1.0)};
    }
    return {0.0, 0.0};
}

}  // namespace

double density_lower_bound(const std::vector<BasisFunctionId>& ids, const Vector& coefficients, int grid_points)
{
    if (grid_points < 2 || static_cast<Eigen::Index>(ids.size()) != coefficients.size()) {
        throw Error(ErrorCode::DomainError, "density bound needs a grid of at least 2 points and one coefficient per id");
    }
    const auto s = static_cast<Eigen::Index>(ids.size());
    const Eigen::Index m = grid_points;
    Matrix phi(m, s);
    double lipschitz = 0.0;
    for (Eigen::Index k = 0; k < s; ++k) {
        const auto& id = ids[static_cast<std::size_t>(k)];
        copmarkov::validate(id);
        for (Eigen::Index i = 0; i < m; ++i) {
            phi(i, k) = eval_phi_unchecked(id, static_cast<double>(i) / static_cast<double>(m - 1));
        }
        const auto [sup, sup_derivative] = sup_norms(id);
        lipschitz += std::abs(coefficients[k]) * sup * sup_derivative;
    }
    // c on the grid is 1 + Phi diag(lambda) Phi^T.
    const Matrix grid = (phi * coefficients.asDiagonal() * phi.transpose()).array() + 1.0;
    const double h = 1.0 / static_cast<double>(m - 1);
    return grid.minCoeff() - lipschitz * h;
}

std::string to_string(Family family)
{
    switch (family) {
    case Family::Sine: return "sine";
    case Family::SineCosine: return "sine-cosine";
    case Family::Legendre: return "legendre";
    }
    return "unknown";
}

Family parse_family(std::string_view name)
{
    const std::string s = trim(name);
    if (s == "sine") {
        return Family::Sine;
    }
    if (s == "sine-cosine") {
        return Family::SineCosine;
    }
    if (s == "legendre") {
        return Family::Legendre;
    }
    throw Error(ErrorCode::ParseError, "unknown family '" + s + "' (expected sine, sine-cosine or legendre)");
}

BasisFamily basis_family(Family family)
{
    switch (family) {
    case Family::Sine: return BasisFamily::HalfCosine;
    case Family::SineCosine: return BasisFamily::TrigFull;
    case Family::Legendre: return BasisFamily::Legendre;
    }
    return BasisFamily::HalfCosine;
}

const std::vector<BasisFunctionId>& family_basis(Family family)
{
    static const std::vector<BasisFunctionId> sine{BasisFunctionId::half_cosine(1), BasisFunctionId::half_cosine(2)};
    static const std::vector<BasisFunctionId> sine_cosine{BasisFunctionId::trig_cos(1), BasisFunctionId::trig_cos(2),
                                                          BasisFunctionId::trig_sin(1), BasisFunctionId::trig_sin(2)};
    static const std::vector<BasisFunctionId> legendre{BasisFunctionId::legendre(1), BasisFunctionId::legendre(2)};
    switch (family) {
    case Family::Sine: return sine;
    case Family::SineCosine: return sine_cosine;
    case Family::Legendre: return legendre;
    }
    return sine;
}

const std::vector<std::string>& parameter_names(Family family)
{
    static const std::vector<std::string> two{"lambda1", "lambda2"};
    static const std::vector<std::string> four{"lambda1", "lambda2", "mu1", "mu2"};
    return family == Family::SineCosine ? four : two;
}

Eigen::Index parameter_count(Family family) { return static_cast<Eigen::Index>(family_basis(family).size()); }

const WeightedL1Region& family_region(Family family)
{
    static const WeightedL1Region sine(Vector::Ones(2), 0.5);
    static const WeightedL1Region sine_cosine(Vector::Ones(4), 0.5);
    static const WeightedL1Region legendre((Vector(2) << 3.0, 5.0).finished(), 1.0);
    switch (family) {
    case Family::Sine: return sine;
    case Family::SineCosine: return sine_cosine;
    case Family::Legendre: return legendre;
    }
    return sine;
}

CopulaSpec CopulaSpec::preset(Family family)
{
    switch (family) {
    case Family::Sine: return {family, (Vector(2) << 0.28, -0.15).finished()};
    case Family::SineCosine: return {family, (Vector(4) << 0.14, 0.13, -0.11, -0.12).finished()};
    case Family::Legendre: return {family, (Vector(2) << 0.15, 0.1).finished()};
    }
    return {};
}

CopulaSpec CopulaSpec::independence(Family family) { return {family, Vector::Zero(parameter_count(family))}; }

GeneralSpec to_general(const CopulaSpec& spec) { return {family_basis(spec.family), spec.params}; }

Validation validate(const CopulaSpec& spec)
{
    Validation out;
    const Eigen::Index expected = parameter_count(spec.family);
    if (spec.params.size() != expected) {
        out.violation = to_string(spec.family) + " expects " + std::to_string(expected) + " parameters, got " +
                        std::to_string(spec.params.size());
        return out;
    }
    if (!spec.params.allFinite()) {
        out.violation = "parameters must be finite";
        return out;
    }
    const WeightedL1Region& region = family_region(spec.family);
    const double norm = region.weighted_norm(spec.params);
    out.valid = norm <= region.radius() + kRegionSlop;
    out.interior = norm < region.radius() - kRegionSlop;
    // Inside the region c >= 1 - (weighted norm) / radius > 0.
    out.positive = out.interior || (out.valid && density_lower_bound(family_basis(spec.family), spec.params) > 0.0);
    if (!out.valid) {
        std::ostringstream msg;
        msg << std::setprecision(10) << "weighted parameter norm " << norm << " exceeds " << region.radius();
        out.violation = msg.str();
    }
    return out;
}

Validation validate(const GeneralSpec& spec)
{
    Validation out;
    if (spec.ids.size() != static_cast<std::size_t>(spec.coefficients.size())) {
        out.violation = "one coefficient per basis function is required";
        return out;
    }
    std::set<BasisFunctionId> seen;
    for (const auto& id : spec.ids) {
        try {
            copmarkov::validate(id);
        } catch (const Error& e) {
            out.violation = e.what();
            return out;
        }
        if (!spec.ids.empty() && id.family != spec.ids.front().family) {
            out.violation = "all basis functions must come from one family";
            return out;
        }
        if (!seen.insert(id).second) {
            out.violation = "basis function " + to_string(id) + " listed twice";
            return out;
        }
    }
    if (!spec.coefficients.allFinite()) {
        out.violation = "coefficients must be finite";
        return out;
    }
    double bound = 1.0;
    for (std::size_t k = 0; k < spec.ids.size(); ++k) {
        const double lambda = spec.coefficients[static_cast<Eigen::Index>(k)];
        if (lambda == 0.0) {
            continue;
        }
        const Extrema e = grid_extrema(spec.ids[k]);
        const double alpha = lambda < 0.0 ? std::max(e.min * e.min, e.max * e.max) : e.min * e.max;
        bound += lambda * alpha;
    }
    out.valid = bound >= -kRegionSlop;
    out.interior = bound > kRegionSlop;
    out.positive = out.interior || (out.valid && density_lower_bound(spec.ids, spec.coefficients) > 0.0);
    if (!out.valid) {
        std::ostringstream msg;
        msg << std::setprecision(10) << "nonnegativity bound 1 + sum lambda_k alpha_k = " << bound << " < 0";
        out.violation = msg.str();
    }
    return out;
}

void require_valid(const CopulaSpec& spec)
{
    const Validation v = validate(spec);
    if (!v.valid) {
        throw Error(ErrorCode::InvalidSpec, v.violation);
    }
}

void require_interior(const CopulaSpec& spec)
{
    const Validation v = validate(spec);
    if (!v.valid) {
        throw Error(ErrorCode::InvalidSpec, v.violation);
    }
    if (!v.interior) {
        throw Error(ErrorCode::NonInteriorSpec, "parameters lie on the boundary of the admissible region");
    }
}

void require_positive_density(const CopulaSpec& spec)
{
    const Validation v = validate(spec);
    if (!v.valid) {
        throw Error(ErrorCode::InvalidSpec, v.violation);
    }
    if (!v.positive) {
        throw Error(ErrorCode::NonInteriorSpec, "the density is not certified strictly positive");
    }
}

Copula::Copula(const CopulaSpec& spec) : family_(spec.family)
{
    const Validation v = validate(spec);
    if (!v.valid) {
        throw Error(ErrorCode::InvalidSpec, v.violation);
    }
    ids_ = family_basis(spec.family);
    coefficients_ = spec.params;
    interior_ = v.interior;
    positive_ = v.positive;
}

Copula::Copula(const GeneralSpec& spec)
{
    const Validation v = validate(spec);
    if (!v.valid) {
        throw Error(ErrorCode::InvalidSpec, v.violation);
    }
    ids_ = spec.ids;
    coefficients_ = spec.coefficients;
    interior_ = v.interior;
    positive_ = v.positive;
}

Vector Copula::conditional_weights(double u) const
{
    Vector w(coefficients_.size());
    for (std::size_t k = 0; k < ids_.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        w[i] = coefficients_[i] * eval_phi_unchecked(ids_[k], u);
    }
    return w;
}

namespace {

void check_point(double u, double v)
{
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0)) {
        throw Error(ErrorCode::DomainError, "copula arguments must lie in [0, 1]");
    }
}

}  // namespace

double density(const CopulaSpec& spec, double u, double v)
{
    check_point(u, v);
    return Copula(spec).density(u, v);
}

double cdf(const CopulaSpec& spec, double u, double v)
{
    check_point(u, v);
    return Copula(spec).cdf(u, v);
}

double conditional_cdf(const CopulaSpec& spec, double u, double v)
{
    check_point(u, v);
    return Copula(spec).conditional_cdf(u, v);
}

Vector parse_params(std::string_view text)
{
    std::vector<double> values;
    std::string s = trim(text);
    if (!s.empty() && s.front() == '[' && s.back() == ']') {
        s = trim(std::string_view(s).substr(1, s.size() - 2));
    }
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto comma = s.find(',', start);
        const std::string token = trim(std::string_view(s).substr(start, comma == std::string::npos ? std::string::npos : comma - start));
        if (token.empty()) {
            throw Error(ErrorCode::ParseError, "empty entry in parameter list '" + std::string(text) + "'");
        }
        double value = 0.0;
        const char* begin = token.data();
        const char* end = begin + token.size();
        if (*begin == '+') {
            ++begin;
        }
        const auto [ptr, ec] = std::from_chars(begin, end, value);
        if (ec != std::errc() || ptr != end) {
            throw Error(ErrorCode::ParseError, "cannot parse parameter '" + token + "'");
        }
        values.push_back(value);
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string format_spec(const CopulaSpec& spec)
{
    std::ostringstream out;
    out << std::setprecision(17) << "family = " << to_string(spec.family) << "\nparams = ";
    for (Eigen::Index i = 0; i < spec.params.size(); ++i) {
        out << (i ? ", " : "") << spec.params[i];
    }
    out << '\n';
    return out.str();
}

CopulaSpec parse_spec(std::string_view text)
{
    std::optional<Family> family;
    std::optional<Vector> params;
    std::istringstream in{std::string(text)};
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const auto sep = line.find_first_of("=:");
        if (sep == std::string::npos) {
            throw Error(ErrorCode::ParseError, "expected 'key = value' in line '" + line + "'");
        }
        const std::string key = trim(std::string_view(line).substr(0, sep));
        const std::string value = trim(std::string_view(line).substr(sep + 1));
        if (key == "family") {
            family = parse_family(value);
        } else if (key == "params") {
            params = parse_params(value);
        } else {
            throw Error(ErrorCode::ParseError, "unknown key '" + key + "'");
        }
    }
    if (!family || !params) {
        throw Error(ErrorCode::ParseError, "spec needs both 'family' and 'params'");
    }
    return {*family, *params};
}

}  // namespace copmarkov
