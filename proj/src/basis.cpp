#include "copmarkov/basis.hpp"

#include "copmarkov/numerics.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <map>
#include <mutex>
#include <shared_mutex>

namespace copmarkov {

std::string to_string(BasisFamily family)
{
    switch (family) {
    case BasisFamily::HalfCosine: return "half-cosine";
    case BasisFamily::TrigFull: return "trig-full";
    case BasisFamily::Legendre: return "legendre";
    }
    return "unknown";
}

std::string to_string(const BasisFunctionId& id)
{
    std::string kind = id.kind == BasisKind::Sine ? "sin" : id.kind == BasisKind::Cosine ? "cos" : "poly";
    return to_string(id.family) + ":" + kind + std::to_string(id.index);
}

void validate(const BasisFunctionId& id)
{
    if (id.index < 1) {
        throw Error(ErrorCode::InvalidId, "basis index must be >= 1 in " + to_string(id));
    }
    const bool ok = (id.family == BasisFamily::HalfCosine && id.kind == BasisKind::Cosine) ||
                    (id.family == BasisFamily::TrigFull && id.kind != BasisKind::Polynomial) ||
                    (id.family == BasisFamily::Legendre && id.kind == BasisKind::Polynomial);
    if (!ok) {
        throw Error(ErrorCode::InvalidId, "kind does not match family in " + to_string(id));
    }
}

namespace {

void check_unit_interval(double x)
{
    if (!(x >= 0.0 && x <= 1.0)) {
        throw Error(ErrorCode::DomainError, "basis argument must lie in [0, 1]");
    }
}

struct MomentCache {
    std::shared_mutex mutex;
    std::map<std::vector<BasisFunctionId>, double> values;
};

MomentCache& moment_cache()
{
    static MomentCache cache;
    return cache;
}

}  // namespace

double eval_phi(const BasisFunctionId& id, double x)
{
    validate(id);
    check_unit_interval(x);
    return eval_phi_unchecked(id, x);
}

double eval_phi_integral(const BasisFunctionId& id, double x)
{
    validate(id);
    check_unit_interval(x);
    return eval_phi_integral_unchecked(id, x);
}

double product_moment(std::span<const BasisFunctionId> ids)
{
    if (ids.empty() || ids.size() > 4) {
        throw Error(ErrorCode::DomainError, "product_moment takes one to four factors");
    }
    for (const auto& id : ids) {
        validate(id);
        if (id.family != ids.front().family) {
            throw Error(ErrorCode::FamilyMismatch, "all factors must share one basis family");
        }
    }
    std::vector<BasisFunctionId> key(ids.begin(), ids.end());
    std::sort(key.begin(), key.end());

    MomentCache& cache = moment_cache();
    {
        std::shared_lock lock(cache.mutex);
        if (auto it = cache.values.find(key); it != cache.values.end()) {
            return it->second;
        }
    }
    const double value = numerics::integrate_01([&key](double x) {
        double prod = 1.0;
        for (const auto& id : key) {
            prod *= eval_phi_unchecked(id, x);
        }
        return prod;
    });
    std::unique_lock lock(cache.mutex);
    cache.values.emplace(std::move(key), value);
    return value;
}

double cross_moment(const BasisFunctionId& a, const BasisFunctionId& b, const std::optional<BasisFunctionId>& c)
{
    if (c) {
        const std::array ids{a, b, *c};
        return product_moment(ids);
    }
    const std::array ids{a, b};
    return product_moment(ids);
}

double fourth_moment(const BasisFunctionId& id)
{
    const std::array ids{id, id, id, id};
    return product_moment(ids);
}

double trig_product_moment_analytic(std::span<const BasisFunctionId> ids)
{
    using Complex = std::complex<double>;
    constexpr double pi = std::numbers::pi;
    // Each factor sqrt(2) cos(wx) or sqrt(2) sin(wx) is a pair of exponentials
    // e^{+iwx}, e^{-iwx}; expand the product and integrate term by term.
    std::vector<std::pair<double, Complex>> terms{{0.0, Complex(1.0, 0.0)}};
    for (const auto& id : ids) {
        validate(id);
        if (id.family == BasisFamily::Legendre) {
            throw Error(ErrorCode::InvalidId, "analytic moments exist only for trigonometric bases");
        }
        const double w = id.family == BasisFamily::HalfCosine ? id.index * pi : 2.0 * id.index * pi;
        const Complex plus = id.kind == BasisKind::Sine ? Complex(0.0, -0.5) : Complex(0.5, 0.0);
        const Complex minus = id.kind == BasisKind::Sine ? Complex(0.0, 0.5) : Complex(0.5, 0.0);
        std::vector<std::pair<double, Complex>> next;
        next.reserve(terms.size() * 2);
        for (const auto& [freq, coef] : terms) {
            next.emplace_back(freq + w, coef * plus * std::numbers::sqrt2);
            next.emplace_back(freq - w, coef * minus * std::numbers::sqrt2);
        }
        terms = std::move(next);
    }
    Complex total(0.0, 0.0);
    for (const auto& [freq, coef] : terms) {
        if (std::abs(freq) < 1e-9) {
            total += coef;
        } else {
            total += coef * (std::exp(Complex(0.0, freq)) - 1.0) / Complex(0.0, freq);
        }
    }
    return total.real();
}

std::size_t moment_cache_size()
{
    MomentCache& cache = moment_cache();
    std::shared_lock lock(cache.mutex);
    return cache.values.size();
}

Extrema grid_extrema(const BasisFunctionId& id, int points)
{
    validate(id);
    if (points < 2) {
        throw Error(ErrorCode::DomainError, "grid needs at least the two endpoints");
    }
    Extrema e{eval_phi_unchecked(id, 0.0), eval_phi_unchecked(id, 0.0)};
    for (int i = 1; i < points; ++i) {
        const double v = eval_phi_unchecked(id, static_cast<double>(i) / (points - 1));
        e.min = std::min(e.min, v);
        e.max = std::max(e.max, v);
    }
    return e;
}

}  // namespace copmarkov
