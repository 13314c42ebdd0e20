#pragma once

#include "copmarkov/error.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace copmarkov {

/// The three orthonormal bases of L2(0,1) (each completed by the constant 1).
enum class BasisFamily {
    HalfCosine,  ///< sqrt(2) cos(k pi x)
    TrigFull,    ///< sqrt(2) cos(2 pi k x) and sqrt(2) sin(2 pi k x)
    Legendre,    ///< sqrt(2k+1) P_k(2x - 1)
};

enum class BasisKind { Cosine, Sine, Polynomial };

struct BasisFunctionId {
    BasisFamily family = BasisFamily::HalfCosine;
    int index = 1;
    BasisKind kind = BasisKind::Cosine;

    static BasisFunctionId half_cosine(int k) { return {BasisFamily::HalfCosine, k, BasisKind::Cosine}; }
    static BasisFunctionId trig_cos(int k) { return {BasisFamily::TrigFull, k, BasisKind::Cosine}; }
    static BasisFunctionId trig_sin(int k) { return {BasisFamily::TrigFull, k, BasisKind::Sine}; }
    static BasisFunctionId legendre(int k) { return {BasisFamily::Legendre, k, BasisKind::Polynomial}; }

    friend bool operator==(const BasisFunctionId&, const BasisFunctionId&) = default;
    friend auto operator<=>(const BasisFunctionId&, const BasisFunctionId&) = default;
};

[[nodiscard]] std::string to_string(BasisFamily family);
[[nodiscard]] std::string to_string(const BasisFunctionId& id);

/// Throws InvalidId when the kind does not belong to the family or the index is < 1.
void validate(const BasisFunctionId& id);

/// Legendre polynomial P_k(y) by the three-term recurrence.
template <typename Scalar>
Scalar legendre_p(int k, Scalar y)
{
    if (k == 0) {
        return Scalar(1);
    }
    Scalar prev = Scalar(1);
    Scalar curr = y;
    for (int j = 1; j < k; ++j) {
        const Scalar next = (Scalar(2 * j + 1) * y * curr - Scalar(j) * prev) / Scalar(j + 1);
        prev = curr;
        curr = next;
    }
    return curr;
}

/**
 * @brief phi_k(x) for a validated id. No range check on x, so the hot
 * simulation and likelihood loops can call it directly.
 */
template <typename Scalar>
Scalar eval_phi_unchecked(const BasisFunctionId& id, Scalar x)
{
    using std::cos;
    using std::sin;
    using std::sqrt;
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar root2 = sqrt(Scalar(2));
    switch (id.family) {
    case BasisFamily::HalfCosine:
        return root2 * cos(Scalar(id.index) * pi * x);
    case BasisFamily::TrigFull: {
        const Scalar arg = Scalar(2 * id.index) * pi * x;
        return root2 * (id.kind == BasisKind::Sine ? sin(arg) : cos(arg));
    }
    case BasisFamily::Legendre:
        return sqrt(Scalar(2 * id.index + 1)) * legendre_p(id.index, Scalar(2) * x - Scalar(1));
    }
    return Scalar(0);
}

/// Antiderivative Phi_k(x) = integral of phi_k over [0, x], in closed form.
template <typename Scalar>
Scalar eval_phi_integral_unchecked(const BasisFunctionId& id, Scalar x)
{
    using std::cos;
    using std::sin;
    using std::sqrt;
    constexpr Scalar pi = std::numbers::pi_v<Scalar>;
    const Scalar root2 = sqrt(Scalar(2));
    switch (id.family) {
    case BasisFamily::HalfCosine: {
        const Scalar w = Scalar(id.index) * pi;
        return root2 * sin(w * x) / w;
    }
    case BasisFamily::TrigFull: {
        const Scalar w = Scalar(2 * id.index) * pi;
        return id.kind == BasisKind::Sine ? root2 * (Scalar(1) - cos(w * x)) / w : root2 * sin(w * x) / w;
    }
    case BasisFamily::Legendre: {
        // integral of P_k over [-1, y] is (P_{k+1}(y) - P_{k-1}(y)) / (2k + 1); dx = dy / 2.
        const int k = id.index;
        const Scalar y = Scalar(2) * x - Scalar(1);
        return sqrt(Scalar(2 * k + 1)) * (legendre_p(k + 1, y) - legendre_p(k - 1, y)) / Scalar(2 * (2 * k + 1));
    }
    }
    return Scalar(0);
}

/// phi_k(x); throws InvalidId for a bad id and DomainError for x outside [0, 1].
double eval_phi(const BasisFunctionId& id, double x);

/// Phi_k(x) with the same checks as eval_phi.
double eval_phi_integral(const BasisFunctionId& id, double x);

/**
 * @brief Integral over (0,1) of the product of the given basis functions.
 *
 * Computed by adaptive quadrature and cached per (family, sorted ids); the
 * cache is guarded for concurrent use. Accepts one to four factors; all must
 * share one family (FamilyMismatch otherwise).
 */
double product_moment(std::span<const BasisFunctionId> ids);

/// Integral of phi_a * phi_b * phi_c, or of phi_a * phi_b when c is empty (the unit function).
double cross_moment(const BasisFunctionId& a, const BasisFunctionId& b,
                    const std::optional<BasisFunctionId>& c = std::nullopt);

/// Integral of phi_k^4.
double fourth_moment(const BasisFunctionId& id);

/**
 * @brief Exact product-to-sum value of the integral of a product of
 * trigonometric basis functions. Only HalfCosine and TrigFull ids are
 * accepted (InvalidId otherwise). Serves as the oracle for product_moment.
 */
double trig_product_moment_analytic(std::span<const BasisFunctionId> ids);

/// Number of entries currently held by the moment cache.
std::size_t moment_cache_size();

struct Extrema {
    double min = 0.0;
    double max = 0.0;
};

/// min and max of phi_k over a uniform grid of `points` nodes including both endpoints.
Extrema grid_extrema(const BasisFunctionId& id, int points = 10001);

}  // namespace copmarkov
