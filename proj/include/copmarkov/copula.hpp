#pragma once

#include "copmarkov/basis.hpp"
#include "copmarkov/region.hpp"
#include "copmarkov/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace copmarkov {

/// The three concrete copula families.
enum class Family { Sine, SineCosine, Legendre };

[[nodiscard]] std::string to_string(Family family);

/// Parses "sine" | "sine-cosine" | "legendre"; throws ParseError otherwise.
[[nodiscard]] Family parse_family(std::string_view name);

/// Basis underlying a family.
[[nodiscard]] BasisFamily basis_family(Family family);

/**
 * @brief Eigenfunctions attached to each parameter, in parameter order.
 *
 * Sine: (cos pi x, cos 2 pi x); SineCosine: (cos 2 pi x, cos 4 pi x,
 * sin 2 pi x, sin 4 pi x) for (lambda1, lambda2, mu1, mu2); Legendre: (P1, P2).
 */
[[nodiscard]] const std::vector<BasisFunctionId>& family_basis(Family family);

[[nodiscard]] const std::vector<std::string>& parameter_names(Family family);

[[nodiscard]] Eigen::Index parameter_count(Family family);

/// Admissible parameter region of a family.
[[nodiscard]] const WeightedL1Region& family_region(Family family);

/// A family plus its parameter vector.
struct CopulaSpec {
    Family family = Family::Sine;
    Vector params;

    [[nodiscard]] static CopulaSpec preset(Family family);
    [[nodiscard]] static CopulaSpec independence(Family family);
};

/// Arbitrary finite expansion 1 + sum lambda_k phi_k(u) phi_k(v) over one basis.
struct GeneralSpec {
    std::vector<BasisFunctionId> ids;
    Vector coefficients;
};

[[nodiscard]] GeneralSpec to_general(const CopulaSpec& spec);

struct Validation {
    bool valid = false;
    bool interior = false;
    bool positive = false;  ///< density certified strictly positive on [0,1]^2
    std::string violation;  ///< empty when valid
};

/**
 * @brief Certified lower bound of the density over [0,1]^2.
 *
 * Minimum over a uniform grid with spacing h, less L h where L bounds both
 * partial derivatives of c. Positive values prove strict positivity.
 */
[[nodiscard]] double density_lower_bound(const std::vector<BasisFunctionId>& ids, const Vector& coefficients,
                                         int grid_points = 401);

/// Family constraint check.
[[nodiscard]] Validation validate(const CopulaSpec& spec);

/**
 * @brief Sufficient nonnegativity condition for a general expansion:
 * 1 + sum_k lambda_k alpha_k >= 0, with alpha_k = max phi_k^2 for negative
 * lambda_k and min phi_k * max phi_k for positive lambda_k. Extrema come
 * from grid_extrema.
 */
[[nodiscard]] Validation validate(const GeneralSpec& spec);

/// Throws InvalidSpec when the spec is not valid.
void require_valid(const CopulaSpec& spec);

/// Throws InvalidSpec when invalid, NonInteriorSpec when on the boundary.
void require_interior(const CopulaSpec& spec);

/**
 * @brief Throws InvalidSpec when invalid and NonInteriorSpec unless the density
 * is strictly positive. Weaker than require_interior: a boundary spec such as
 * the sine-cosine preset (absolute sum exactly 1/2) can still have c > 0.
 */
void require_positive_density(const CopulaSpec& spec);

/**
 * @brief Validated copula ready for repeated evaluation.
 *
 * density c(u,v) = 1 + sum_k lambda_k phi_k(u) phi_k(v)
 * cdf C(u,v) = uv + sum_k lambda_k Phi_k(u) Phi_k(v)
 * conditional C_1(u,v) = v + sum_k lambda_k phi_k(u) Phi_k(v)
 * with Phi_k the antiderivative of phi_k from 0.
 */
class Copula {
public:
    explicit Copula(const CopulaSpec& spec);
    explicit Copula(const GeneralSpec& spec);

    [[nodiscard]] const std::vector<BasisFunctionId>& ids() const { return ids_; }
    [[nodiscard]] const Vector& coefficients() const { return coefficients_; }
    [[nodiscard]] bool interior() const { return interior_; }
    [[nodiscard]] bool positive() const { return positive_; }
    [[nodiscard]] std::optional<Family> family() const { return family_; }

    template <typename Scalar>
    Scalar density(Scalar u, Scalar v) const
    {
        Scalar sum = Scalar(1);
        for (std::size_t k = 0; k < ids_.size(); ++k) {
            sum += Scalar(coefficients_[static_cast<Eigen::Index>(k)]) * eval_phi_unchecked(ids_[k], u) *
                   eval_phi_unchecked(ids_[k], v);
        }
        return sum;
    }

    template <typename Scalar>
    Scalar cdf(Scalar u, Scalar v) const
    {
        Scalar sum = u * v;
        for (std::size_t k = 0; k < ids_.size(); ++k) {
            sum += Scalar(coefficients_[static_cast<Eigen::Index>(k)]) * eval_phi_integral_unchecked(ids_[k], u) *
                   eval_phi_integral_unchecked(ids_[k], v);
        }
        return sum;
    }

    template <typename Scalar>
    Scalar conditional_cdf(Scalar u, Scalar v) const
    {
        Scalar sum = v;
        for (std::size_t k = 0; k < ids_.size(); ++k) {
            sum += Scalar(coefficients_[static_cast<Eigen::Index>(k)]) * eval_phi_unchecked(ids_[k], u) *
                   eval_phi_integral_unchecked(ids_[k], v);
        }
        return sum;
    }

    /**
     * @brief Weights w_k = lambda_k phi_k(u) such that C_1(u, v) = v + sum_k w_k Phi_k(v).
     * Lets the sampler hoist the dependence on the conditioning value.
     */
    [[nodiscard]] Vector conditional_weights(double u) const;

private:
    std::vector<BasisFunctionId> ids_;
    Vector coefficients_;
    bool interior_ = false;
    bool positive_ = false;
    std::optional<Family> family_;
};

double density(const CopulaSpec& spec, double u, double v);
double cdf(const CopulaSpec& spec, double u, double v);
double conditional_cdf(const CopulaSpec& spec, double u, double v);

/// Parses a comma-separated list of reals, e.g. "0.28,-0.15".
[[nodiscard]] Vector parse_params(std::string_view text);

/// Plain-text key-value rendering: "family = sine\nparams = 0.28, -0.15\n".
[[nodiscard]] std::string format_spec(const CopulaSpec& spec);

/// Inverse of format_spec; also accepts ':' as separator and '#' comments.
[[nodiscard]] CopulaSpec parse_spec(std::string_view text);

}  // namespace copmarkov
