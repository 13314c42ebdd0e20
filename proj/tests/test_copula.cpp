#include "copmarkov/copula.hpp"
#include "copmarkov/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace copmarkov;

namespace {

const Family kFamilies[] = {Family::Sine, Family::SineCosine, Family::Legendre};

CopulaSpec spec_of(Family family, std::initializer_list<double> values)
{
    CopulaSpec spec{family, Vector(static_cast<Eigen::Index>(values.size()))};
    Eigen::Index i = 0;
    for (double v : values) {
        spec.params[i++] = v;
    }
    return spec;
}

}  // namespace

TEST_CASE("family validation")
{
    const auto sine = validate(spec_of(Family::Sine, {0.28, -0.15}));
    CHECK(sine.valid);
    CHECK(sine.interior);
    const auto bad = validate(spec_of(Family::Sine, {0.4, 0.2}));
    CHECK_FALSE(bad.valid);
    CHECK_FALSE(bad.violation.empty());
    const auto zero = validate(spec_of(Family::Legendre, {0.0, 0.0}));
    CHECK(zero.valid);
    CHECK(zero.interior);
    const auto edge = validate(spec_of(Family::Legendre, {0.0, 0.2}));
    CHECK(edge.valid);
    CHECK_FALSE(edge.interior);
    CHECK(edge.positive);
    CHECK_FALSE(validate(spec_of(Family::Sine, {0.1})).valid);
    CHECK_THROWS_AS(require_interior(spec_of(Family::Sine, {0.25, -0.25})), Error);
    CHECK_NOTHROW(require_valid(spec_of(Family::Sine, {0.25, -0.25})));
    CHECK(validate(CopulaSpec::preset(Family::Sine)).interior);
    CHECK(validate(CopulaSpec::preset(Family::Legendre)).interior);
    // The sine-cosine preset has absolute sum exactly 1/2 but a density bounded below by about 0.7.
    const auto sc = validate(CopulaSpec::preset(Family::SineCosine));
    CHECK(sc.valid);
    CHECK_FALSE(sc.interior);
    CHECK(sc.positive);
    CHECK_NOTHROW(require_positive_density(CopulaSpec::preset(Family::SineCosine)));
    CHECK_THROWS_AS(require_positive_density(spec_of(Family::Sine, {0.25, -0.25})), Error);
}

TEST_CASE("general spec validation uses the extrema condition")
{
    // Single HalfCosine term: alpha = max phi^2 = 2 for negative lambda, min*max = -2 for positive.
    GeneralSpec half{{BasisFunctionId::half_cosine(1)}, Vector::Constant(1, -0.5)};
    CHECK(validate(half).valid);
    half.coefficients[0] = -0.51;
    CHECK_FALSE(validate(half).valid);
    half.coefficients[0] = 0.49;
    CHECK(validate(half).interior);
    // Legendre k = 2: min phi = -sqrt5/2, max phi = sqrt5 -> positive lambda up to 2/5.
    GeneralSpec leg{{BasisFunctionId::legendre(2)}, Vector::Constant(1, 0.39)};
    CHECK(validate(leg).valid);
    leg.coefficients[0] = 0.41;
    CHECK_FALSE(validate(leg).valid);
    GeneralSpec mixed{{BasisFunctionId::legendre(1), BasisFunctionId::half_cosine(1)}, Vector::Zero(2)};
    CHECK_FALSE(validate(mixed).valid);
    GeneralSpec general = to_general(CopulaSpec::preset(Family::Sine));
    CHECK(general.ids.size() == 2);
    CHECK(validate(general).valid);
}

TEST_CASE("density reference values")
{
    for (Family f : kFamilies) {
        const auto indep = CopulaSpec::independence(f);
        CHECK(density(indep, 0.3, 0.8) == 1.0);
    }
    CHECK(density(spec_of(Family::Sine, {0.28, -0.15}), 0.5, 0.5) == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(density(spec_of(Family::Legendre, {0.15, 0.1}), 1.0, 1.0) == doctest::Approx(1.95).epsilon(1e-14));
    // 1 + 2 lambda1 cos(2 pi u) cos(2 pi v) + 2 mu1 sin(2 pi u) sin(2 pi v) + ...
    const auto sc = CopulaSpec::preset(Family::SineCosine);
    const double u = 0.13;
    const double v = 0.71;
    const double tau = 2.0 * std::numbers::pi;
    const double expected = 1.0 + 2.0 * 0.14 * std::cos(tau * u) * std::cos(tau * v) +
                            2.0 * 0.13 * std::cos(2 * tau * u) * std::cos(2 * tau * v) -
                            2.0 * 0.11 * std::sin(tau * u) * std::sin(tau * v) -
                            2.0 * 0.12 * std::sin(2 * tau * u) * std::sin(2 * tau * v);
    CHECK(density(sc, u, v) == doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS((void)density(spec_of(Family::Sine, {0.4, 0.2}), 0.5, 0.5), Error);
    CHECK_THROWS_AS((void)density(sc, -0.1, 0.5), Error);
}

TEST_CASE("cdf reference values and boundary conditions")
{
    const auto sine = CopulaSpec::preset(Family::Sine);
    CHECK(cdf(sine, 0.5, 0.5) == doctest::Approx(0.25 + 2.0 / (std::numbers::pi * std::numbers::pi) * 0.28));
    // Legendre double antiderivative.
    const auto leg = CopulaSpec::preset(Family::Legendre);
    const double u = 0.3;
    const double v = 0.6;
    const double expected = u * v + 3 * 0.15 * (u * u - u) * (v * v - v) +
                            5 * 0.1 * (2 * u * u * u - 3 * u * u + u) * (2 * v * v * v - 3 * v * v + v);
    CHECK(cdf(leg, u, v) == doctest::Approx(expected).epsilon(1e-14));

    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Family f : kFamilies) {
        const auto spec = CopulaSpec::preset(f);
        for (int t = 0; t < 20; ++t) {
            const double x = unit(gen);
            CHECK(std::abs(cdf(spec, x, 1.0) - x) <= 1e-12);
            CHECK(std::abs(cdf(spec, 1.0, x) - x) <= 1e-12);
            CHECK(std::abs(cdf(spec, x, 0.0)) <= 1e-12);
            CHECK(std::abs(cdf(spec, 0.0, x)) <= 1e-12);
        }
    }
}

TEST_CASE("conditional cdf")
{
    const auto sine = CopulaSpec::preset(Family::Sine);
    CHECK(conditional_cdf(sine, 0.5, 0.25) == doctest::Approx(0.25 + 0.15 / std::numbers::pi).epsilon(1e-14));
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    for (Family f : kFamilies) {
        const auto spec = CopulaSpec::preset(f);
        for (int t = 0; t < 50; ++t) {
            const double u = unit(gen);
            const double v = unit(gen);
            CHECK(std::abs(conditional_cdf(spec, u, 0.0)) < 1e-14);
            CHECK(std::abs(conditional_cdf(spec, u, 1.0) - 1.0) < 1e-14);
            const double h = 1e-5;
            const double du = (cdf(spec, u + h, v) - cdf(spec, u - h, v)) / (2 * h);
            CHECK(std::abs(du - conditional_cdf(spec, u, v)) < 1e-6);
            const double dv = (conditional_cdf(spec, u, v + h) - conditional_cdf(spec, u, v - h)) / (2 * h);
            CHECK(std::abs(dv - density(spec, u, v)) < 1e-6);
        }
    }
}

TEST_CASE("copula validity properties")
{
    std::mt19937_64 gen(9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (Family f : kFamilies) {
        const Copula copula(CopulaSpec::preset(f));
        for (int t = 0; t < 20; ++t) {
            const double u = unit(gen);
            const double mass = numerics::integrate_01([&](double v) { return copula.density(u, v); });
            CHECK(std::abs(mass - 1.0) < 1e-9);
        }
        double lowest = 1.0;
        for (int i = 0; i < 200; ++i) {
            for (int j = 0; j < 200; ++j) {
                lowest = std::min(lowest, copula.density(i / 199.0, j / 199.0));
            }
        }
        CHECK(lowest >= -1e-12);
        for (int t = 0; t < 10; ++t) {
            const double u = unit(gen);
            const double v = unit(gen);
            const double nested = numerics::integrate_01([&](double x) {
                return u * numerics::integrate_01([&](double y) { return v * copula.density(u * x, v * y); });
            });
            CHECK(std::abs(nested - copula.cdf(u, v)) < 1e-8);
        }
        const double u = unit(gen);
        double prev = -1.0;
        for (int i = 0; i <= 1000; ++i) {
            const double cur = copula.conditional_cdf(u, i / 1000.0);
            CHECK(cur > prev);
            prev = cur;
        }
    }
}

TEST_CASE("density lower bound is a true lower bound")
{
    const auto sc = CopulaSpec::preset(Family::SineCosine);
    const Copula copula(sc);
    double lowest = 10.0;
    for (int i = 0; i <= 1000; ++i) {
        for (int j = 0; j <= 1000; ++j) {
            lowest = std::min(lowest, copula.density(i / 1000.0, j / 1000.0));
        }
    }
    const double bound = density_lower_bound(family_basis(Family::SineCosine), sc.params);
    CHECK(bound <= lowest);
    CHECK(bound > 0.6);
    CHECK(density_lower_bound(family_basis(Family::Sine), spec_of(Family::Sine, {0.25, -0.25}).params) <= 0.0);
}

TEST_CASE("boundary specs are valid everywhere the density is evaluated")
{
    const CopulaSpec boundary = [] {
        CopulaSpec s = CopulaSpec::preset(Family::Sine);
        s.params << 0.25, -0.25;
        return s;
    }();
    const Copula copula(boundary);
    CHECK_FALSE(copula.interior());
    double lowest = 1.0;
    for (int i = 0; i <= 200; ++i) {
        for (int j = 0; j <= 200; ++j) {
            lowest = std::min(lowest, copula.density(i / 200.0, j / 200.0));
        }
    }
    CHECK(lowest >= -1e-12);
}

TEST_CASE("spec text round trip and parsing")
{
    for (Family f : kFamilies) {
        const auto spec = CopulaSpec::preset(f);
        const auto parsed = parse_spec(format_spec(spec));
        CHECK(parsed.family == f);
        CHECK(parsed.params == spec.params);
    }
    const auto sc = parse_spec("# comment\nfamily: sine-cosine\nparams: [0.14, 0.13, -0.11, -0.12]\n");
    CHECK(sc.family == Family::SineCosine);
    CHECK(sc.params.size() == 4);
    CHECK(parse_params("0.28,-0.15")[1] == -0.15);
    CHECK_THROWS_AS((void)parse_params("0.28,abc"), Error);
    CHECK_THROWS_AS((void)parse_family("clayton"), Error);
    CHECK(parse_family("legendre") == Family::Legendre);
    CHECK(parameter_names(Family::SineCosine)[2] == "mu1");
    CHECK(family_basis(Family::SineCosine)[2] == BasisFunctionId::trig_sin(1));
}
