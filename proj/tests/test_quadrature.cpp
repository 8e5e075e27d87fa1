#include "ultrapara/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

using ultrapara::gauss_legendre_rule;
using ultrapara::integrate;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST(Quadrature, RejectsZeroPoints)
{
    EXPECT_THROW(gauss_legendre_rule(0), std::invalid_argument);
}

TEST(Quadrature, SixPointWeightsSumToPi)
{
    const auto rule = gauss_legendre_rule(6);
    ASSERT_EQ(rule.size(), 6U);
    EXPECT_NEAR(std::accumulate(rule.weights.begin(), rule.weights.end(), 0.0), pi, 1e-12);
}

TEST(Quadrature, SixPointIntegratesLinear)
{
    const auto rule = gauss_legendre_rule(6);
    EXPECT_NEAR(integrate([](double x) { return x; }, rule), pi * pi / 2.0, 1e-12);
}

TEST(Quadrature, SixPointIntegratesSine)
{
    const auto rule = gauss_legendre_rule(6);
    const double six = integrate([](double x) { return std::sin(x); }, rule);
    EXPECT_NEAR(six, 2.0, 1e-6);
    const double sixty_four = integrate([](double x) { return std::sin(x); }, gauss_legendre_rule(64));
    EXPECT_NEAR(sixty_four, 2.0, 1e-13);
}

TEST(Quadrature, ZeroAndOne)
{
    const auto rule = gauss_legendre_rule(9);
    EXPECT_EQ(integrate([](double) { return 0.0; }, rule), 0.0);
    EXPECT_NEAR(integrate([](double) { return 1.0; }, rule), pi, 1e-12);
}

TEST(Quadrature, NonlinearIntegrandAgainstReferenceRule)
{
    const auto profile = [](double x) { return 0.25 * std::sin(3.5 * x); };
    const auto integrand = [&](double x) { return std::sin(profile(x)) * std::sin(3.5 * x); };
    const double reference = integrate(integrand, gauss_legendre_rule(256));
    EXPECT_NEAR(integrate(integrand, gauss_legendre_rule(6)), reference, 1e-4);
}

TEST(Quadrature, ExactForPolynomialsUpToDegree2NMinus1)
{
    for (std::size_t n : {1U, 2U, 3U, 6U, 10U, 17U}) {
        const auto rule = gauss_legendre_rule(n);
        const int degree = static_cast<int>(2 * n - 1);
        // Affine map of y^degree from [-1, 1] to [0, pi].
        const auto f = [degree](double x) { return std::pow(2.0 * x / pi - 1.0, degree); };
        const double exact = (degree % 2 == 1) ? 0.0 : pi / (degree + 1);
        EXPECT_NEAR(integrate(f, rule), exact, 1e-10) << "n = " << n;
        const auto even = [degree](double x) { return std::pow(2.0 * x / pi - 1.0, degree - 1); };
        EXPECT_NEAR(integrate(even, rule), pi / degree, 1e-10) << "n = " << n;
    }
}

TEST(Quadrature, NodesSymmetricAboutMidpoint)
{
    for (std::size_t n = 1; n <= 70; ++n) {
        const auto rule = gauss_legendre_rule(n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::size_t mirror = n - 1 - j;
            EXPECT_NEAR(rule.nodes[j] + rule.nodes[mirror], pi, 1e-13);
            EXPECT_NEAR(rule.weights[j], rule.weights[mirror], 1e-13);
            EXPECT_GE(rule.nodes[j], 0.0);
            EXPECT_LE(rule.nodes[j], pi);
        }
    }
}
