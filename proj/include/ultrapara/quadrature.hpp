#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ultrapara {

/// Gauss-Legendre rule mapped onto [0, pi]. Nodes are ascending.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

namespace detail {

// Legendre P_n(x) and P_n'(x) by the three-term recurrence.
inline void legendre_with_derivative(std::size_t n, double x, double& p, double& dp)
{
    double p0 = 1.0;
    double p1 = x;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
    }
    p = p1;
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
}

} // namespace detail

/**
 * Standard Gauss-Legendre rule with `point_count` nodes, affinely mapped from
 * [-1, 1] to [0, pi]. Roots are found by Newton iteration on P_n starting
 * from the Tricomi estimate; the lower half is mirrored so that nodes are
 * exactly symmetric about pi/2.
 */
inline QuadratureRule gauss_legendre_rule(std::size_t point_count)
{
    if (point_count == 0) {
        throw std::invalid_argument("gauss_legendre_rule: point_count must be positive");
    }
    constexpr double pi = std::numbers::pi;
    const std::size_t n = point_count;
    std::vector<double> xi(n);
    std::vector<double> wi(n);

    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i < half; ++i) {
        // i-th largest root of P_n
        double x = std::cos(pi * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double p = 0.0;
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            detail::legendre_with_derivative(n, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) <= 1e-16) {
                break;
            }
        }
        detail::legendre_with_derivative(n, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        // ascending order: the negative root goes first
        xi[i] = -x;
        xi[n - 1 - i] = x;
        wi[i] = w;
        wi[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        xi[n / 2] = 0.0;
    }

    QuadratureRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const double scale = pi / 2.0;
    for (std::size_t j = 0; j < n; ++j) {
        rule.weights[j] = scale * wi[j];
    }
    for (std::size_t j = 0; j < half; ++j) {
        const double x = scale * (xi[j] + 1.0);
        rule.nodes[j] = x;
        rule.nodes[n - 1 - j] = pi - x;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = scale;
    }
    return rule;
}

/// Sum_j w_j f(x_j).
template <class F>
double integrate(F&& f, const QuadratureRule& rule)
{
    double sum = 0.0;
    for (std::size_t j = 0; j < rule.size(); ++j) {
        sum += rule.weights[j] * f(rule.nodes[j]);
    }
    return sum;
}

} // namespace ultrapara
