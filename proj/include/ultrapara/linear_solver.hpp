#pragma once

#include "ultrapara/operator_spectrum.hpp"
#include "ultrapara/quadrature.hpp"
#include "ultrapara/spectral_field.hpp"
#include "ultrapara/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ultrapara {

/// Raised when problem data cannot be discretized (e.g. alpha(0) != beta(0)).
class CompatibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// alpha(x, s) or beta(x, t)
using InitialProfile = std::function<double(double x, double time)>;
/// f(x, t, s)
using SourceFunction = std::function<double(double x, double t, double s)>;

inline constexpr std::size_t default_projection_points = 64;
inline constexpr double compatibility_tolerance = 1e-10;

struct LinearProblem {
    EigenBasis basis;
    TimeGrid grid;
    InitialProfile alpha;
    InitialProfile beta;
    SourceFunction source;
    QuadratureRule projection_rule = gauss_legendre_rule(default_projection_points);
};

/**
 * exp(-(lambda / 2) * dt_sum): the integrating-factor ratio mu(a, b) / mu(k, m)
 * written as one exponential with a non-positive argument, where dt_sum is
 * (t_k - t_a) + (s_m - s_b) >= 0.
 */
inline double attenuation(double lambda, double dt_sum)
{
    if (dt_sum < 0.0) {
        throw std::invalid_argument("attenuation: negative time displacement");
    }
    return std::exp(-0.5 * lambda * dt_sum);
}

/// Throws CompatibilityError unless alpha(x, 0) == beta(x, 0) at the test points.
inline void check_compatibility(const InitialProfile& alpha, const InitialProfile& beta,
                                const QuadratureRule& rule, double tolerance = compatibility_tolerance)
{
    std::vector<double> xs(rule.nodes);
    constexpr int equispaced = 32;
    for (int j = 0; j <= equispaced; ++j) {
        xs.push_back(std::numbers::pi * j / equispaced);
    }
    for (const double x : xs) {
        const double a = alpha(x, 0.0);
        const double b = beta(x, 0.0);
        if (std::abs(a - b) > tolerance * std::max(1.0, std::abs(a))) {
            throw CompatibilityError("initial data incompatible at t = s = 0: alpha(" + std::to_string(x) +
                                     ", 0) = " + std::to_string(a) + " but beta = " + std::to_string(b));
        }
    }
}

/**
 * Projected boundary data for the active modes: alpha_n(s_m) and beta_n(t_k),
 * each slot-major with M + 1 entries per mode.
 */
struct BoundaryCoefficients {
    std::vector<double> alpha;
    std::vector<double> beta;
};

inline BoundaryCoefficients project_boundary(const EigenBasis& basis, std::span<const int> modes,
                                             const TimeGrid& grid, const InitialProfile& alpha,
                                             const InitialProfile& beta, const QuadratureRule& rule)
{
    const ModalTable table(basis, {modes.begin(), modes.end()}, rule);
    const std::size_t side = static_cast<std::size_t>(grid.steps()) + 1;
    const std::size_t nm = modes.size();
    BoundaryCoefficients out{std::vector<double>(nm * side), std::vector<double>(nm * side)};
    std::vector<double> values(rule.size());
    std::vector<double> coeffs(nm);
    for (std::size_t i = 0; i < side; ++i) {
        const double time = grid.node(static_cast<int>(i));
        for (std::size_t j = 0; j < rule.size(); ++j) {
            values[j] = alpha(rule.nodes[j], time);
        }
        table.project(values, coeffs);
        for (std::size_t slot = 0; slot < nm; ++slot) {
            out.alpha[slot * side + i] = coeffs[slot];
        }
        for (std::size_t j = 0; j < rule.size(); ++j) {
            values[j] = beta(rule.nodes[j], time);
        }
        table.project(values, coeffs);
        for (std::size_t slot = 0; slot < nm; ++slot) {
            out.beta[slot * side + i] = coeffs[slot];
        }
    }
    return out;
}

namespace detail {

/// attenuation(lambda, 2 j omega) for j = 0..M: the factor for a point j diagonal steps back.
inline std::vector<double> diagonal_decay(double lambda, const TimeGrid& grid)
{
    std::vector<double> decay(static_cast<std::size_t>(grid.steps()) + 1);
    for (std::size_t j = 0; j < decay.size(); ++j) {
        decay[j] = attenuation(lambda, 2.0 * static_cast<double>(j) * grid.step());
    }
    return decay;
}

/**
 * Fills one mode's (M+1)^2 block from per-cell source coefficients
 * (entry (a, b) is the sample for the cell ending at lattice point (a, b))
 * and the projected boundary traces. Each interior value is the direct sum
 * along its characteristic diagonal, l ascending.
 */
inline void assemble_mode(std::span<const double> sources, std::span<const double> alpha,
                          std::span<const double> beta, std::span<const double> decay, double omega,
                          std::span<double> block)
{
    const std::size_t side = alpha.size();
    const int steps = static_cast<int>(side) - 1;
    for (std::size_t m = 0; m < side; ++m) {
        block[m] = alpha[m];
    }
    for (std::size_t k = 1; k < side; ++k) {
        block[k * side] = beta[k];
    }
    for (int k = 1; k <= steps; ++k) {
        for (int m = 1; m <= steps; ++m) {
            const DiagonalTrace trace = characteristic_trace(k, m);
            const int p = trace.depth;
            double sum = 0.0;
            for (int l = 1; l <= p; ++l) {
                const auto a = static_cast<std::size_t>(k - p + l);
                const auto b = static_cast<std::size_t>(m - p + l);
                sum += decay[static_cast<std::size_t>(p - l)] * sources[a * side + b];
            }
            const double foot = trace.foot_on_beta_axis()
                                    ? beta[static_cast<std::size_t>(trace.foot[0])]
                                    : alpha[static_cast<std::size_t>(trace.foot[1])];
            block[static_cast<std::size_t>(k) * side + static_cast<std::size_t>(m)] =
                omega * sum + decay[static_cast<std::size_t>(p)] * foot;
        }
    }
}

} // namespace detail

/// Source coefficients sampled at cell centres (t_a - omega/2, s_b - omega/2), a, b >= 1.
inline std::vector<double> project_midpoint_source(const EigenBasis& basis, std::span<const int> modes,
                                                   const TimeGrid& grid, const SourceFunction& source,
                                                   const QuadratureRule& rule)
{
    const ModalTable table(basis, {modes.begin(), modes.end()}, rule);
    const std::size_t side = static_cast<std::size_t>(grid.steps()) + 1;
    const std::size_t nm = modes.size();
    const double half = 0.5 * grid.step();
    std::vector<double> out(nm * side * side, 0.0);
    std::vector<double> values(rule.size());
    std::vector<double> coeffs(nm);
    for (std::size_t a = 1; a < side; ++a) {
        const double t = grid.node(static_cast<int>(a)) - half;
        for (std::size_t b = 1; b < side; ++b) {
            const double s = grid.node(static_cast<int>(b)) - half;
            for (std::size_t j = 0; j < rule.size(); ++j) {
                values[j] = source(rule.nodes[j], t, s);
            }
            table.project(values, coeffs);
            for (std::size_t slot = 0; slot < nm; ++slot) {
                out[(slot * side + a) * side + b] = coeffs[slot];
            }
        }
    }
    return out;
}

inline void check_modes(const EigenBasis& basis, std::span<const int> modes)
{
    if (modes.empty()) {
        throw std::invalid_argument("no active modes");
    }
    for (const int n : modes) {
        if (n < 1 || static_cast<std::size_t>(n) > basis.size()) {
            throw std::invalid_argument("mode " + std::to_string(n) + " not in basis of size " +
                                        std::to_string(basis.size()));
        }
    }
}

/**
 * Discrete solution of u_t + u_s + L u = f on the uniform two-time lattice:
 *
 *   u_n^{k,m} = omega * sum_{l=1..p} A(2(p-l) omega) f_n(t_a - omega/2, s_b - omega/2)
 *             + A(2 p omega) * (boundary coefficient at the foot)
 *
 * with p = min(k, m), (a, b) = (k - p + l, m - p + l), A = attenuation(lambda_n, .),
 * and the foot carrying beta_n(t_{k-m}) when k > m and alpha_n(s_{m-k}) otherwise.
 */
inline SpectralField solve_linear(const LinearProblem& problem, std::span<const int> modes)
{
    check_modes(problem.basis, modes);
    check_compatibility(problem.alpha, problem.beta, problem.projection_rule);

    const TimeGrid& grid = problem.grid;
    const std::size_t side = static_cast<std::size_t>(grid.steps()) + 1;
    const BoundaryCoefficients boundary = project_boundary(problem.basis, modes, grid, problem.alpha,
                                                           problem.beta, problem.projection_rule);
    const std::vector<double> sources =
        problem.source ? project_midpoint_source(problem.basis, modes, grid, problem.source,
                                                 problem.projection_rule)
                       : std::vector<double>(modes.size() * side * side, 0.0);

    SpectralField field(grid, {modes.begin(), modes.end()});
    for (std::size_t slot = 0; slot < modes.size(); ++slot) {
        const auto decay = detail::diagonal_decay(problem.basis.eigenvalue(modes[slot]), grid);
        detail::assemble_mode(std::span(sources).subspan(slot * side * side, side * side),
                              std::span(boundary.alpha).subspan(slot * side, side),
                              std::span(boundary.beta).subspan(slot * side, side), decay, grid.step(),
                              field.mode_block(slot));
    }
    return field;
}

inline SpectralField solve_linear(const LinearProblem& problem, std::size_t n_max)
{
    if (n_max > problem.basis.size()) {
        throw std::invalid_argument("solve_linear: n_max exceeds basis size");
    }
    const auto modes = all_modes(n_max);
    return solve_linear(problem, modes);
}

/// lhs <= rhs comparison of an a priori / stability estimate.
struct BoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    bool holds = false;
};

namespace detail {

// sup over i of sum_slot values[slot * side + i]^2
inline double sup_trace_norm_squared(std::span<const double> values, std::size_t modes, std::size_t side)
{
    double sup = 0.0;
    for (std::size_t i = 0; i < side; ++i) {
        double sum = 0.0;
        for (std::size_t slot = 0; slot < modes; ++slot) {
            const double c = values[slot * side + i];
            sum += c * c;
        }
        sup = std::max(sup, sum);
    }
    return sup;
}

inline double sup_interior_norm_squared(std::span<const double> values, std::size_t modes,
                                        std::size_t side)
{
    double sup = 0.0;
    for (std::size_t a = 1; a < side; ++a) {
        for (std::size_t b = 1; b < side; ++b) {
            double sum = 0.0;
            for (std::size_t slot = 0; slot < modes; ++slot) {
                const double c = values[(slot * side + a) * side + b];
                sum += c * c;
            }
            sup = std::max(sup, sum);
        }
    }
    return sup;
}

} // namespace detail

/**
 * Stability estimate for the linear scheme:
 *   sup ||u^{k,m}||^2 <= C_T (sup ||f^{k,m}||^2 + sup ||alpha^m||^2 + sup ||beta^k||^2),
 * with C_T = 2 max(T^2, 1). Norms are Parseval sums over the field's modes,
 * f sampled at the same cell centres the scheme uses.
 */
inline BoundReport stability_bound_check(const SpectralField& field, const LinearProblem& problem)
{
    const TimeGrid& grid = field.grid();
    const auto modes = field.modes();
    const std::size_t side = static_cast<std::size_t>(grid.steps()) + 1;
    const BoundaryCoefficients boundary = project_boundary(problem.basis, modes, grid, problem.alpha,
                                                           problem.beta, problem.projection_rule);
    double sup_source = 0.0;
    if (problem.source) {
        const auto sources = project_midpoint_source(problem.basis, modes, grid, problem.source,
                                                     problem.projection_rule);
        sup_source = detail::sup_interior_norm_squared(sources, modes.size(), side);
    }
    const double sup_alpha = detail::sup_trace_norm_squared(boundary.alpha, modes.size(), side);
    const double sup_beta = detail::sup_trace_norm_squared(boundary.beta, modes.size(), side);
    const double horizon = grid.horizon();

    BoundReport report;
    report.constant = 2.0 * std::max(horizon * horizon, 1.0);
    report.lhs = field.interior_sup_norm_squared();
    report.rhs = report.constant * (sup_source + sup_alpha + sup_beta);
    report.holds = report.lhs <= report.rhs;
    return report;
}

} // namespace ultrapara
