#pragma once

#include "ultrapara/linear_solver.hpp"
#include "ultrapara/operator_spectrum.hpp"
#include "ultrapara/quadrature.hpp"
#include "ultrapara/spectral_field.hpp"
#include "ultrapara/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ultrapara {

/// f(u, x, t, s)
using NonlinearFunction = std::function<double(double u, double x, double t, double s)>;
/// u(x, t, s)
using ExactSolution = std::function<double(double x, double t, double s)>;

inline constexpr std::size_t default_nonlinear_points = 6;

/// Where a u-independent source term is sampled on each lattice cell.
enum class Sampling {
    LatticeNode, // (t_a, s_b)
    CellCentre,  // (t_a - omega/2, s_b - omega/2)
};

/// f(u) with ||f(u) - f(v)|| <= lipschitz * ||u - v||.
struct LipschitzSource {
    NonlinearFunction f;
    double lipschitz = 0.0;
};

/// f(u) = g(u) * h(u) with |g| <= g_bound and h Lipschitz with constant h_lipschitz.
struct ProductSource {
    NonlinearFunction g;
    NonlinearFunction h;
    double g_bound = 0.0;
    double h_lipschitz = 0.0;
};

using NonlinearSource = std::variant<LipschitzSource, ProductSource>;

/// u-independent part of the source, projected with the accurate rule.
struct DataTerm {
    SourceFunction f;
    Sampling sampling = Sampling::LatticeNode;
};

/**
 * u_t + u_s + L u = N(u, x, t, s) + d(x, t, s). The nonlinear term N is
 * projected with `nonlinear_rule` (evaluated at the previous iterate); the
 * data term d and the initial profiles with `projection_rule`.
 */
struct NonlinearProblem {
    EigenBasis basis;
    TimeGrid grid;
    InitialProfile alpha;
    InitialProfile beta;
    NonlinearSource source;
    std::optional<DataTerm> data;
    ExactSolution exact;
    QuadratureRule nonlinear_rule = gauss_legendre_rule(default_nonlinear_points);
    QuadratureRule projection_rule = gauss_legendre_rule(default_projection_points);
};

/// T K for the Lipschitz form, T K1 K2 for the product form.
inline double kappa_bound(const NonlinearProblem& problem)
{
    const double horizon = problem.grid.horizon();
    if (const auto* lip = std::get_if<LipschitzSource>(&problem.source)) {
        return horizon * lip->lipschitz;
    }
    const auto& prod = std::get<ProductSource>(problem.source);
    return horizon * prod.g_bound * prod.h_lipschitz;
}

struct IterationReport {
    int iterations = 0;
    /// sup_{k,m} ||u_{q}^{k,m} - u_{q-1}^{k,m}|| for q = 1..iterations
    std::vector<double> sup_increments;
    double kappa_estimate = 0.0;
    double kappa_bound = 0.0;
    std::vector<std::string> warnings;

    /// kappa^q / (1 - kappa) * sup ||u_1||, using the bound; empty when kappa >= 1.
    [[nodiscard]] std::optional<double> a_posteriori_distance() const
    {
        if (kappa_bound >= 1.0 || sup_increments.empty()) {
            return std::nullopt;
        }
        return std::pow(kappa_bound, iterations) / (1.0 - kappa_bound) * sup_increments.front();
    }
};

struct PicardResult {
    SpectralField field;
    SpectralField previous; // u_{q-1}
    IterationReport report;
};

/**
 * One Picard sweep u_{q-1} -> u_q over the whole lattice. Boundary traces,
 * the data term and the basis tables are prepared once per problem.
 */
class PicardSweeper {
public:
    PicardSweeper(const NonlinearProblem& problem, std::span<const int> modes)
        : problem_(&problem), modes_(validated_modes(problem, modes)),
          side_(static_cast<std::size_t>(problem.grid.steps()) + 1),
          nonlinear_table_(problem.basis, modes_, problem.nonlinear_rule),
          boundary_(project_boundary(problem.basis, modes_, problem.grid, problem.alpha, problem.beta,
                                     problem.projection_rule)),
          data_(project_data())
    {
        for (const int n : modes_) {
            decay_.push_back(detail::diagonal_decay(problem.basis.eigenvalue(n), problem.grid));
        }
    }

    [[nodiscard]] std::span<const int> modes() const noexcept { return modes_; }
    [[nodiscard]] const BoundaryCoefficients& boundary() const noexcept { return boundary_; }
    /// Data-term coefficients, slot-major (M+1)^2 blocks.
    [[nodiscard]] std::span<const double> data_coefficients() const noexcept { return data_; }

    /// Full source coefficients <N(u^{a,b}) + d, phi_n> at every interior lattice point.
    [[nodiscard]] std::vector<double> source_coefficients(const SpectralField& previous) const
    {
        return nonlinear_coefficients(
            [&](std::size_t a, std::size_t b, std::span<double> coeffs) {
                previous.coefficients_at(static_cast<int>(a), static_cast<int>(b), coeffs);
            },
            [this](double u, double x, double t, double s) { return evaluate_source(u, x, t, s); },
            true);
    }

    /// <N(0) + d, phi_n>: the source at u = 0.
    [[nodiscard]] std::vector<double> zero_state_coefficients() const
    {
        return nonlinear_coefficients(
            [](std::size_t, std::size_t, std::span<double> coeffs) {
                std::fill(coeffs.begin(), coeffs.end(), 0.0);
            },
            [this](double u, double x, double t, double s) { return evaluate_source(u, x, t, s); },
            true);
    }

    /// <h(0), phi_n> for the product form; throws for the Lipschitz form.
    [[nodiscard]] std::vector<double> product_h_zero_coefficients() const
    {
        const auto& prod = std::get<ProductSource>(problem_->source);
        return nonlinear_coefficients(
            [](std::size_t, std::size_t, std::span<double> coeffs) {
                std::fill(coeffs.begin(), coeffs.end(), 0.0);
            },
            [&prod](double u, double x, double t, double s) { return prod.h(u, x, t, s); }, false);
    }

    [[nodiscard]] SpectralField sweep(const SpectralField& previous) const
    {
        if (previous.mode_count() != modes_.size() || previous.steps() != problem_->grid.steps()) {
            throw std::invalid_argument("PicardSweeper: iterate shape does not match problem");
        }
        const auto sources = source_coefficients(previous);
        SpectralField next(problem_->grid, modes_);
        const std::size_t block = side_ * side_;
        for (std::size_t slot = 0; slot < modes_.size(); ++slot) {
            detail::assemble_mode(std::span(sources).subspan(slot * block, block),
                                  std::span(boundary_.alpha).subspan(slot * side_, side_),
                                  std::span(boundary_.beta).subspan(slot * side_, side_), decay_[slot],
                                  problem_->grid.step(), next.mode_block(slot));
        }
        return next;
    }

private:
    static std::vector<int> validated_modes(const NonlinearProblem& problem, std::span<const int> modes)
    {
        check_modes(problem.basis, modes);
        check_compatibility(problem.alpha, problem.beta, problem.projection_rule);
        return {modes.begin(), modes.end()};
    }

    double evaluate_source(double u, double x, double t, double s) const
    {
        if (const auto* lip = std::get_if<LipschitzSource>(&problem_->source)) {
            return lip->f(u, x, t, s);
        }
        const auto& prod = std::get<ProductSource>(problem_->source);
        return prod.g(u, x, t, s) * prod.h(u, x, t, s);
    }

    // Projects fn(u(x), x, t_a, s_b) with the nonlinear rule at every interior
    // lattice node, where u is synthesized from the coefficients `state` gives.
    template <class State, class Fn>
    std::vector<double> nonlinear_coefficients(State&& state, Fn&& fn, bool add_data) const
    {
        const std::size_t nm = modes_.size();
        const std::size_t nj = nonlinear_table_.node_count();
        const auto nodes = nonlinear_table_.nodes();
        std::vector<double> out(nm * side_ * side_, 0.0);
        std::vector<double> coeffs(nm);
        std::vector<double> u(nj);
        std::vector<double> values(nj);
        std::vector<double> projected(nm);
        for (std::size_t a = 1; a < side_; ++a) {
            const double t = problem_->grid.node(static_cast<int>(a));
            for (std::size_t b = 1; b < side_; ++b) {
                const double s = problem_->grid.node(static_cast<int>(b));
                state(a, b, std::span<double>(coeffs));
                nonlinear_table_.synthesize(coeffs, u);
                for (std::size_t j = 0; j < nj; ++j) {
                    values[j] = fn(u[j], nodes[j], t, s);
                }
                nonlinear_table_.project(values, projected);
                for (std::size_t slot = 0; slot < nm; ++slot) {
                    const std::size_t idx = (slot * side_ + a) * side_ + b;
                    out[idx] = projected[slot] + (add_data ? data_[idx] : 0.0);
                }
            }
        }
        return out;
    }

    std::vector<double> project_data() const
    {
        const std::size_t nm = modes_.size();
        std::vector<double> out(nm * side_ * side_, 0.0);
        if (!problem_->data || !problem_->data->f) {
            return out;
        }
        const ModalTable table(problem_->basis, modes_, problem_->projection_rule);
        const auto nodes = table.nodes();
        const double shift =
            problem_->data->sampling == Sampling::CellCentre ? 0.5 * problem_->grid.step() : 0.0;
        std::vector<double> values(nodes.size());
        std::vector<double> coeffs(nm);
        for (std::size_t a = 1; a < side_; ++a) {
            const double t = problem_->grid.node(static_cast<int>(a)) - shift;
            for (std::size_t b = 1; b < side_; ++b) {
                const double s = problem_->grid.node(static_cast<int>(b)) - shift;
                for (std::size_t j = 0; j < nodes.size(); ++j) {
                    values[j] = problem_->data->f(nodes[j], t, s);
                }
                table.project(values, coeffs);
                for (std::size_t slot = 0; slot < nm; ++slot) {
                    out[(slot * side_ + a) * side_ + b] = coeffs[slot];
                }
            }
        }
        return out;
    }

    const NonlinearProblem* problem_;
    std::vector<int> modes_;
    std::size_t side_;
    ModalTable nonlinear_table_;
    BoundaryCoefficients boundary_;
    std::vector<double> data_;
    std::vector<std::vector<double>> decay_;
};

/**
 * Picard iteration from u_0 = 0. Every sweep rebuilds the whole lattice from
 * the complete previous iterate. Stops after `q_max` sweeps or as soon as
 * the sup-increment drops to `tol` or below (pass tol = 0 for a fixed count).
 */
inline PicardResult picard_solve(const NonlinearProblem& problem, std::span<const int> modes, int q_max,
                                 double tol)
{
    if (q_max < 1) {
        throw std::invalid_argument("picard_solve: q_max must be >= 1");
    }
    const PicardSweeper sweeper(problem, modes);
    const std::vector<int> mode_list(modes.begin(), modes.end());

    IterationReport report;
    report.kappa_bound = kappa_bound(problem);
    if (report.kappa_bound >= 1.0) {
        std::ostringstream msg;
        msg << "contraction bound kappa = " << report.kappa_bound
            << " >= 1; convergence of the iteration is not guaranteed";
        report.warnings.push_back(msg.str());
    }

    SpectralField previous(problem.grid, mode_list);
    SpectralField current(problem.grid, mode_list);
    for (int q = 1; q <= q_max; ++q) {
        SpectralField next = sweeper.sweep(current);
        const double increment = interior_sup_distance(next, current);
        report.sup_increments.push_back(increment);
        report.iterations = q;
        previous = std::move(current);
        current = std::move(next);
        if (tol > 0.0 && increment <= tol) {
            break;
        }
    }
    for (std::size_t i = 1; i < report.sup_increments.size(); ++i) {
        if (report.sup_increments[i - 1] > 0.0) {
            report.kappa_estimate =
                std::max(report.kappa_estimate, report.sup_increments[i] / report.sup_increments[i - 1]);
        }
    }
    return {std::move(current), std::move(previous), std::move(report)};
}

inline PicardResult picard_solve(const NonlinearProblem& problem, std::size_t n_max, int q_max, double tol)
{
    if (n_max > problem.basis.size()) {
        throw std::invalid_argument("picard_solve: n_max exceeds basis size");
    }
    const auto modes = all_modes(n_max);
    return picard_solve(problem, modes, q_max, tol);
}

inline constexpr double contraction_slack = 0.05;

/**
 * Every consecutive increment ratio is at most kappa_bound + 0.05. Increments
 * below 1e-13 of the first one are roundoff and count as converged; a
 * converged increment must stay converged.
 */
inline bool contraction_check(const IterationReport& report)
{
    const auto& inc = report.sup_increments;
    if (inc.size() < 3) {
        throw std::invalid_argument("contraction_check: need at least 3 increments");
    }
    const double floor = 1e-13 * std::max(inc.front(), std::numeric_limits<double>::min());
    const double limit = report.kappa_bound + contraction_slack;
    for (std::size_t i = 1; i < inc.size(); ++i) {
        if (inc[i - 1] <= floor) {
            if (inc[i] > floor) {
                return false;
            }
            continue;
        }
        if (inc[i] / inc[i - 1] > limit) {
            return false;
        }
    }
    return true;
}

/**
 * A priori estimate for consecutive iterates:
 *
 *   Lipschitz: sup||u_q||^2 <= C (sup||u_{q-1}||^2 + sup||f(0)||^2 + sup||alpha||^2 + sup||beta||^2),
 *              C = max(2 T^2 (K^2 + 1), 2), f(0) including the data term;
 *   product:   sup||u_q||^2 <= C (sup||u_{q-1}||^2 + sup||h(0)||^2 + sup||d||^2 + sup||alpha||^2 + sup||beta||^2),
 *              C = max(2 T^2 (K1^2 K2^2 + K1^2 + [d present]), 2).
 */
inline BoundReport a_priori_bound_check(const SpectralField& field_q, const SpectralField& field_qm1,
                                        const NonlinearProblem& problem)
{
    const auto modes = field_q.modes();
    const PicardSweeper sweeper(problem, modes);
    const std::size_t side = static_cast<std::size_t>(problem.grid.steps()) + 1;
    const std::size_t nm = modes.size();
    const double horizon = problem.grid.horizon();

    double source_terms = 0.0;
    double constant = 0.0;
    if (const auto* lip = std::get_if<LipschitzSource>(&problem.source)) {
        source_terms = detail::sup_interior_norm_squared(sweeper.zero_state_coefficients(), nm, side);
        constant = std::max(2.0 * horizon * horizon * (lip->lipschitz * lip->lipschitz + 1.0), 2.0);
    } else {
        const auto& prod = std::get<ProductSource>(problem.source);
        const bool has_data = problem.data.has_value() && static_cast<bool>(problem.data->f);
        source_terms = detail::sup_interior_norm_squared(sweeper.product_h_zero_coefficients(), nm, side) +
                       detail::sup_interior_norm_squared(sweeper.data_coefficients(), nm, side);
        const double k1 = prod.g_bound;
        const double k2 = prod.h_lipschitz;
        constant = std::max(
            2.0 * horizon * horizon * (k1 * k1 * k2 * k2 + k1 * k1 + (has_data ? 1.0 : 0.0)), 2.0);
    }
    const auto& boundary = sweeper.boundary();
    const double sup_alpha = detail::sup_trace_norm_squared(boundary.alpha, nm, side);
    const double sup_beta = detail::sup_trace_norm_squared(boundary.beta, nm, side);

    BoundReport report;
    report.constant = constant;
    report.lhs = field_q.interior_sup_norm_squared();
    report.rhs = constant * (field_qm1.interior_sup_norm_squared() + source_terms + sup_alpha + sup_beta);
    report.holds = report.lhs <= report.rhs;
    return report;
}

struct SourceConditionReport {
    double observed = 0.0; // largest sampled Lipschitz ratio (h's ratio for the product form)
    double observed_g = 0.0; // largest sampled |g| (product form only)
    bool holds = false;
};

/**
 * Samples the source conditions on random fields: random modal coefficient
 * vectors u, v over the basis, random (t, s) in [0, T]^2, L2 norms on
 * `projection_rule`. Checks ||N(u) - N(v)|| <= K ||u - v|| (Lipschitz form)
 * or |g| <= K1 and ||h(u) - h(v)|| <= K2 ||u - v|| (product form).
 */
inline SourceConditionReport check_source_conditions(const NonlinearProblem& problem, int samples,
                                                     unsigned seed, double amplitude = 2.0)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> coeff_dist(0.0, amplitude);
    std::uniform_real_distribution<double> time_dist(0.0, problem.grid.horizon());
    const auto modes = all_modes(problem.basis.size());
    const ModalTable table(problem.basis, modes, problem.projection_rule);
    const auto& rule = problem.projection_rule;
    const std::size_t nj = rule.size();

    std::vector<double> cu(modes.size());
    std::vector<double> cv(modes.size());
    std::vector<double> u(nj);
    std::vector<double> v(nj);
    SourceConditionReport report;
    bool g_ok = true;
    constexpr double relative_slack = 1e-12;

    const auto* lip = std::get_if<LipschitzSource>(&problem.source);
    const auto* prod = std::get_if<ProductSource>(&problem.source);
    const NonlinearFunction& map = lip ? lip->f : prod->h;
    const double bound = lip ? lip->lipschitz : prod->h_lipschitz;

    for (int sample = 0; sample < samples; ++sample) {
        for (std::size_t i = 0; i < modes.size(); ++i) {
            cu[i] = coeff_dist(rng);
            cv[i] = coeff_dist(rng);
        }
        table.synthesize(cu, u);
        table.synthesize(cv, v);
        const double t = time_dist(rng);
        const double s = time_dist(rng);
        double diff_out = 0.0;
        double diff_in = 0.0;
        for (std::size_t j = 0; j < nj; ++j) {
            const double x = rule.nodes[j];
            const double d = map(u[j], x, t, s) - map(v[j], x, t, s);
            diff_out += rule.weights[j] * d * d;
            diff_in += rule.weights[j] * (u[j] - v[j]) * (u[j] - v[j]);
            if (prod) {
                const double g = std::abs(prod->g(u[j], x, t, s));
                report.observed_g = std::max(report.observed_g, g);
                g_ok = g_ok && g <= prod->g_bound * (1.0 + relative_slack);
            }
        }
        if (diff_in > 0.0) {
            report.observed = std::max(report.observed, std::sqrt(diff_out / diff_in));
        }
    }
    report.holds = g_ok && report.observed <= bound * (1.0 + relative_slack) + relative_slack;
    return report;
}

} // namespace ultrapara
