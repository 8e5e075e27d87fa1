#pragma once

#include "ultrapara/linear_solver.hpp"
#include "ultrapara/nonlinear_solver.hpp"
#include "ultrapara/operator_spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ultrapara {

/// A fixed coordinate for a 2-D slice of the (x, t, s) solution.
struct SliceSpec {
    char axis = 't'; // 'x', 't' or 's'
    double value = 0.0;
};

/// Reference error values for one (q, M) cell of a convergence table.
struct ReferenceCell {
    int q = 1;
    int M = 0;
    double l2 = 0.0;
    double linf = 0.0;
};

/**
 * One catalog problem. Linear entries carry `linear_source`; nonlinear ones
 * carry `nonlinear_source` plus an optional u-independent `data` term. The
 * exact solution is stored once and the manufactured sources are built from
 * it.
 */
struct ProblemRegistryEntry {
    int id = 0; // 0 for custom problems
    BasisKind kind = BasisKind::DirichletDirichlet;
    double horizon = 1.0;
    int excited_mode = 1;
    bool nonlinear = false;
    InitialProfile alpha;
    InitialProfile beta;
    SourceFunction linear_source;
    std::optional<NonlinearSource> nonlinear_source;
    std::optional<DataTerm> data;
    ExactSolution exact;
    std::vector<ReferenceCell> reference;
    SliceSpec figure_slice;
};

inline constexpr int registry_size = 4;

namespace detail {

inline ProblemRegistryEntry dirichlet_decay_example()
{
    ProblemRegistryEntry e;
    e.id = 1;
    e.kind = BasisKind::DirichletDirichlet;
    e.horizon = 1.0;
    e.excited_mode = 1;
    e.exact = [](double x, double t, double s) { return std::exp(-2.0 * t - s) * std::sin(x); };
    e.alpha = [](double x, double s) { return std::exp(-s) * std::sin(x); };
    e.beta = [](double x, double t) { return std::exp(-2.0 * t) * std::sin(x); };
    e.linear_source = [](double x, double t, double s) { return -2.0 * std::exp(-2.0 * t - s) * std::sin(x); };
    e.reference = {
        {1, 50, 1.51608045E-03, 3.84188903E-03},
        {1, 100, 7.55346287E-04, 1.92287169E-03},
        {1, 200, 3.85041789E-04, 9.61845810E-04},
        {1, 400, 1.88342949E-04, 4.81024266E-04},
    };
    e.figure_slice = {'t', 0.5};
    return e;
}

inline ProblemRegistryEntry neumann_dirichlet_example()
{
    ProblemRegistryEntry e;
    e.id = 2;
    e.kind = BasisKind::NeumannDirichlet;
    e.horizon = 1.0;
    e.excited_mode = 1;
    e.exact = [](double x, double t, double s) { return (t * t + s * s + 32.0) * std::cos(0.5 * x); };
    e.alpha = [](double x, double s) { return (s * s + 32.0) * std::cos(0.5 * x); };
    e.beta = [](double x, double t) { return (t * t + 32.0) * std::cos(0.5 * x); };
    e.linear_source = [](double x, double t, double s) {
        const double a = 0.5 * t + 2.0;
        const double b = 0.5 * s + 2.0;
        return (a * a + b * b) * std::cos(0.5 * x);
    };
    e.reference = {
        {1, 50, 6.53270883E-03, 2.26666504E-02},
        {1, 100, 3.26622222E-03, 1.13406619E-02},
        {1, 200, 1.63312276E-03, 5.67215954E-03},
        {1, 400, 8.16570001E-04, 2.83653620E-03},
    };
    e.figure_slice = {'x', std::numbers::pi / 4.0};
    return e;
}

// u_t + u_s - u_xx + u = (1/4)(sin u - sin u_ex) + (49/4) u_ex on (0, 1/4)^2.
inline ProblemRegistryEntry lipschitz_example()
{
    ProblemRegistryEntry e;
    e.id = 3;
    e.kind = BasisKind::DirichletNeumannShift1;
    e.horizon = 0.25;
    e.excited_mode = 3;
    e.nonlinear = true;
    const auto exact = [](double x, double t, double s) {
        return 0.25 * (std::exp(-t) + std::exp(-s)) * std::sin(3.5 * x);
    };
    e.exact = exact;
    e.alpha = [exact](double x, double s) { return exact(x, 0.0, s); };
    e.beta = [exact](double x, double t) { return exact(x, t, 0.0); };
    e.nonlinear_source = LipschitzSource{
        [exact](double u, double x, double t, double s) {
            return 0.25 * (std::sin(u) - std::sin(exact(x, t, s)));
        },
        0.25};
    e.data = DataTerm{[exact](double x, double t, double s) { return 12.25 * exact(x, t, s); },
                      Sampling::LatticeNode};
    e.reference = {
        {2, 50, 5.82730398E-03, 1.16425665E-02},
        {3, 100, 2.90030629E-03, 5.85110603E-03},
        {4, 200, 1.44171369E-03, 2.91848574E-03},
        {5, 400, 7.18708022E-04, 1.45728672E-03},
    };
    e.figure_slice = {'t', 0.25};
    return e;
}

// u_t + u_s - u_xx + 2u = u sin(u/2) - u_ex sin(u_ex/2) + (u_ex)_t + (u_ex)_s + 11 u_ex on (0, 1/10)^2.
inline ProblemRegistryEntry product_example()
{
    ProblemRegistryEntry e;
    e.id = 4;
    e.kind = BasisKind::NeumannNeumannShift2;
    e.horizon = 0.1;
    e.excited_mode = 3;
    e.nonlinear = true;
    const auto exact = [](double x, double t, double s) {
        return (std::sin(t) + 1.0 + std::exp(-s)) * std::cos(3.0 * x);
    };
    e.exact = exact;
    e.alpha = [exact](double x, double s) { return exact(x, 0.0, s); };
    e.beta = [exact](double x, double t) { return exact(x, t, 0.0); };
    e.nonlinear_source = ProductSource{
        [](double u, double, double, double) { return std::sin(0.5 * u); },
        [](double u, double, double, double) { return u; },
        1.0,
        1.0};
    e.data = DataTerm{[exact](double x, double t, double s) {
                          const double ue = exact(x, t, s);
                          return -ue * std::sin(0.5 * ue) +
                                 (11.0 * std::sin(t) + std::cos(t) + 10.0 * std::exp(-s) + 11.0) *
                                     std::cos(3.0 * x);
                      },
                      Sampling::LatticeNode};
    e.reference = {
        {2, 50, 5.45295363E-03, 1.48732036E-02},
        {3, 100, 2.69804976E-03, 7.42289652E-03},
        {4, 200, 1.34196386E-03, 3.70802189E-03},
        {5, 400, 6.69222399E-04, 1.85315435E-03},
    };
    e.figure_slice = {'x', std::numbers::pi / 2.0};
    return e;
}

} // namespace detail

inline ProblemRegistryEntry registry_entry(int id)
{
    switch (id) {
    case 1: return detail::dirichlet_decay_example();
    case 2: return detail::neumann_dirichlet_example();
    case 3: return detail::lipschitz_example();
    case 4: return detail::product_example();
    default: throw std::invalid_argument("unknown example " + std::to_string(id) + " (expected 1..4)");
    }
}

/**
 * Linear problem with constant-in-time initial profile alpha = beta =
 * sum_n a_n phi_n and constant source sum_n d_n phi_n. Its exact solution is
 * u_n(t, s) = d_n / lambda_n + (a_n - d_n / lambda_n) exp(-lambda_n min(t, s)).
 */
inline ProblemRegistryEntry make_custom_entry(BasisKind kind, double horizon, std::vector<double> initial,
                                              std::vector<double> source)
{
    const std::size_t n = std::max(initial.size(), source.size());
    if (n == 0) {
        throw std::invalid_argument("custom problem needs initial or source coefficients");
    }
    initial.resize(n, 0.0);
    source.resize(n, 0.0);
    auto basis = std::make_shared<const EigenBasis>(make_basis(kind, n));
    auto a = std::make_shared<const std::vector<double>>(std::move(initial));
    auto d = std::make_shared<const std::vector<double>>(std::move(source));

    ProblemRegistryEntry e;
    e.id = 0;
    e.kind = kind;
    e.horizon = horizon;
    e.excited_mode = 1;
    const auto profile = [basis, a](double x, double) {
        double sum = 0.0;
        for (std::size_t i = 0; i < a->size(); ++i) {
            sum += (*a)[i] * basis->phi(static_cast<int>(i + 1), x);
        }
        return sum;
    };
    e.alpha = profile;
    e.beta = profile;
    e.linear_source = [basis, d](double x, double, double) {
        double sum = 0.0;
        for (std::size_t i = 0; i < d->size(); ++i) {
            sum += (*d)[i] * basis->phi(static_cast<int>(i + 1), x);
        }
        return sum;
    };
    e.exact = [basis, a, d](double x, double t, double s) {
        const double tau = std::min(t, s);
        double sum = 0.0;
        for (std::size_t i = 0; i < a->size(); ++i) {
            const int mode = static_cast<int>(i + 1);
            const double lambda = basis->eigenvalue(mode);
            const double steady = (*d)[i] / lambda;
            sum += (steady + ((*a)[i] - steady) * std::exp(-lambda * tau)) * basis->phi(mode, x);
        }
        return sum;
    };
    e.figure_slice = {'t', horizon / 2.0};
    return e;
}

/// Reference cell for (q, M), if any. Linear entries ignore q.
inline std::optional<ReferenceCell> find_reference(const ProblemRegistryEntry& entry, int q, int M)
{
    for (const auto& cell : entry.reference) {
        if (cell.M == M && (!entry.nonlinear || cell.q == q)) {
            return cell;
        }
    }
    return std::nullopt;
}

inline LinearProblem make_linear_problem(const ProblemRegistryEntry& entry, int M, std::size_t n_max,
                                         std::optional<double> horizon = std::nullopt)
{
    if (entry.nonlinear) {
        throw std::invalid_argument("make_linear_problem: entry is nonlinear");
    }
    return LinearProblem{make_basis(entry.kind, n_max), TimeGrid(horizon.value_or(entry.horizon), M),
                         entry.alpha, entry.beta, entry.linear_source,
                         gauss_legendre_rule(default_projection_points)};
}

/// j0 is the largest quadrature index, i.e. the nonlinear rule has j0 + 1 points.
inline NonlinearProblem make_nonlinear_problem(const ProblemRegistryEntry& entry, int M, std::size_t n_max,
                                               int j0, std::optional<double> horizon = std::nullopt)
{
    if (!entry.nonlinear || !entry.nonlinear_source) {
        throw std::invalid_argument("make_nonlinear_problem: entry is linear");
    }
    if (j0 < 0) {
        throw std::invalid_argument("make_nonlinear_problem: j0 must be >= 0");
    }
    return NonlinearProblem{make_basis(entry.kind, n_max),
                            TimeGrid(horizon.value_or(entry.horizon), M),
                            entry.alpha,
                            entry.beta,
                            *entry.nonlinear_source,
                            entry.data,
                            entry.exact,
                            gauss_legendre_rule(static_cast<std::size_t>(j0) + 1),
                            gauss_legendre_rule(default_projection_points)};
}

} // namespace ultrapara
