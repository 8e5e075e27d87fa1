#pragma once

#include "ultrapara/operator_spectrum.hpp"
#include "ultrapara/spectral_field.hpp"
#include "ultrapara/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace ultrapara {

/// x_j = j pi / L, j = 0..L
inline std::vector<double> spatial_nodes(int intervals)
{
    if (intervals < 1) {
        throw std::invalid_argument("spatial_nodes: L must be >= 1");
    }
    std::vector<double> xs(static_cast<std::size_t>(intervals) + 1);
    for (int j = 0; j <= intervals; ++j) {
        xs[static_cast<std::size_t>(j)] = std::numbers::pi * j / intervals;
    }
    xs.back() = std::numbers::pi;
    return xs;
}

/**
 * Physical samples over the evaluation grid G = {x_j} x {t_k} x {s_m} with
 * j = 0..L and k, m = 1..M (the k = 0 and m = 0 slices are not part of G).
 * Stored k-major, then m, then j.
 */
class GridSamples {
public:
    GridSamples(int intervals, int steps)
        : intervals_(intervals), steps_(steps),
          values_(static_cast<std::size_t>(intervals + 1) * static_cast<std::size_t>(steps) *
                  static_cast<std::size_t>(steps))
    {
        if (intervals < 1 || steps < 1) {
            throw std::invalid_argument("GridSamples: L and M must be >= 1");
        }
    }

    [[nodiscard]] int intervals() const noexcept { return intervals_; }
    [[nodiscard]] int steps() const noexcept { return steps_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }

    double& operator()(int j, int k, int m) noexcept { return values_[index(j, k, m)]; }
    double operator()(int j, int k, int m) const noexcept { return values_[index(j, k, m)]; }

    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    std::span<double> values() noexcept { return values_; }

private:
    [[nodiscard]] std::size_t index(int j, int k, int m) const noexcept
    {
        const auto side = static_cast<std::size_t>(steps_);
        const auto row = static_cast<std::size_t>(intervals_ + 1);
        return ((static_cast<std::size_t>(k - 1) * side + static_cast<std::size_t>(m - 1)) * row) +
               static_cast<std::size_t>(j);
    }

    int intervals_;
    int steps_;
    std::vector<double> values_;
};

/// Synthesizes the field at x_j over every (t_k, s_m), k, m >= 1.
inline GridSamples sample_field(const SpectralField& field, const EigenBasis& basis, int intervals)
{
    const auto xs = spatial_nodes(intervals);
    const auto modes = field.modes();
    std::vector<double> phi(modes.size() * xs.size());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            phi[i * xs.size() + j] = basis.phi(modes[i], xs[j]);
        }
    }
    GridSamples out(intervals, field.steps());
    for (int k = 1; k <= field.steps(); ++k) {
        for (int m = 1; m <= field.steps(); ++m) {
            for (std::size_t j = 0; j < xs.size(); ++j) {
                double sum = 0.0;
                for (std::size_t i = 0; i < modes.size(); ++i) {
                    sum += field(i, k, m) * phi[i * xs.size() + j];
                }
                out(static_cast<int>(j), k, m) = sum;
            }
        }
    }
    return out;
}

inline GridSamples sample_exact(const std::function<double(double, double, double)>& exact,
                                const TimeGrid& grid, int intervals)
{
    const auto xs = spatial_nodes(intervals);
    GridSamples out(intervals, grid.steps());
    for (int k = 1; k <= grid.steps(); ++k) {
        for (int m = 1; m <= grid.steps(); ++m) {
            for (std::size_t j = 0; j < xs.size(); ++j) {
                out(static_cast<int>(j), k, m) = exact(xs[j], grid.node(k), grid.node(m));
            }
        }
    }
    return out;
}

struct ErrorReport {
    double l2 = 0.0;
    double linf = 0.0;
    std::size_t grid_points = 0; // (L + 1) M^2
    int M = 0;
    int L = 0;
    int q = 1;
    int j0 = 0;
};

/// Root-mean-square and max of approx - exact over G.
inline ErrorReport discrete_norms(const GridSamples& approx, const GridSamples& exact)
{
    if (approx.intervals() != exact.intervals() || approx.steps() != exact.steps()) {
        throw std::invalid_argument("discrete_norms: sample grids differ");
    }
    const auto a = approx.values();
    const auto e = exact.values();
    double sum_sq = 0.0;
    double max_abs = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double err = e[i] - a[i];
        sum_sq += err * err;
        max_abs = std::max(max_abs, std::abs(err));
    }
    ErrorReport report;
    report.grid_points = a.size();
    report.l2 = std::sqrt(sum_sq / static_cast<double>(a.size()));
    report.linf = max_abs;
    report.M = approx.steps();
    report.L = approx.intervals();
    return report;
}

/// One cell of a convergence table; q is ignored by linear runs.
struct RunPoint {
    int q = 1;
    int M = 0;
};

struct ConvergenceRow {
    RunPoint point;
    ErrorReport error;
    std::optional<double> order_l2;   // vs previous row; absent for the first row or zero errors
    std::optional<double> order_linf;
};

namespace detail {

inline std::optional<double> observed_order(double coarse_error, double fine_error, int coarse_m, int fine_m)
{
    if (!(coarse_error > 0.0) || !(fine_error > 0.0) || fine_m == coarse_m) {
        return std::nullopt;
    }
    return std::log(coarse_error / fine_error) /
           std::log(static_cast<double>(fine_m) / static_cast<double>(coarse_m));
}

} // namespace detail

/**
 * Runs `solve` at each point and reports pairwise observed orders
 * log(e_prev / e_cur) / log(M_cur / M_prev), i.e. log2(e_M / e_2M) when M doubles.
 */
template <class Solve>
std::vector<ConvergenceRow> convergence_study(Solve&& solve, std::span<const RunPoint> points)
{
    if (points.size() < 2) {
        throw std::invalid_argument("convergence_study: need at least two run points");
    }
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].M <= points[i - 1].M) {
            throw std::invalid_argument("convergence_study: M list must be increasing");
        }
    }
    std::vector<ConvergenceRow> rows;
    rows.reserve(points.size());
    for (const RunPoint& point : points) {
        ConvergenceRow row;
        row.point = point;
        row.error = solve(point);
        if (!rows.empty()) {
            const auto& prev = rows.back();
            row.order_l2 = detail::observed_order(prev.error.l2, row.error.l2, prev.point.M, point.M);
            row.order_linf = detail::observed_order(prev.error.linf, row.error.linf, prev.point.M, point.M);
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace ultrapara
