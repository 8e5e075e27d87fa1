#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ultrapara {

/// Uniform lattice t_k = k * omega, identical on both time axes, omega = T / M.
class TimeGrid {
public:
    TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps)
    {
        if (steps < 1) {
            throw std::invalid_argument("TimeGrid: steps must be >= 1");
        }
        if (!(horizon > 0.0)) {
            throw std::invalid_argument("TimeGrid: horizon must be positive");
        }
        step_ = horizon / static_cast<double>(steps);
    }

    [[nodiscard]] double horizon() const noexcept { return horizon_; }
    [[nodiscard]] int steps() const noexcept { return steps_; }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] double node(int k) const noexcept { return static_cast<double>(k) * step_; }

private:
    double horizon_;
    int steps_;
    double step_;
};

/**
 * The characteristic diagonal through lattice point (k, m). Walking `depth`
 * steps of (-1, -1) lands on `foot`, which lies on the k = 0 or m = 0 axis.
 * For k == m the foot is the corner (0, 0).
 */
struct DiagonalTrace {
    int k = 0;
    int m = 0;
    int depth = 0;
    std::array<int, 2> foot{0, 0};

    /// l-th visited point (k - p + l, m - p + l), l = 1..depth.
    [[nodiscard]] std::array<int, 2> point(int l) const noexcept
    {
        return {k - depth + l, m - depth + l};
    }

    /// True when the foot sits on the m = 0 axis, i.e. carries beta data.
    [[nodiscard]] bool foot_on_beta_axis() const noexcept { return foot[0] > 0; }
};

inline DiagonalTrace characteristic_trace(int k, int m)
{
    if (k < 0 || m < 0) {
        throw std::invalid_argument("characteristic_trace: negative index");
    }
    DiagonalTrace trace;
    trace.k = k;
    trace.m = m;
    trace.depth = std::min(k, m);
    trace.foot = {k - trace.depth, m - trace.depth};
    return trace;
}

/// Dense row-major lattice over an arbitrary number of index axes.
template <class T = double>
class Lattice {
public:
    explicit Lattice(std::vector<std::size_t> extents, T fill = T{})
        : extents_(std::move(extents))
    {
        if (extents_.empty()) {
            throw std::invalid_argument("Lattice: need at least one axis");
        }
        const std::size_t total = std::accumulate(extents_.begin(), extents_.end(), std::size_t{1},
                                                  std::multiplies<>{});
        data_.assign(total, fill);
    }

    [[nodiscard]] std::size_t rank() const noexcept { return extents_.size(); }
    [[nodiscard]] std::span<const std::size_t> extents() const noexcept { return extents_; }
    [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }

    [[nodiscard]] std::size_t offset(std::span<const std::size_t> index) const
    {
        if (index.size() != extents_.size()) {
            throw std::invalid_argument("Lattice: index rank mismatch");
        }
        std::size_t off = 0;
        for (std::size_t a = 0; a < extents_.size(); ++a) {
            if (index[a] >= extents_[a]) {
                throw std::out_of_range("Lattice: index out of range on axis " + std::to_string(a));
            }
            off = off * extents_[a] + index[a];
        }
        return off;
    }

    T& at(std::span<const std::size_t> index) { return data_[offset(index)]; }
    const T& at(std::span<const std::size_t> index) const { return data_[offset(index)]; }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

private:
    std::vector<std::size_t> extents_;
    std::vector<T> data_;
};

/**
 * Closed form of the diagonal recurrence v(k) = omega * F(k) + v(k - 1):
 *
 *   v(start) = omega * sum_{l=1..p} F(start - (p - l) * 1) + v(start - p * 1)
 *
 * where `boundary` is v(start - p * 1). Works for any number of time axes.
 */
inline double roll_back_diagonal(const Lattice<double>& sources, std::span<const std::size_t> start,
                                  std::size_t depth, double omega, double boundary)
{
    if (sources.rank() < 2) {
        throw std::invalid_argument("roll_back_diagonal: need at least two time axes");
    }
    if (start.size() != sources.rank()) {
        throw std::invalid_argument("roll_back_diagonal: start rank mismatch");
    }
    for (std::size_t a = 0; a < start.size(); ++a) {
        if (start[a] < depth) {
            throw std::invalid_argument("roll_back_diagonal: depth exceeds start coordinate on axis " +
                                        std::to_string(a));
        }
    }
    std::vector<std::size_t> index(start.size());
    double sum = 0.0;
    for (std::size_t l = 1; l <= depth; ++l) {
        for (std::size_t a = 0; a < start.size(); ++a) {
            index[a] = start[a] - (depth - l);
        }
        sum += sources.at(index);
    }
    return omega * sum + boundary;
}

} // namespace ultrapara
