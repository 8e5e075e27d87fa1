#pragma once

#include "ultrapara/time_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace ultrapara {

/**
 * Modal coefficients u_n^{k,m} over the two-time lattice, 0 <= k, m <= M.
 * Each stored mode ("slot") carries its 1-based mode index; a field may hold
 * any subset of a basis' modes.
 */
class SpectralField {
public:
    SpectralField(TimeGrid grid, std::vector<int> modes)
        : grid_(grid), modes_(std::move(modes)),
          side_(static_cast<std::size_t>(grid.steps()) + 1),
          coeff_(modes_.size() * side_ * side_, 0.0)
    {
    }

    [[nodiscard]] const TimeGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::span<const int> modes() const noexcept { return modes_; }
    [[nodiscard]] std::size_t mode_count() const noexcept { return modes_.size(); }
    [[nodiscard]] int steps() const noexcept { return grid_.steps(); }

    double& operator()(std::size_t slot, int k, int m) noexcept { return coeff_[index(slot, k, m)]; }
    double operator()(std::size_t slot, int k, int m) const noexcept { return coeff_[index(slot, k, m)]; }

    /// (M+1) x (M+1) row-major block of one mode, k major.
    std::span<double> mode_block(std::size_t slot) noexcept
    {
        return {coeff_.data() + slot * side_ * side_, side_ * side_};
    }
    std::span<const double> mode_block(std::size_t slot) const noexcept
    {
        return {coeff_.data() + slot * side_ * side_, side_ * side_};
    }

    void coefficients_at(int k, int m, std::span<double> out) const noexcept
    {
        for (std::size_t i = 0; i < modes_.size(); ++i) {
            out[i] = (*this)(i, k, m);
        }
    }

    [[nodiscard]] std::vector<double> coefficients_at(int k, int m) const
    {
        std::vector<double> out(modes_.size());
        coefficients_at(k, m, out);
        return out;
    }

    /// ||u^{k,m}||^2 by Parseval over the stored modes.
    [[nodiscard]] double norm_squared(int k, int m) const noexcept
    {
        double sum = 0.0;
        for (std::size_t i = 0; i < modes_.size(); ++i) {
            const double c = (*this)(i, k, m);
            sum += c * c;
        }
        return sum;
    }

    /// sup over 1 <= k, m <= M of ||u^{k,m}||^2.
    [[nodiscard]] double interior_sup_norm_squared() const noexcept
    {
        double sup = 0.0;
        for (int k = 1; k <= grid_.steps(); ++k) {
            for (int m = 1; m <= grid_.steps(); ++m) {
                sup = std::max(sup, norm_squared(k, m));
            }
        }
        return sup;
    }

    [[nodiscard]] std::span<const double> raw() const noexcept { return coeff_; }

private:
    [[nodiscard]] std::size_t index(std::size_t slot, int k, int m) const noexcept
    {
        return (slot * side_ + static_cast<std::size_t>(k)) * side_ + static_cast<std::size_t>(m);
    }

    TimeGrid grid_;
    std::vector<int> modes_;
    std::size_t side_;
    std::vector<double> coeff_;
};

/// sup over 1 <= k, m <= M of ||a^{k,m} - b^{k,m}|| (not squared).
inline double interior_sup_distance(const SpectralField& a, const SpectralField& b)
{
    if (a.steps() != b.steps() || a.mode_count() != b.mode_count()) {
        throw std::invalid_argument("interior_sup_distance: field shapes differ");
    }
    double sup = 0.0;
    for (int k = 1; k <= a.steps(); ++k) {
        for (int m = 1; m <= a.steps(); ++m) {
            double sum = 0.0;
            for (std::size_t i = 0; i < a.mode_count(); ++i) {
                const double d = a(i, k, m) - b(i, k, m);
                sum += d * d;
            }
            sup = std::max(sup, sum);
        }
    }
    return std::sqrt(sup);
}

} // namespace ultrapara
