#pragma once

#include "ultrapara/quadrature.hpp"

#include <cmath>
#include <cstddef>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ultrapara {

/**
 * Spatial operators on (0, pi) with closed-form orthonormal eigenbases.
 *
 *   DirichletDirichlet      -d2/dx2,      phi_n = sqrt(2/pi) sin(n x),        lambda_n = n^2
 *   NeumannDirichlet        -d2/dx2,      phi_n = sqrt(2/pi) cos((n-1/2) x),  lambda_n = (n-1/2)^2
 *   DirichletNeumannShift1  -d2/dx2 + I,  phi_n = sqrt(2/pi) sin((n+1/2) x),  lambda_n = (n+1/2)^2 + 1
 *   NeumannNeumannShift2    -d2/dx2 + 2I, phi_n = sqrt(2/pi) cos(n x),        lambda_n = n^2 + 2
 *
 * Modes are 1-based. The constant Neumann-Neumann mode (n = 0) is not part
 * of the catalog.
 */
enum class BasisKind {
    DirichletDirichlet,
    NeumannDirichlet,
    DirichletNeumannShift1,
    NeumannNeumannShift2,
};

inline std::string_view to_string(BasisKind kind) noexcept
{
    switch (kind) {
    case BasisKind::DirichletDirichlet: return "DD";
    case BasisKind::NeumannDirichlet: return "ND";
    case BasisKind::DirichletNeumannShift1: return "DN_shift1";
    case BasisKind::NeumannNeumannShift2: return "NN_shift2";
    }
    return "?";
}

inline std::optional<BasisKind> parse_basis_kind(std::string_view text) noexcept
{
    if (text == "DD") return BasisKind::DirichletDirichlet;
    if (text == "ND") return BasisKind::NeumannDirichlet;
    if (text == "DN_shift1" || text == "DN1") return BasisKind::DirichletNeumannShift1;
    if (text == "NN_shift2" || text == "NN2") return BasisKind::NeumannNeumannShift2;
    return std::nullopt;
}

struct EigenPair {
    int n = 0;
    double lambda = 0.0;
    double frequency = 0.0; // phi_n(x) = sqrt(2/pi) * trig(frequency * x)
    bool cosine = false;
};

class EigenBasis {
public:
    EigenBasis(BasisKind kind, std::vector<EigenPair> pairs)
        : kind_(kind), pairs_(std::move(pairs))
    {
    }

    [[nodiscard]] BasisKind kind() const noexcept { return kind_; }
    [[nodiscard]] std::size_t size() const noexcept { return pairs_.size(); }
    [[nodiscard]] std::span<const EigenPair> pairs() const noexcept { return pairs_; }

    [[nodiscard]] const EigenPair& pair(int n) const
    {
        if (n < 1 || static_cast<std::size_t>(n) > pairs_.size()) {
            throw std::out_of_range("EigenBasis: mode index " + std::to_string(n) + " outside 1.." +
                                    std::to_string(pairs_.size()));
        }
        return pairs_[static_cast<std::size_t>(n - 1)];
    }

    [[nodiscard]] double eigenvalue(int n) const { return pair(n).lambda; }

    [[nodiscard]] double phi(int n, double x) const
    {
        const auto& p = pair(n);
        const double arg = p.frequency * x;
        return normalization() * (p.cosine ? std::cos(arg) : std::sin(arg));
    }

    static double normalization() noexcept { return std::sqrt(2.0 / std::numbers::pi); }

private:
    BasisKind kind_;
    std::vector<EigenPair> pairs_;
};

inline EigenBasis make_basis(BasisKind kind, std::size_t n_max)
{
    if (n_max == 0) {
        throw std::invalid_argument("make_basis: n_max must be at least 1");
    }
    std::vector<EigenPair> pairs;
    pairs.reserve(n_max);
    for (std::size_t i = 1; i <= n_max; ++i) {
        const double n = static_cast<double>(i);
        EigenPair p;
        p.n = static_cast<int>(i);
        switch (kind) {
        case BasisKind::DirichletDirichlet:
            p.frequency = n;
            p.lambda = n * n;
            p.cosine = false;
            break;
        case BasisKind::NeumannDirichlet:
            p.frequency = n - 0.5;
            p.lambda = (n - 0.5) * (n - 0.5);
            p.cosine = true;
            break;
        case BasisKind::DirichletNeumannShift1:
            p.frequency = n + 0.5;
            p.lambda = (n + 0.5) * (n + 0.5) + 1.0;
            p.cosine = false;
            break;
        case BasisKind::NeumannNeumannShift2:
            p.frequency = n;
            p.lambda = n * n + 2.0;
            p.cosine = true;
            break;
        }
        pairs.push_back(p);
    }
    return EigenBasis(kind, std::move(pairs));
}

/// 1..n_max
inline std::vector<int> all_modes(std::size_t n_max)
{
    std::vector<int> modes(n_max);
    std::iota(modes.begin(), modes.end(), 1);
    return modes;
}

/// Component n is the quadrature approximation of int_0^pi f(x) phi_n(x) dx.
template <class F>
std::vector<double> project(F&& f, const EigenBasis& basis, const QuadratureRule& rule)
{
    std::vector<double> fx(rule.size());
    for (std::size_t j = 0; j < rule.size(); ++j) {
        fx[j] = f(rule.nodes[j]);
    }
    std::vector<double> coeffs(basis.size(), 0.0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const int n = static_cast<int>(i + 1);
        double sum = 0.0;
        for (std::size_t j = 0; j < rule.size(); ++j) {
            sum += rule.weights[j] * fx[j] * basis.phi(n, rule.nodes[j]);
        }
        coeffs[i] = sum;
    }
    return coeffs;
}

/// Sample j is sum_n coeffs[n-1] * phi_n(xs[j]).
inline std::vector<double> synthesize(std::span<const double> coeffs, const EigenBasis& basis,
                                      std::span<const double> xs)
{
    if (coeffs.size() > basis.size()) {
        throw std::invalid_argument("synthesize: more coefficients than basis modes");
    }
    std::vector<double> out(xs.size(), 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i] == 0.0) {
            continue;
        }
        const int n = static_cast<int>(i + 1);
        for (std::size_t j = 0; j < xs.size(); ++j) {
            out[j] += coeffs[i] * basis.phi(n, xs[j]);
        }
    }
    return out;
}

/**
 * Basis functions of a selected set of modes tabulated at a fixed node set.
 * Used by the solvers to project and synthesize many fields on the same
 * quadrature nodes without re-evaluating trig functions.
 */
class ModalTable {
public:
    ModalTable(const EigenBasis& basis, std::vector<int> modes, const QuadratureRule& rule)
        : modes_(std::move(modes)), nodes_(rule.nodes), weights_(rule.weights),
          phi_(modes_.size() * rule.size())
    {
        for (std::size_t i = 0; i < modes_.size(); ++i) {
            for (std::size_t j = 0; j < nodes_.size(); ++j) {
                phi_[i * nodes_.size() + j] = basis.phi(modes_[i], nodes_[j]);
            }
        }
    }

    [[nodiscard]] std::size_t mode_count() const noexcept { return modes_.size(); }
    [[nodiscard]] std::size_t node_count() const noexcept { return nodes_.size(); }
    [[nodiscard]] std::span<const double> nodes() const noexcept { return nodes_; }
    [[nodiscard]] double phi(std::size_t slot, std::size_t j) const noexcept
    {
        return phi_[slot * nodes_.size() + j];
    }

    /// values[j] sampled at the table nodes -> coefficients per slot.
    void project(std::span<const double> values, std::span<double> coeffs) const noexcept
    {
        const std::size_t nj = nodes_.size();
        for (std::size_t i = 0; i < modes_.size(); ++i) {
            const double* row = &phi_[i * nj];
            double sum = 0.0;
            for (std::size_t j = 0; j < nj; ++j) {
                sum += weights_[j] * values[j] * row[j];
            }
            coeffs[i] = sum;
        }
    }

    void synthesize(std::span<const double> coeffs, std::span<double> values) const noexcept
    {
        const std::size_t nj = nodes_.size();
        for (std::size_t j = 0; j < nj; ++j) {
            values[j] = 0.0;
        }
        for (std::size_t i = 0; i < modes_.size(); ++i) {
            const double* row = &phi_[i * nj];
            const double c = coeffs[i];
            for (std::size_t j = 0; j < nj; ++j) {
                values[j] += c * row[j];
            }
        }
    }

private:
    std::vector<int> modes_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> phi_;
};

} // namespace ultrapara
