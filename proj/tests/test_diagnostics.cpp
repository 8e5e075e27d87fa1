#include "ultrapara/diagnostics.hpp"
#include "ultrapara/linear_solver.hpp"
#include "ultrapara/nonlinear_solver.hpp"
#include "ultrapara/registry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace ultrapara;

namespace {

// Error of one catalog example at (q, M) with L spatial intervals.
ErrorReport catalog_error(int id, const RunPoint& point, int L = 20)
{
    const auto entry = registry_entry(id);
    if (!entry.nonlinear) {
        const auto problem = make_linear_problem(entry, point.M, 8);
        const auto field = solve_linear(problem, std::size_t{8});
        return discrete_norms(sample_field(field, problem.basis, L), sample_exact(entry.exact, problem.grid, L));
    }
    const auto problem = make_nonlinear_problem(entry, point.M, 8, 5);
    const std::vector<int> modes = {entry.excited_mode};
    const auto picard = picard_solve(problem, modes, point.q, 0.0);
    auto report =
        discrete_norms(sample_field(picard.field, problem.basis, L), sample_exact(entry.exact, problem.grid, L));
    report.q = point.q;
    return report;
}

} // namespace

TEST(Diagnostics, SpatialNodesIncludeEndpoints)
{
    const auto xs = spatial_nodes(20);
    ASSERT_EQ(xs.size(), 21U);
    EXPECT_EQ(xs.front(), 0.0);
    EXPECT_EQ(xs.back(), std::numbers::pi);
    EXPECT_THROW((void)spatial_nodes(0), std::invalid_argument);
}

TEST(Diagnostics, ConstantError)
{
    GridSamples approx(3, 4);
    GridSamples exact(3, 4);
    for (auto& v : exact.values()) {
        v = 2.5;
    }
    for (auto& v : approx.values()) {
        v = 2.5 + 0.125;
    }
    const auto report = discrete_norms(approx, exact);
    EXPECT_DOUBLE_EQ(report.l2, 0.125);
    EXPECT_DOUBLE_EQ(report.linf, 0.125);
    EXPECT_EQ(report.grid_points, 4U * 16U);
}

TEST(Diagnostics, RandomFieldMatchesNaiveSums)
{
    std::mt19937_64 rng(5);
    std::normal_distribution<double> dist;
    GridSamples approx(4, 3); // 5 x 3 x 3
    GridSamples exact(4, 3);
    double sum_sq = 0.0;
    double max_abs = 0.0;
    for (int j = 0; j <= 4; ++j) {
        for (int k = 1; k <= 3; ++k) {
            for (int m = 1; m <= 3; ++m) {
                approx(j, k, m) = dist(rng);
                exact(j, k, m) = dist(rng);
                const double e = exact(j, k, m) - approx(j, k, m);
                sum_sq += e * e;
                max_abs = std::max(max_abs, std::abs(e));
            }
        }
    }
    const auto report = discrete_norms(approx, exact);
    EXPECT_NEAR(report.l2, std::sqrt(sum_sq / 45.0), 1e-15);
    EXPECT_EQ(report.linf, max_abs);
    EXPECT_LE(report.l2, report.linf);
}

TEST(Diagnostics, RejectsMismatchedGrids)
{
    EXPECT_THROW((void)discrete_norms(GridSamples(3, 4), GridSamples(4, 4)), std::invalid_argument);
    EXPECT_THROW((void)discrete_norms(GridSamples(3, 4), GridSamples(3, 5)), std::invalid_argument);
}

TEST(Diagnostics, ExampleOneAtTwoHundredSteps)
{
    const auto report = catalog_error(1, {1, 200});
    EXPECT_NEAR(report.l2, 3.85041789E-04, 0.05 * 3.85041789E-04);
    EXPECT_NEAR(report.linf, 9.61845810E-04, 0.05 * 9.61845810E-04);
    EXPECT_EQ(report.grid_points, 21U * 200U * 200U);
}

TEST(Diagnostics, ConvergenceStudyExampleOne)
{
    const std::vector<RunPoint> points = {{1, 50}, {1, 100}, {1, 200}, {1, 400}};
    const std::vector<double> reference = {1.51608045E-03, 7.55346287E-04, 3.85041789E-04, 1.88342949E-04};
    const auto rows = convergence_study([](const RunPoint& p) { return catalog_error(1, p); }, points);
    ASSERT_EQ(rows.size(), 4U);
    EXPECT_FALSE(rows[0].order_l2.has_value());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_NEAR(rows[i].error.l2, reference[i], 0.05 * reference[i]);
        if (i > 0) {
            ASSERT_TRUE(rows[i].order_l2 && rows[i].order_linf);
            EXPECT_NEAR(*rows[i].order_l2, 1.0, 0.1);
            EXPECT_NEAR(*rows[i].order_linf, 1.0, 0.1);
        }
    }
}

TEST(Diagnostics, ExactAsOwnApproximation)
{
    const auto entry = registry_entry(1);
    const std::vector<RunPoint> points = {{1, 4}, {1, 8}};
    const auto rows = convergence_study(
        [&](const RunPoint& p) {
            const auto exact = sample_exact(entry.exact, TimeGrid(1.0, p.M), 6);
            return discrete_norms(exact, exact);
        },
        points);
    for (const auto& row : rows) {
        EXPECT_EQ(row.error.l2, 0.0);
        EXPECT_EQ(row.error.linf, 0.0);
        EXPECT_FALSE(row.order_l2.has_value());
        EXPECT_FALSE(row.order_linf.has_value());
    }
}

TEST(Diagnostics, ConvergenceStudyPreconditions)
{
    const auto solve = [](const RunPoint&) { return ErrorReport{}; };
    const std::vector<RunPoint> one = {{1, 10}};
    const std::vector<RunPoint> decreasing = {{1, 20}, {1, 10}};
    EXPECT_THROW((void)convergence_study(solve, one), std::invalid_argument);
    EXPECT_THROW((void)convergence_study(solve, decreasing), std::invalid_argument);
}

TEST(Diagnostics, ObservedOrderFormula)
{
    // log2 of the ratio of the two reference Example 2 l2 values.
    const auto order = detail::observed_order(6.53270883E-03, 3.26622222E-03, 50, 100);
    ASSERT_TRUE(order.has_value());
    EXPECT_NEAR(*order, std::log2(6.53270883E-03 / 3.26622222E-03), 1e-14);
    EXPECT_NEAR(*order, 1.000058, 1e-6);
    EXPECT_FALSE(detail::observed_order(0.0, 1.0, 50, 100).has_value());
}

TEST(Diagnostics, ExampleTwoOrder)
{
    const std::vector<RunPoint> points = {{1, 50}, {1, 100}};
    const auto rows = convergence_study([](const RunPoint& p) { return catalog_error(2, p); }, points);
    ASSERT_TRUE(rows[1].order_l2.has_value());
    EXPECT_GE(*rows[1].order_l2, 0.9);
    EXPECT_LE(*rows[1].order_l2, 1.1);
}

TEST(Diagnostics, NormOrderingOnCatalog)
{
    for (int id = 1; id <= 4; ++id) {
        const auto report = catalog_error(id, {2, 40});
        EXPECT_LE(report.l2, report.linf) << "example " << id;
        EXPECT_GT(report.l2, 0.0);
    }
}

TEST(Diagnostics, SpatialRefinementBarelyMovesL2)
{
    for (int id = 1; id <= 4; ++id) {
        const double coarse = catalog_error(id, {2, 50}, 40).l2;
        const double fine = catalog_error(id, {2, 50}, 80).l2;
        EXPECT_LT(std::abs(fine - coarse) / coarse, 0.01) << "example " << id;
    }
}

TEST(Diagnostics, OrdersOnCatalogUpToTwoHundred)
{
    for (int id = 1; id <= 4; ++id) {
        const std::vector<RunPoint> points = {{2, 50}, {3, 100}, {4, 200}};
        const auto rows = convergence_study([id](const RunPoint& p) { return catalog_error(id, p); }, points);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            EXPECT_GE(*rows[i].order_l2, 0.9) << "example " << id;
            EXPECT_LE(*rows[i].order_l2, 1.1) << "example " << id;
            EXPECT_GE(*rows[i].order_linf, 0.9) << "example " << id;
            EXPECT_LE(*rows[i].order_linf, 1.1) << "example " << id;
        }
    }
}

TEST(Diagnostics, SampledFieldMatchesSynthesis)
{
    const auto entry = registry_entry(2);
    const auto problem = make_linear_problem(entry, 6, 3);
    const auto field = solve_linear(problem, std::size_t{3});
    const auto samples = sample_field(field, problem.basis, 5);
    const auto xs = spatial_nodes(5);
    for (int k = 1; k <= 6; ++k) {
        for (int m = 1; m <= 6; ++m) {
            const auto c = field.coefficients_at(k, m);
            const auto values = synthesize(c, problem.basis, xs);
            for (int j = 0; j <= 5; ++j) {
                EXPECT_NEAR(samples(j, k, m), values[static_cast<std::size_t>(j)], 1e-13);
            }
        }
    }
}
