// Solves a two-mode Dirichlet problem with a constant source and prints the
// error against the closed-form solution for a few step counts.

#include "ultrapara/diagnostics.hpp"
#include "ultrapara/linear_solver.hpp"
#include "ultrapara/registry.hpp"

#include <cstdio>
#include <vector>

int main()
{
    using namespace ultrapara;

    const auto entry = make_custom_entry(BasisKind::DirichletDirichlet, 1.0, {1.0, 0.5}, {0.0, 2.0});
    const std::vector<RunPoint> points = {{1, 20}, {1, 40}, {1, 80}};

    const auto rows = convergence_study(
        [&](const RunPoint& p) {
            const LinearProblem problem = make_linear_problem(entry, p.M, 2);
            const SpectralField field = solve_linear(problem, 2);
            return discrete_norms(sample_field(field, problem.basis, 20),
                                  sample_exact(entry.exact, problem.grid, 20));
        },
        points);

    std::printf("%6s %16s %16s %8s\n", "M", "l2", "linf", "order");
    for (const auto& row : rows) {
        std::printf("%6d %16.8E %16.8E %8.3f\n", row.point.M, row.error.l2, row.error.linf,
                    row.order_l2.value_or(0.0));
    }
    return 0;
}
