#pragma once

#include "ultrapara/csv.hpp"
#include "ultrapara/diagnostics.hpp"
#include "ultrapara/linear_solver.hpp"
#include "ultrapara/nonlinear_solver.hpp"
#include "ultrapara/registry.hpp"
#include "ultrapara/run_config.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace ultrapara {

/// Solver failure (CLI exit status 2).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunResult {
    ProblemRegistryEntry entry;
    EigenBasis basis;
    SpectralField field;
    ErrorReport error;
    GridSamples approx;
    GridSamples exact;
    std::optional<IterationReport> iterations;
    BoundReport bound;
    std::optional<ReferenceCell> reference;
    std::vector<std::string> warnings;
};

inline ProblemRegistryEntry resolve_entry(const RunConfig& config)
{
    if (config.example) {
        return registry_entry(*config.example);
    }
    return make_custom_entry(*config.custom_basis, *config.T, config.custom_initial, config.custom_source);
}

/// Unset q: the reference table q for this M if there is one, otherwise 5.
inline int resolve_iterations(const RunConfig& config, const ProblemRegistryEntry& entry)
{
    if (config.q) {
        return *config.q;
    }
    for (const auto& cell : entry.reference) {
        if (cell.M == config.M) {
            return cell.q;
        }
    }
    return default_picard_iterations;
}

inline std::vector<int> resolve_modes(const RunConfig& config, const ProblemRegistryEntry& entry)
{
    const bool excited =
        config.modes == ModeChoice::Excited || (config.modes == ModeChoice::Default && entry.nonlinear);
    if (excited) {
        if (entry.excited_mode > config.n_max) {
            throw ConfigError("nmax is below the excited mode " + std::to_string(entry.excited_mode));
        }
        return {entry.excited_mode};
    }
    return all_modes(static_cast<std::size_t>(config.n_max));
}

/// Solves, samples and checks bounds. Throws ConfigError or SolverError.
inline RunResult execute(const RunConfig& config)
{
    validate(config);
    const ProblemRegistryEntry entry = resolve_entry(config);
    const auto modes = resolve_modes(config, entry);
    const auto n_max = static_cast<std::size_t>(config.n_max);
    try {
        if (!entry.nonlinear) {
            const LinearProblem problem = make_linear_problem(entry, config.M, n_max, config.T);
            SpectralField field = solve_linear(problem, modes);
            GridSamples approx = sample_field(field, problem.basis, config.L);
            GridSamples exact = sample_exact(entry.exact, problem.grid, config.L);
            ErrorReport error = discrete_norms(approx, exact);
            BoundReport bound = stability_bound_check(field, problem);
            std::optional<ReferenceCell> reference;
            if (!config.T) {
                reference = find_reference(entry, 1, config.M);
            }
            return RunResult{entry,           problem.basis,     std::move(field),
                             error,           std::move(approx), std::move(exact),
                             std::nullopt,    bound,             reference,
                             {}};
        }
        const int q = resolve_iterations(config, entry);
        const NonlinearProblem problem = make_nonlinear_problem(entry, config.M, n_max, config.j0, config.T);
        PicardResult picard = picard_solve(problem, modes, q, 0.0);
        GridSamples approx = sample_field(picard.field, problem.basis, config.L);
        GridSamples exact = sample_exact(entry.exact, problem.grid, config.L);
        ErrorReport error = discrete_norms(approx, exact);
        error.q = q;
        error.j0 = config.j0;
        BoundReport bound = a_priori_bound_check(picard.field, picard.previous, problem);
        std::optional<ReferenceCell> reference;
        if (!config.T && config.j0 == 5) {
            reference = find_reference(entry, q, config.M);
        }
        std::vector<std::string> warnings = picard.report.warnings;
        return RunResult{entry,
                         problem.basis,
                         std::move(picard.field),
                         error,
                         std::move(approx),
                         std::move(exact),
                         std::move(picard.report),
                         bound,
                         reference,
                         std::move(warnings)};
    } catch (const CompatibilityError& e) {
        throw SolverError(e.what());
    }
}

inline std::string summary_line(const ErrorReport& error)
{
    return "l2 = " + format_table(error.l2) + "  linf = " + format_table(error.linf);
}

inline double relative_deviation(double computed, double reference)
{
    return std::abs(computed - reference) / std::abs(reference);
}

/**
 * Plot-ready CSV of one 2-D slice. Fixing t or s uses the nearest time node
 * and spans x_j (j = 0..L) against the other time axis (0..M); fixing x
 * spans the full (t, s) lattice.
 */
inline std::string slice_csv(const RunResult& result, const SliceSpec& slice, int intervals)
{
    const SpectralField& field = result.field;
    const TimeGrid& grid = field.grid();
    const int steps = grid.steps();
    const auto modes = field.modes();
    const auto value_at = [&](double x, int k, int m) {
        double sum = 0.0;
        for (std::size_t i = 0; i < modes.size(); ++i) {
            sum += field(i, k, m) * result.basis.phi(modes[i], x);
        }
        return sum;
    };
    const auto row = [](std::string& out, double a, double b, double ua, double ue) {
        out += format_exact(a) + ',' + format_exact(b) + ',' + format_exact(ua) + ',' + format_exact(ue) + ',' +
               format_exact(std::abs(ua - ue)) + '\n';
    };

    std::string out;
    if (slice.axis == 'x') {
        if (slice.value < 0.0 || slice.value > std::numbers::pi) {
            throw ConfigError("slice x must lie in [0, pi]");
        }
        out = "t,s,u_approx,u_exact,abs_err\n";
        for (int k = 0; k <= steps; ++k) {
            for (int m = 0; m <= steps; ++m) {
                row(out, grid.node(k), grid.node(m), value_at(slice.value, k, m),
                    result.entry.exact(slice.value, grid.node(k), grid.node(m)));
            }
        }
        return out;
    }
    if (slice.value < 0.0 || slice.value > grid.horizon() * (1.0 + 1e-12)) {
        throw ConfigError("slice time must lie in [0, T]");
    }
    const int fixed = static_cast<int>(std::lround(slice.value / grid.step()));
    const auto xs = spatial_nodes(intervals);
    out = slice.axis == 't' ? "x,s,u_approx,u_exact,abs_err\n" : "x,t,u_approx,u_exact,abs_err\n";
    for (const double x : xs) {
        for (int other = 0; other <= steps; ++other) {
            const int k = slice.axis == 't' ? fixed : other;
            const int m = slice.axis == 't' ? other : fixed;
            row(out, x, grid.node(other), value_at(x, k, m), result.entry.exact(x, grid.node(k), grid.node(m)));
        }
    }
    return out;
}

struct TableCell {
    ReferenceCell reference;
    ErrorReport computed;
    BoundReport bound; // stability (linear) or a priori (nonlinear) estimate for this run
};

/// Recomputes every reference cell of table `id` with L = 20, j0 = 5 and the default mode choice.
inline std::vector<TableCell> compute_table(int id)
{
    const ProblemRegistryEntry entry = registry_entry(id);
    std::vector<TableCell> cells;
    for (const auto& ref : entry.reference) {
        RunConfig config;
        config.example = id;
        config.M = ref.M;
        config.q = ref.q;
        const RunResult result = execute(config);
        cells.push_back({ref, result.error, result.bound});
    }
    return cells;
}

inline std::string table_csv(int id, const std::vector<TableCell>& cells)
{
    const bool nonlinear = registry_entry(id).nonlinear;
    std::string out = "norm";
    for (const auto& cell : cells) {
        out += ',';
        if (nonlinear) {
            out += "q=" + std::to_string(cell.reference.q) + ' ';
        }
        out += "M=" + std::to_string(cell.reference.M);
    }
    out += '\n';
    const auto emit_row = [&](const char* name, auto pick) {
        out += name;
        for (const auto& cell : cells) {
            out += ',' + format_table(pick(cell));
        }
        out += '\n';
    };
    emit_row("l2", [](const TableCell& c) { return c.computed.l2; });
    emit_row("linf", [](const TableCell& c) { return c.computed.linf; });
    emit_row("l2_reference", [](const TableCell& c) { return c.reference.l2; });
    emit_row("linf_reference", [](const TableCell& c) { return c.reference.linf; });
    emit_row("l2_rel_dev", [](const TableCell& c) { return relative_deviation(c.computed.l2, c.reference.l2); });
    emit_row("linf_rel_dev",
             [](const TableCell& c) { return relative_deviation(c.computed.linf, c.reference.linf); });
    return out;
}

/// Writes table<N>.csv into out_dir for each requested id; returns the paths written.
inline std::vector<std::string> reproduce_tables(const std::vector<int>& which, const std::string& out_dir,
                                                 std::ostream& log)
{
    std::vector<std::string> written;
    if (which.empty()) {
        return written;
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) {
        throw IoError("cannot create '" + out_dir + "': " + ec.message());
    }
    for (const int id : which) {
        if (id < 1 || id > registry_size) {
            throw ConfigError("unknown table " + std::to_string(id));
        }
        const auto cells = compute_table(id);
        const std::string path = (std::filesystem::path(out_dir) / ("table" + std::to_string(id) + ".csv")).string();
        write_text_file(path, table_csv(id, cells));
        log << "table " << id << " -> " << path << '\n';
        written.push_back(path);
    }
    return written;
}

/// Runs a single problem and writes the requested output; returns nothing, throws on failure.
inline void run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    const RunResult result = execute(config);
    for (const auto& warning : result.warnings) {
        err << "warning: " << warning << '\n';
    }
    if (!result.bound.holds) {
        err << "warning: a priori bound violated (lhs " << format_table(result.bound.lhs) << " > rhs "
            << format_table(result.bound.rhs) << ")\n";
    }
    out << summary_line(result.error) << '\n';
    if (config.compare_reference) {
        if (result.reference) {
            out << "reference l2 = " << format_table(result.reference->l2)
                << "  linf = " << format_table(result.reference->linf) << "  rel_dev l2 = "
                << format_table(relative_deviation(result.error.l2, result.reference->l2)) << "  linf = "
                << format_table(relative_deviation(result.error.linf, result.reference->linf)) << '\n';
        } else {
            err << "warning: no reference value for this configuration\n";
        }
    }
    switch (config.emit) {
    case Emit::Table:
        if (!config.out.empty()) {
            std::string text = "norm,value\nl2," + format_table(result.error.l2) + "\nlinf," +
                               format_table(result.error.linf) + '\n';
            write_text_file(config.out, text);
        }
        break;
    case Emit::Grid:
        write_text_file(config.out, grid_csv(result.approx, result.exact, result.field.grid()));
        break;
    case Emit::Slice:
        write_text_file(config.out, slice_csv(result, config.slice.value_or(result.entry.figure_slice), config.L));
        break;
    }
}

} // namespace ultrapara
