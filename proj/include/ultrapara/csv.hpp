#pragma once

#include "ultrapara/diagnostics.hpp"
#include "ultrapara/run_config.hpp"
#include "ultrapara/time_grid.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace ultrapara {

inline constexpr const char* grid_csv_header = "n_or_x,k,m,t,s,u_approx,u_exact,abs_err";

/// %.17g, enough digits to round-trip a double.
inline std::string format_exact(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

/// %.8E, the precision of the reference tables.
inline std::string format_table(double value)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8E", value);
    return buf;
}

struct GridRow {
    double x = 0.0;
    int k = 0;
    int m = 0;
    double t = 0.0;
    double s = 0.0;
    double u_approx = 0.0;
    double u_exact = 0.0;
    double abs_err = 0.0;
};

/// Rows ordered by k, then m, then j.
inline std::string grid_csv(const GridSamples& approx, const GridSamples& exact, const TimeGrid& grid)
{
    const auto xs = spatial_nodes(approx.intervals());
    std::string out = grid_csv_header;
    out += '\n';
    for (int k = 1; k <= approx.steps(); ++k) {
        for (int m = 1; m <= approx.steps(); ++m) {
            for (int j = 0; j <= approx.intervals(); ++j) {
                const double ua = approx(j, k, m);
                const double ue = exact(j, k, m);
                out += format_exact(xs[static_cast<std::size_t>(j)]);
                out += ',' + std::to_string(k) + ',' + std::to_string(m) + ',';
                out += format_exact(grid.node(k)) + ',' + format_exact(grid.node(m)) + ',';
                out += format_exact(ua) + ',' + format_exact(ue) + ',' + format_exact(std::abs(ua - ue));
                out += '\n';
            }
        }
    }
    return out;
}

inline void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << text;
    out.flush();
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

inline std::vector<GridRow> read_grid_csv(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    std::string line;
    if (!std::getline(in, line) || line != grid_csv_header) {
        throw IoError("'" + path + "' does not start with the grid header");
    }
    std::vector<GridRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::istringstream fields(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(fields, cell, ',')) {
            cells.push_back(cell);
        }
        if (cells.size() != 8) {
            throw IoError("malformed grid row: " + line);
        }
        GridRow row;
        row.x = std::stod(cells[0]);
        row.k = std::stoi(cells[1]);
        row.m = std::stoi(cells[2]);
        row.t = std::stod(cells[3]);
        row.s = std::stod(cells[4]);
        row.u_approx = std::stod(cells[5]);
        row.u_exact = std::stod(cells[6]);
        row.abs_err = std::stod(cells[7]);
        rows.push_back(row);
    }
    return rows;
}

} // namespace ultrapara
