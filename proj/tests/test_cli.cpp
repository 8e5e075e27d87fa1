#include "ultrapara/csv.hpp"
#include "ultrapara/run_config.hpp"
#include "ultrapara/runner.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numbers>
#include <sstream>
#include <string>

using namespace ultrapara;

namespace {

constexpr double pi = std::numbers::pi;

std::filesystem::path scratch(const std::string& name)
{
    const auto dir = std::filesystem::temp_directory_path() / "ultrapara_tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::size_t count_lines(const std::string& text)
{
    return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

} // namespace

TEST(RunConfig, DefaultsMatchReferenceSettings)
{
    const RunConfig config;
    EXPECT_EQ(config.L, 20);
    EXPECT_EQ(config.j0, 5);
    EXPECT_EQ(config.n_max, 8);
    EXPECT_EQ(config.emit, Emit::Table);
}

TEST(RunConfig, CoordinateForms)
{
    EXPECT_DOUBLE_EQ(parse_coordinate("v", "0.5"), 0.5);
    EXPECT_DOUBLE_EQ(parse_coordinate("v", "pi"), pi);
    EXPECT_DOUBLE_EQ(parse_coordinate("v", "pi/4"), pi / 4);
    EXPECT_DOUBLE_EQ(parse_coordinate("v", "3pi/4"), 3 * pi / 4);
    EXPECT_DOUBLE_EQ(parse_coordinate("v", " 3*pi / 2 "), 3 * pi / 2);
    EXPECT_THROW((void)parse_coordinate("v", "pi/0"), ConfigError);
    EXPECT_THROW((void)parse_coordinate("v", "pie"), ConfigError);
    EXPECT_THROW((void)parse_coordinate("v", "half"), ConfigError);
}

TEST(RunConfig, SliceSpec)
{
    const auto slice = parse_slice("x=pi/2");
    EXPECT_EQ(slice.axis, 'x');
    EXPECT_DOUBLE_EQ(slice.value, pi / 2);
    EXPECT_THROW((void)parse_slice("y=1"), ConfigError);
    EXPECT_THROW((void)parse_slice("t"), ConfigError);
}

TEST(RunConfig, KeyValueText)
{
    RunConfig config;
    apply_config_text(config, "# custom problem\n"
                              "example = custom\n"
                              "basis = ND   # Neumann-Dirichlet\n"
                              "\n"
                              "initial = 1.0, 0, 0.5\n"
                              "source = 0, 2\n"
                              "T = 0.5\n"
                              "M = 12\n"
                              "emit = slice\n"
                              "slice = s=0.25\n"
                              "out = /tmp/x.csv\n");
    EXPECT_FALSE(config.example.has_value());
    EXPECT_EQ(config.custom_basis, BasisKind::NeumannDirichlet);
    EXPECT_EQ(config.custom_initial, (std::vector<double>{1.0, 0.0, 0.5}));
    EXPECT_EQ(config.custom_source, (std::vector<double>{0.0, 2.0}));
    EXPECT_EQ(config.M, 12);
    EXPECT_EQ(config.emit, Emit::Slice);
    EXPECT_EQ(config.slice->axis, 's');
    EXPECT_NO_THROW(validate(config));
}

TEST(RunConfig, LaterSettingsOverrideEarlier)
{
    RunConfig config;
    apply_config_text(config, "M = 10\nL = 8\n");
    apply_setting(config, "M", "40");
    EXPECT_EQ(config.M, 40);
    EXPECT_EQ(config.L, 8);
}

TEST(RunConfig, Rejections)
{
    RunConfig config;
    EXPECT_THROW(apply_config_text(config, "M 10\n"), ConfigError);
    EXPECT_THROW(apply_setting(config, "colour", "red"), ConfigError);
    EXPECT_THROW(apply_setting(config, "M", "ten"), ConfigError);
    EXPECT_THROW(apply_setting(config, "T", "1e999"), ConfigError);
    EXPECT_THROW(apply_setting(config, "emit", "plot"), ConfigError);
    EXPECT_THROW(apply_setting(config, "basis", "XY"), ConfigError);

    RunConfig bad;
    bad.example = 5;
    EXPECT_THROW(validate(bad), ConfigError);
    bad = RunConfig{};
    bad.M = 0;
    EXPECT_THROW(validate(bad), ConfigError);
    bad = RunConfig{};
    bad.emit = Emit::Grid;
    EXPECT_THROW(validate(bad), ConfigError);
    bad = RunConfig{};
    bad.example.reset();
    EXPECT_THROW(validate(bad), ConfigError);
    bad = RunConfig{};
    bad.tables = std::vector<int>{1, 7};
    EXPECT_THROW(validate(bad), ConfigError);
}

TEST(Runner, ExampleOneSummaryLine)
{
    RunConfig config;
    std::ostringstream out;
    std::ostringstream err;
    run(config, out, err);
    EXPECT_EQ(out.str().rfind("l2 = 1.5160", 0), 0U) << out.str();
    EXPECT_TRUE(err.str().empty());
}

TEST(Runner, CompareReferencePrintsDeviation)
{
    RunConfig config;
    config.example = 3;
    config.compare_reference = true;
    std::ostringstream out;
    std::ostringstream err;
    run(config, out, err);
    EXPECT_NE(out.str().find("reference l2 = 5.82730398E-03"), std::string::npos) << out.str();
}

TEST(Runner, DefaultIterationsFollowTable)
{
    const auto entry = registry_entry(4);
    RunConfig config;
    config.M = 200;
    EXPECT_EQ(resolve_iterations(config, entry), 4);
    config.M = 30;
    EXPECT_EQ(resolve_iterations(config, entry), default_picard_iterations);
    config.q = 9;
    EXPECT_EQ(resolve_iterations(config, entry), 9);
}

TEST(Runner, GridRowCountAndRoundTrip)
{
    RunConfig config;
    config.M = 12;
    config.L = 7;
    const auto result = execute(config);
    const std::string text = grid_csv(result.approx, result.exact, result.field.grid());
    EXPECT_EQ(count_lines(text), 1U + 8U * 12U * 12U);
    EXPECT_EQ(text.find('\r'), std::string::npos);

    const auto path = scratch("grid.csv").string();
    write_text_file(path, text);
    const auto rows = read_grid_csv(path);
    ASSERT_EQ(rows.size(), 8U * 12U * 12U);
    const auto xs = spatial_nodes(7);
    std::size_t i = 0;
    for (int k = 1; k <= 12; ++k) {
        for (int m = 1; m <= 12; ++m) {
            for (int j = 0; j <= 7; ++j, ++i) {
                const auto& row = rows[i];
                EXPECT_EQ(row.k, k);
                EXPECT_EQ(row.m, m);
                EXPECT_EQ(row.x, xs[static_cast<std::size_t>(j)]);
                EXPECT_EQ(row.t, result.field.grid().node(k));
                EXPECT_EQ(row.u_approx, result.approx(j, k, m));
                EXPECT_EQ(row.u_exact, result.exact(j, k, m));
            }
        }
    }
}

TEST(Runner, SliceShapes)
{
    RunConfig config;
    config.example = 2;
    config.M = 10;
    config.L = 6;
    const auto result = execute(config);
    const auto x_slice = slice_csv(result, {'x', pi / 4}, config.L);
    EXPECT_EQ(x_slice.rfind("t,s,u_approx", 0), 0U);
    EXPECT_EQ(count_lines(x_slice), 1U + 11U * 11U);
    const auto t_slice = slice_csv(result, {'t', 0.5}, config.L);
    EXPECT_EQ(t_slice.rfind("x,s,u_approx", 0), 0U);
    EXPECT_EQ(count_lines(t_slice), 1U + 7U * 11U);
    EXPECT_THROW((void)slice_csv(result, {'t', 2.0}, config.L), ConfigError);
    EXPECT_THROW((void)slice_csv(result, {'x', 4.0}, config.L), ConfigError);
}

TEST(Runner, CustomProblemConverges)
{
    RunConfig config;
    config.example.reset();
    config.custom_basis = BasisKind::DirichletNeumannShift1;
    config.custom_initial = {1.0, 0.0, -0.5};
    config.custom_source = {0.0, 3.0};
    config.T = 0.5;
    config.M = 20;
    const double coarse = execute(config).error.l2;
    config.M = 40;
    const double fine = execute(config).error.l2;
    EXPECT_GT(coarse / fine, 1.8);
    EXPECT_LT(coarse / fine, 2.2);
}

TEST(Runner, TableLayouts)
{
    std::vector<TableCell> linear_cells = {{{1, 50, 1.0, 2.0}, {}, {}}, {{1, 100, 0.5, 1.0}, {}, {}}};
    linear_cells[0].computed.l2 = 1.1;
    linear_cells[0].computed.linf = 2.0;
    linear_cells[1].computed.l2 = 0.5;
    linear_cells[1].computed.linf = 0.9;
    const auto linear = table_csv(1, linear_cells);
    EXPECT_EQ(linear.substr(0, linear.find('\n')), "norm,M=50,M=100");
    EXPECT_NE(linear.find("l2_rel_dev,1.00000000E-01,0.00000000E+00\n"), std::string::npos) << linear;
    EXPECT_EQ(count_lines(linear), 7U);

    const std::vector<TableCell> nonlinear_cells = {{{2, 50, 1.0, 1.0}, {}, {}}, {{5, 400, 1.0, 1.0}, {}, {}}};
    const auto nonlinear = table_csv(3, nonlinear_cells);
    EXPECT_EQ(nonlinear.substr(0, nonlinear.find('\n')), "norm,q=2 M=50,q=5 M=400");
}

TEST(Runner, EmptyTableRequestWritesNothing)
{
    const auto dir = scratch("empty_tables");
    std::filesystem::remove_all(dir);
    std::ostringstream log;
    EXPECT_TRUE(reproduce_tables({}, dir.string(), log).empty());
    EXPECT_FALSE(std::filesystem::exists(dir));
}

TEST(Runner, TableOneHeaderAndDeterminism)
{
    const auto first = table_csv(1, compute_table(1));
    const auto second = table_csv(1, compute_table(1));
    EXPECT_EQ(first, second);
    EXPECT_EQ(first.substr(0, first.find('\n')), "norm,M=50,M=100,M=200,M=400");
}

TEST(Runner, UnwritablePathIsIoError)
{
    RunConfig config;
    config.M = 4;
    config.emit = Emit::Grid;
    config.out = "/nonexistent-dir/grid.csv";
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_THROW(run(config, out, err), IoError);
}

TEST(Runner, IncompatibleDataIsRejected)
{
    // Custom problems are compatible by construction, so go through the library directly.
    auto entry = registry_entry(1);
    entry.alpha = [](double x, double) { return 2.0 * std::sin(x); };
    auto problem = make_linear_problem(entry, 4, 2);
    EXPECT_THROW((void)solve_linear(problem, std::size_t{2}), CompatibilityError);
}
