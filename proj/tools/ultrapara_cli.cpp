// Command-line front end: single runs, grid/slice emission and table reproduction.

#include "ultrapara/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

enum ExitCode { ok = 0, bad_config = 1, solver_failure = 2, io_failure = 3 };

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spectral-characteristic solver for u_t + u_s + Lu = f(u, t, s)"};

    std::optional<std::string> example;
    std::optional<std::string> problem_file;
    // Flag values are kept as text and fed through the same parser as the problem file.
    std::vector<std::pair<std::string, std::optional<std::string>>> settings = {
        {"M", {}}, {"L", {}},     {"nmax", {}}, {"q", {}},   {"j0", {}},
        {"T", {}}, {"emit", {}},  {"slice", {}}, {"out", {}}, {"tables", {}},
        {"modes", {}},
    };
    bool compare = false;

    auto* example_opt = app.add_option("--example", example, "Registered example 1-4");
    app.add_option("--problem", problem_file, "key = value problem file")->excludes(example_opt);
    const std::vector<std::string> help = {
        "Time steps per axis",
        "Spatial evaluation intervals (default 20)",
        "Number of eigenmodes (default 8)",
        "Picard iterations (nonlinear problems)",
        "Largest quadrature index; the rule has j0 + 1 points (default 5)",
        "Horizon override",
        "table | grid | slice",
        "Slice <axis>=<value>, e.g. x=pi/4",
        "Output file (or directory with --tables)",
        "Comma-separated table ids to reproduce",
        "all | excited",
    };
    for (std::size_t i = 0; i < settings.size(); ++i) {
        app.add_option("--" + settings[i].first, settings[i].second, help[i]);
    }
    app.add_flag("--compare-paper", compare, "Print deviation from the reference value");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : bad_config;
    }

    ultrapara::RunConfig config;
    try {
        if (problem_file) {
            config.example.reset();
            ultrapara::apply_config_file(config, *problem_file);
        }
        if (example) {
            ultrapara::apply_setting(config, "example", *example);
        }
        for (const auto& [key, value] : settings) {
            if (value) {
                ultrapara::apply_setting(config, key, *value);
            }
        }
        if (compare) {
            config.compare_reference = true;
        }
        ultrapara::validate(config);

        if (config.tables) {
            ultrapara::reproduce_tables(*config.tables, config.out.empty() ? "." : config.out, std::cout);
            return ok;
        }
        ultrapara::run(config, std::cout, std::cerr);
        return ok;
    } catch (const ultrapara::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bad_config;
    } catch (const ultrapara::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return io_failure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return bad_config;
    } catch (const std::exception& e) {
        std::cerr << "solver error: " << e.what() << '\n';
        return solver_failure;
    }
}
