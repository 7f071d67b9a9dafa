#include "cli/commands.hpp"
#include "cli/run_config.hpp"

#include <zelf/zelf.h>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

// zelf: equilibria, trajectories and bifurcations of inertial particle
// focusing in curved rectangular ducts.
//
// Subcommands: field, simulate, equilibria, limits, sweep. A flat key=value
// config file (--config) preloads any option of the subcommand; explicit
// command-line flags win.

namespace {

void add_common(CLI::App* cmd, zelf_cli::RunConfig& cfg, std::string& grid_spec,
                std::string& config_path) {
    auto last = [](CLI::Option* opt) { opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); };
    last(cmd->add_option("--cross-section", cfg.cross_section, "duct cross-section")
             ->check(CLI::IsMember({"2x1", "1x2"}))
             ->capture_default_str());
    last(cmd->add_option("--a-tilde", cfg.a_tilde, "dimensionless particle size")
             ->capture_default_str());
    last(cmd->add_option("--r-tilde", cfg.r_tilde, "dimensionless bend radius"));
    cmd->add_flag("--lift-only", cfg.lift_only, "infinite-bend-radius limit (drag off)");
    cmd->add_flag("--drag-only", cfg.drag_only, "vanishing-particle limit (lift off)");
    cmd->add_flag("--allow-small-bend", cfg.allow_small_bend,
                  "permit R-tilde below the physical minimum");
    last(cmd->add_option("--grid", grid_spec, "grid as NxM (r x z)"));
    last(cmd->add_option("--tol", cfg.rel_tol, "integrator relative tolerance")
             ->capture_default_str());
    last(cmd->add_option("--abs-tol", cfg.abs_tol, "integrator absolute tolerance")
             ->capture_default_str());
    last(cmd->add_option("--t-end", cfg.t_end, "integration time horizon")
             ->capture_default_str());
    last(cmd->add_option("--out", cfg.out, "output path")->required());
    last(cmd->add_option("--format", cfg.format, "output format")
             ->check(CLI::IsMember({"csv", "json"}))
             ->capture_default_str());
    last(cmd->add_option("--config", config_path,
                         "flat key=value configuration file (command line wins)"));
}

// Expands "--config FILE" by splicing the file's key=value pairs in right
// after the subcommand token, so explicit arguments override them.
bool splice_config(std::vector<std::string>& args, std::string* error) {
    std::string path;
    std::vector<std::string> stripped;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                *error = "--config needs a file path";
                return false;
            }
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            stripped.push_back(args[i]);
        }
    }
    args = std::move(stripped);
    if (path.empty()) return true;

    std::ifstream in(path);
    if (!in) {
        *error = "cannot read config file " + path;
        return false;
    }
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string entry = line.substr(first, last - first + 1);
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) {
            *error = "config file line is not key=value: " + entry;
            return false;
        }
        tokens.push_back("--" + entry.substr(0, eq) + "=" + entry.substr(eq + 1));
    }
    // Insert after the subcommand name (the first non-option token).
    std::size_t at = args.size();
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (!args[i].empty() && args[i][0] != '-') {
            at = i + 1;
            break;
        }
    }
    args.insert(args.begin() + at, tokens.begin(), tokens.end());
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("zelf ") + zelf_version() +
                 " - inertial particle focusing in curved rectangular ducts"};
    app.require_subcommand(1);

    zelf_cli::RunConfig cfg;
    std::string grid_spec;
    std::string config_path;

    CLI::App* field = app.add_subcommand("field", "sample the lift and drag force fields");
    field->add_flag("--contours", cfg.contours, "extract zero-level polylines");
    CLI::App* simulate = app.add_subcommand("simulate", "integrate particle trajectories");
    simulate->add_option("--seed", cfg.seeds, "seed point r,z (repeatable)");
    simulate->add_option("--random-seeds", cfg.random_seeds, "number of random interior seeds")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    simulate->add_option("--rng", cfg.rng_seed, "seed for the random generator")
        ->capture_default_str()
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    CLI::App* equilibria =
        app.add_subcommand("equilibria", "find and classify particle equilibria");
    CLI::App* limits = app.add_subcommand("limits", "analytic limit reports (JSON)");
    CLI::App* sweep = app.add_subcommand("sweep", "trace equilibrium branches over R-tilde");
    sweep->add_option("--r-schedule", cfg.r_schedule,
                      "bend-radius schedule lo:hi:n (log-spaced, swept descending)")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    for (CLI::App* cmd : {field, simulate, equilibria, limits, sweep})
        add_common(cmd, cfg, grid_spec, config_path);

    std::vector<std::string> args(argv + 1, argv + argc);
    std::string splice_error;
    if (!splice_config(args, &splice_error)) {
        std::fprintf(stderr, "error: %s\n", splice_error.c_str());
        return zelf_cli::exit_usage;
    }

    try {
        // CLI11 consumes the argument list in reverse.
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : zelf_cli::exit_usage;
    }

    for (CLI::App* cmd : {field, simulate, equilibria, limits, sweep})
        if (cmd->parsed()) cfg.subcommand = cmd->get_name();
    // Limit reports are JSON documents unless overridden.
    if (limits->parsed() && limits->get_option("--format")->count() == 0) cfg.format = "json";
    if (!grid_spec.empty() && !zelf_cli::parse_grid_spec(grid_spec, cfg.grid_r, cfg.grid_z)) {
        std::fprintf(stderr, "error: bad --grid '%s' (want NxM)\n", grid_spec.c_str());
        return zelf_cli::exit_usage;
    }
    return zelf_cli::run(cfg);
}
