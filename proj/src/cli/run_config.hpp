#ifndef ZELF_CLI_RUN_CONFIG_HPP
#define ZELF_CLI_RUN_CONFIG_HPP

#include <map>
#include <string>
#include <vector>

namespace zelf_cli {

// Everything a run depends on. A run is reproducible from this alone; every
// output file embeds it as a header (CSV) or "config" object (JSON).
struct RunConfig {
    std::string subcommand;
    std::string cross_section = "2x1";   // "2x1" | "1x2"
    double a_tilde = 0.05;
    double r_tilde = 0.0;                // 0 = not set
    bool lift_only = false;
    bool drag_only = false;
    bool allow_small_bend = false;
    std::string r_schedule;              // "lo:hi:n", log-spaced, swept descending
    int grid_r = 0;                      // 0 = default for the cross-section
    int grid_z = 0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_end = 1e9;
    std::vector<std::string> seeds;      // "r,z" literals
    int random_seeds = 0;
    unsigned rng_seed = 12345;
    std::string out;
    std::string format = "csv";          // "csv" | "json"
    bool contours = false;
};

// Shortest round-trip decimal rendering of a double.
std::string format_double(double value);

// Flat key=value view of the effective configuration, sorted by key.
std::map<std::string, std::string> config_map(const RunConfig& cfg);

// "# key=value" header block for CSV outputs.
std::string config_header(const RunConfig& cfg);

// Parses "lo:hi:n"; returns false on malformed input.
bool parse_schedule_spec(const std::string& spec, double& lo, double& hi, int& n);

// Parses "NxM" grid specs and "r,z" seed literals.
bool parse_grid_spec(const std::string& spec, int& nr, int& nz);
bool parse_seed(const std::string& spec, double& r, double& z);

// Output path helpers: companion files share the stem of the main output.
std::string path_stem(const std::string& path);

} // namespace zelf_cli

#endif
