#include "cli/run_config.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace zelf_cli {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::map<std::string, std::string> config_map(const RunConfig& cfg) {
    std::map<std::string, std::string> m;
    m["subcommand"] = cfg.subcommand;
    m["cross_section"] = cfg.cross_section;
    m["a_tilde"] = format_double(cfg.a_tilde);
    if (cfg.r_tilde > 0.0) m["r_tilde"] = format_double(cfg.r_tilde);
    m["lift_only"] = cfg.lift_only ? "true" : "false";
    m["drag_only"] = cfg.drag_only ? "true" : "false";
    if (cfg.allow_small_bend) m["allow_small_bend"] = "true";
    if (!cfg.r_schedule.empty()) m["r_schedule"] = cfg.r_schedule;
    if (cfg.grid_r > 0) m["grid_r"] = std::to_string(cfg.grid_r);
    if (cfg.grid_z > 0) m["grid_z"] = std::to_string(cfg.grid_z);
    m["rel_tol"] = format_double(cfg.rel_tol);
    m["abs_tol"] = format_double(cfg.abs_tol);
    m["t_end"] = format_double(cfg.t_end);
    if (!cfg.seeds.empty()) {
        std::string joined;
        for (const std::string& s : cfg.seeds) {
            if (!joined.empty()) joined += ";";
            joined += s;
        }
        m["seeds"] = joined;
    }
    if (cfg.random_seeds > 0) {
        m["random_seeds"] = std::to_string(cfg.random_seeds);
        m["rng_seed"] = std::to_string(cfg.rng_seed);
    }
    m["out"] = cfg.out;
    m["format"] = cfg.format;
    if (cfg.contours) m["contours"] = "true";
    return m;
}

std::string config_header(const RunConfig& cfg) {
    std::string out;
    for (const auto& [key, value] : config_map(cfg)) {
        out += "# ";
        out += key;
        out += "=";
        out += value;
        out += "\n";
    }
    return out;
}

bool parse_schedule_spec(const std::string& spec, double& lo, double& hi, int& n) {
    std::istringstream in(spec);
    char c1 = 0, c2 = 0;
    if (!(in >> lo >> c1 >> hi >> c2 >> n)) return false;
    if (c1 != ':' || c2 != ':') return false;
    std::string rest;
    if (in >> rest) return false;
    return lo > 0.0 && hi > lo && n >= 2;
}

bool parse_grid_spec(const std::string& spec, int& nr, int& nz) {
    std::istringstream in(spec);
    char x = 0;
    if (!(in >> nr >> x >> nz)) return false;
    if (x != 'x' && x != 'X') return false;
    std::string rest;
    if (in >> rest) return false;
    return nr > 1 && nz > 1;
}

bool parse_seed(const std::string& spec, double& r, double& z) {
    std::istringstream in(spec);
    char c = 0;
    if (!(in >> r >> c >> z)) return false;
    if (c != ',') return false;
    std::string rest;
    if (in >> rest) return false;
    return true;
}

std::string path_stem(const std::string& path) {
    for (const char* ext : {".csv", ".json"}) {
        const std::string suffix(ext);
        if (path.size() > suffix.size() &&
            path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0)
            return path.substr(0, path.size() - suffix.size());
    }
    return path;
}

} // namespace zelf_cli
