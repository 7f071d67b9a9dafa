#include "cli/commands.hpp"

#include "cli/marching.hpp"

#include <zelf/zelf.h>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <string>
#include <vector>

// Subcommand implementations. All numerics go through the public C API; this
// layer owns argument resolution, file formats, and the embedded run
// configuration. Output bytes are a pure function of the configuration.

namespace zelf_cli {

namespace {

using nlohmann::json;

zelf_cross_section cs_of(const RunConfig& cfg) {
    return cfg.cross_section == "1x2" ? ZELF_CS_RECT_1X2 : ZELF_CS_RECT_2X1;
}

int fail_usage(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return exit_usage;
}

int fail_numerical(const std::string& what) {
    std::fprintf(stderr, "error: %s: %s\n", what.c_str(), zelf_last_error());
    return exit_numerical;
}

bool write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out << contents;
    return bool(out);
}

json config_json(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& [key, value] : config_map(cfg)) j[key] = value;
    return j;
}

// Model handle with scoped lifetime; reports the validity warning once.
struct ModelHandle {
    zelf_model* model = nullptr;
    ~ModelHandle() { zelf_model_free(model); }
};

int make_model(const RunConfig& cfg, ModelHandle& out) {
    if (cfg.lift_only && cfg.drag_only)
        return fail_usage("--lift-only and --drag-only are mutually exclusive");
    unsigned flags = cfg.allow_small_bend ? ZELF_MODEL_ALLOW_SMALL_BEND : 0u;
    double r_tilde = cfg.r_tilde;
    if (cfg.lift_only) {
        r_tilde = std::numeric_limits<double>::infinity();
    } else if (cfg.drag_only) {
        flags |= ZELF_MODEL_DRAG_ONLY;
        if (!(r_tilde > 0.0)) return fail_usage("--drag-only requires --r-tilde");
    } else if (!(r_tilde > 0.0)) {
        return fail_usage("give --r-tilde, or pick a limit with --lift-only / --drag-only");
    }
    if (zelf_model_create(cs_of(cfg), cfg.a_tilde, r_tilde, flags, &out.model) != ZELF_OK)
        return fail_usage(zelf_last_error());
    if (zelf_model_validity_warning(out.model))
        std::fprintf(stderr, "warning: a_tilde = %s exceeds the fitted validity range (0.05)\n",
                     format_double(cfg.a_tilde).c_str());
    return exit_ok;
}

std::string eq_kind_str(zelf_eq_kind kind) { return zelf_eq_kind_name(kind); }

json equilibria_json(const zelf_equilibria* set) {
    json arr = json::array();
    for (size_t i = 0; i < zelf_equilibria_count(set); ++i) {
        double r, z, re1, im1, re2, im2, resid;
        zelf_eq_kind kind;
        zelf_equilibria_location(set, i, &r, &z);
        zelf_equilibria_eigenvalues(set, i, &re1, &im1, &re2, &im2);
        zelf_equilibria_kind(set, i, &kind);
        zelf_equilibria_residual(set, i, &resid);
        json e = {{"r", r},
                  {"z", z},
                  {"kind", eq_kind_str(kind)},
                  {"lambda1", {{"re", re1}, {"im", im1}}},
                  {"lambda2", {{"re", re2}, {"im", im2}}},
                  {"residual", resid}};
        double v1[2], v2[2];
        if (zelf_equilibria_eigenvectors(set, i, v1, v2) == ZELF_OK) {
            e["eigenvector1"] = {v1[0], v1[1]};
            e["eigenvector2"] = {v2[0], v2[1]};
        }
        arr.push_back(e);
    }
    return arr;
}

} // namespace

int cmd_field(const RunConfig& cfg) {
    const zelf_cross_section cs = cs_of(cfg);
    const double hw = zelf_cs_half_width(cs);
    const double hh = zelf_cs_half_height(cs);
    int nr = cfg.grid_r;
    int nz = cfg.grid_z;
    if (nr == 0) nr = cs == ZELF_CS_RECT_2X1 ? 201 : 101;
    if (nz == 0) nz = cs == ZELF_CS_RECT_2X1 ? 101 : 201;
    if (nr < 2 || nz < 2) return fail_usage("grid must be at least 2x2");

    std::vector<double> rs(nr), zs(nz);
    for (int i = 0; i < nr; ++i) rs[i] = -hw + 2.0 * hw * (double(i) / (nr - 1));
    for (int k = 0; k < nz; ++k) zs[k] = -hh + 2.0 * hh * (double(k) / (nz - 1));

    const size_t n = size_t(nr) * size_t(nz);
    std::vector<double> lr(n), lz(n), dr(n), dz(n);
    for (int i = 0; i < nr; ++i)
        for (int k = 0; k < nz; ++k) {
            double l[2], d[2];
            if (zelf_lift(cs, rs[i], zs[k], l) != ZELF_OK ||
                zelf_drag(cs, rs[i], zs[k], d) != ZELF_OK)
                return fail_numerical("field evaluation");
            const size_t idx = size_t(i) * nz + k;
            lr[idx] = l[0];
            lz[idx] = l[1];
            dr[idx] = d[0];
            dz[idx] = d[1];
        }

    if (cfg.format == "json") {
        json doc;
        doc["config"] = config_json(cfg);
        doc["columns"] = {"r", "z", "lift_r", "lift_z", "drag_r", "drag_z"};
        json rows = json::array();
        for (int i = 0; i < nr; ++i)
            for (int k = 0; k < nz; ++k) {
                const size_t idx = size_t(i) * nz + k;
                rows.push_back({rs[i], zs[k], lr[idx], lz[idx], dr[idx], dz[idx]});
            }
        doc["rows"] = rows;
        if (!write_file(cfg.out, doc.dump(2) + "\n")) return fail_usage("cannot write " + cfg.out);
    } else {
        std::string csv = config_header(cfg);
        csv += "r,z,lift_r,lift_z,drag_r,drag_z\n";
        for (int i = 0; i < nr; ++i)
            for (int k = 0; k < nz; ++k) {
                const size_t idx = size_t(i) * nz + k;
                csv += format_double(rs[i]) + "," + format_double(zs[k]) + "," +
                       format_double(lr[idx]) + "," + format_double(lz[idx]) + "," +
                       format_double(dr[idx]) + "," + format_double(dz[idx]) + "\n";
            }
        if (!write_file(cfg.out, csv)) return fail_usage("cannot write " + cfg.out);
    }

    if (cfg.contours) {
        const char* names[] = {"lift_r", "lift_z", "drag_r", "drag_z"};
        const std::vector<double>* fields[] = {&lr, &lz, &dr, &dz};
        std::string csv = config_header(cfg);
        csv += "field,polyline,vertex,r,z\n";
        for (int f = 0; f < 4; ++f) {
            const auto polylines = zero_contours(*fields[f], nr, nz, rs, zs);
            for (size_t p = 0; p < polylines.size(); ++p)
                for (size_t v = 0; v < polylines[p].size(); ++v)
                    csv += std::string(names[f]) + "," + std::to_string(p) + "," +
                           std::to_string(v) + "," + format_double(polylines[p][v].r) + "," +
                           format_double(polylines[p][v].z) + "\n";
        }
        const std::string path = path_stem(cfg.out) + ".contours.csv";
        if (!write_file(path, csv)) return fail_usage("cannot write " + path);
    }
    return exit_ok;
}

int cmd_simulate(const RunConfig& cfg) {
    ModelHandle mh;
    if (int rc = make_model(cfg, mh); rc != exit_ok) return rc;

    // Seed list: explicit literals first, then reproducible random interior
    // points.
    std::vector<std::pair<double, double>> seeds;
    for (const std::string& s : cfg.seeds) {
        double r, z;
        if (!parse_seed(s, r, z)) return fail_usage("bad seed '" + s + "' (want r,z)");
        seeds.push_back({r, z});
    }
    if (cfg.random_seeds > 0) {
        const zelf_cross_section cs = cs_of(cfg);
        std::mt19937 rng(cfg.rng_seed);
        std::uniform_real_distribution<double> ur(-0.9 * zelf_cs_half_width(cs),
                                                  0.9 * zelf_cs_half_width(cs));
        std::uniform_real_distribution<double> uz(-0.9 * zelf_cs_half_height(cs),
                                                  0.9 * zelf_cs_half_height(cs));
        for (int i = 0; i < cfg.random_seeds; ++i) seeds.push_back({ur(rng), uz(rng)});
    }
    if (seeds.empty()) return fail_usage("no seeds: give --seed r,z or --random-seeds N");

    zelf_integrate_options opts;
    zelf_integrate_options_init(&opts);
    opts.rel_tol = cfg.rel_tol;
    opts.abs_tol = cfg.abs_tol;
    opts.t_end = cfg.t_end;
    opts.detect_closed_orbit = cfg.drag_only ? 1 : 0;

    const std::string stem = path_stem(cfg.out);
    json summary;
    summary["config"] = config_json(cfg);
    json per_seed = json::array();
    bool any_failed = false;

    for (size_t i = 0; i < seeds.size(); ++i) {
        const auto [r0, z0] = seeds[i];
        json entry = {{"seed", {r0, z0}}};
        zelf_trajectory* traj = nullptr;
        const zelf_status st = zelf_integrate(mh.model, r0, z0, &opts, &traj);
        if (st != ZELF_OK) {
            entry["error"] = std::string(zelf_status_name(st)) + ": " + zelf_last_error();
            any_failed = true;
            per_seed.push_back(entry);
            continue;
        }
        const size_t n = zelf_trajectory_size(traj);
        char name[32];
        std::snprintf(name, sizeof(name), ".seed%03zu.csv", i);
        std::string csv = config_header(cfg);
        csv += "# seed=" + format_double(r0) + "," + format_double(z0) + "\n";
        csv += "t,r,z\n";
        double t = 0.0, r = 0.0, z = 0.0;
        for (size_t k = 0; k < n; ++k) {
            zelf_trajectory_sample(traj, k, &t, &r, &z);
            csv += format_double(t) + "," + format_double(r) + "," + format_double(z) + "\n";
        }
        const std::string path = stem + name;
        if (!write_file(path, csv)) {
            zelf_trajectory_free(traj);
            return fail_usage("cannot write " + path);
        }

        entry["file"] = path;
        entry["terminal"] = zelf_terminal_reason_name(zelf_trajectory_terminal_reason(traj));
        entry["samples"] = n;
        entry["t_final"] = t;
        entry["final"] = {r, z};
        if (zelf_trajectory_terminal_reason(traj) == ZELF_TERM_CLOSED_ORBIT_DETECTED)
            entry["period"] = zelf_trajectory_period(traj);
        if (cfg.drag_only) {
            // Conservation report: relative span of the trajectory invariant.
            double h0 = 0.0, lo = 0.0, hi = 0.0;
            zelf_drag_invariant(cs_of(cfg), r0, z0, &h0);
            lo = hi = h0;
            for (size_t k = 0; k < n; ++k) {
                zelf_trajectory_sample(traj, k, &t, &r, &z);
                double h = 0.0;
                zelf_drag_invariant(cs_of(cfg), r, z, &h);
                lo = std::min(lo, h);
                hi = std::max(hi, h);
            }
            entry["invariant_drift"] = h0 != 0.0 ? (hi - lo) / std::abs(h0) : hi - lo;
        }
        per_seed.push_back(entry);
        zelf_trajectory_free(traj);
    }

    summary["trajectories"] = per_seed;
    const std::string path = stem + ".summary.json";
    if (!write_file(path, summary.dump(2) + "\n")) return fail_usage("cannot write " + path);
    return any_failed ? exit_numerical : exit_ok;
}

int cmd_equilibria(const RunConfig& cfg) {
    ModelHandle mh;
    if (int rc = make_model(cfg, mh); rc != exit_ok) return rc;

    zelf_equilibria* set = nullptr;
    if (zelf_find_equilibria(mh.model, cfg.grid_r, cfg.grid_z, &set) != ZELF_OK)
        return fail_numerical("equilibrium search");

    int rc = exit_ok;
    if (cfg.format == "json") {
        json doc;
        doc["config"] = config_json(cfg);
        doc["wall_continuum"] = zelf_equilibria_wall_continuum(set) != 0;
        doc["equilibria"] = equilibria_json(set);
        if (!write_file(cfg.out, doc.dump(2) + "\n")) rc = fail_usage("cannot write " + cfg.out);
    } else {
        std::string csv = config_header(cfg);
        csv += "# wall_continuum=" +
               std::string(zelf_equilibria_wall_continuum(set) ? "true" : "false") + "\n";
        csv += "r,z,kind,re_lambda1,im_lambda1,re_lambda2,im_lambda2,residual\n";
        for (size_t i = 0; i < zelf_equilibria_count(set); ++i) {
            double r, z, re1, im1, re2, im2, resid;
            zelf_eq_kind kind;
            zelf_equilibria_location(set, i, &r, &z);
            zelf_equilibria_eigenvalues(set, i, &re1, &im1, &re2, &im2);
            zelf_equilibria_kind(set, i, &kind);
            zelf_equilibria_residual(set, i, &resid);
            csv += format_double(r) + "," + format_double(z) + "," + eq_kind_str(kind) + "," +
                   format_double(re1) + "," + format_double(im1) + "," + format_double(re2) +
                   "," + format_double(im2) + "," + format_double(resid) + "\n";
        }
        if (!write_file(cfg.out, csv)) rc = fail_usage("cannot write " + cfg.out);
    }
    zelf_equilibria_free(set);
    return rc;
}

int cmd_limits(const RunConfig& cfg) {
    if (cfg.format != "json") return fail_usage("limits reports are JSON; use --format json");
    const double r_tilde = cfg.r_tilde > 0.0 ? cfg.r_tilde : 100.0;

    json doc;
    doc["config"] = config_json(cfg);
    int all_passed = 1;
    if (!cfg.drag_only) {
        char* text = nullptr;
        int passed = 0;
        if (zelf_lift_limit_report_json(cs_of(cfg), 0, &text, &passed) != ZELF_OK)
            return fail_numerical("lift limit report");
        doc["lift_only"] = json::parse(text);
        zelf_string_free(text);
        all_passed &= passed;
    }
    if (!cfg.lift_only) {
        char* text = nullptr;
        int passed = 0;
        if (zelf_drag_limit_report_json(cs_of(cfg), r_tilde, 0, &text, &passed) != ZELF_OK)
            return fail_numerical("drag limit report");
        doc["drag_only"] = json::parse(text);
        zelf_string_free(text);
        all_passed &= passed;
    }
    doc["passed"] = all_passed != 0;
    if (!write_file(cfg.out, doc.dump(2) + "\n")) return fail_usage("cannot write " + cfg.out);
    return exit_ok;
}

int cmd_sweep(const RunConfig& cfg) {
    const zelf_cross_section cs = cs_of(cfg);
    double lo = zelf_cs_min_bend_radius(cs), hi = 1e5;
    int n = 400;
    if (!cfg.r_schedule.empty() && !parse_schedule_spec(cfg.r_schedule, lo, hi, n))
        return fail_usage("bad --r-schedule '" + cfg.r_schedule + "' (want lo:hi:n)");
    std::vector<double> schedule(n);
    if (zelf_log_schedule(hi, lo, schedule.size(), schedule.data()) != ZELF_OK)
        return fail_usage(zelf_last_error());

    zelf_sweep_options opts;
    zelf_sweep_options_init(&opts);
    opts.grid_r = cfg.grid_r;
    opts.grid_z = cfg.grid_z;

    zelf_sweep* sweep = nullptr;
    if (zelf_sweep_run(cs, cfg.a_tilde, schedule.data(), schedule.size(), &opts, &sweep) !=
        ZELF_OK)
        return fail_numerical("sweep");

    // Diagram: one row per (branch, schedule point).
    std::string csv = config_header(cfg);
    csv += "r_tilde,branch,r,z,re_lambda1,im_lambda1,re_lambda2,im_lambda2,kind\n";
    for (size_t b = 0; b < zelf_sweep_branch_count(sweep); ++b) {
        for (size_t i = 0; i < zelf_sweep_branch_size(sweep, b); ++i) {
            double rt, r, z, re1, im1, re2, im2;
            zelf_eq_kind kind;
            zelf_sweep_branch_sample(sweep, b, i, &rt, &r, &z, &re1, &im1, &re2, &im2, &kind);
            csv += format_double(rt) + "," + std::to_string(b) + "," + format_double(r) + "," +
                   format_double(z) + "," + format_double(re1) + "," + format_double(im1) + "," +
                   format_double(re2) + "," + format_double(im2) + "," + eq_kind_str(kind) + "\n";
        }
    }
    int rc = exit_ok;
    if (!write_file(cfg.out, csv)) rc = fail_usage("cannot write " + cfg.out);

    // Events, transitions and the final set.
    json doc;
    doc["config"] = config_json(cfg);
    json events = json::array();
    for (size_t i = 0; i < zelf_sweep_event_count(sweep); ++i) {
        zelf_event_kind kind;
        double elo, ehi, hr, hz;
        zelf_pitchfork_label label;
        int ambiguous;
        zelf_sweep_event(sweep, i, &kind, &elo, &ehi, &label, &hr, &hz, &ambiguous);
        const int* ids = nullptr;
        size_t nids = 0;
        zelf_sweep_event_branches(sweep, i, &ids, &nids);
        json ev = {{"kind", zelf_event_kind_name(kind)},
                   {"r_lo", elo},
                   {"r_hi", ehi},
                   {"location", {{"r", hr}, {"z", hz}}},
                   {"branches", std::vector<int>(ids, ids + nids)},
                   {"ambiguous", ambiguous != 0}};
        if (kind == ZELF_EVENT_PITCHFORK) ev["label"] = zelf_pitchfork_label_name(label);
        events.push_back(ev);
    }
    doc["events"] = events;

    json transitions = json::array();
    for (size_t i = 0; i < zelf_sweep_transition_count(sweep); ++i) {
        int branch;
        double thi, tlo;
        zelf_eq_kind from, to;
        zelf_sweep_transition(sweep, i, &branch, &thi, &tlo, &from, &to);
        transitions.push_back({{"branch", branch},
                               {"r_hi", thi},
                               {"r_lo", tlo},
                               {"from", eq_kind_str(from)},
                               {"to", eq_kind_str(to)}});
    }
    doc["transitions"] = transitions;

    zelf_equilibria* final_set = nullptr;
    if (zelf_sweep_final_equilibria(sweep, &final_set) == ZELF_OK) {
        doc["final"] = {{"r_tilde", schedule.back()}, {"equilibria", equilibria_json(final_set)}};
        zelf_equilibria_free(final_set);
    }

    const std::string path = path_stem(cfg.out) + ".events.json";
    if (!write_file(path, doc.dump(2) + "\n")) rc = fail_usage("cannot write " + path);
    zelf_sweep_free(sweep);
    return rc;
}

int run(const RunConfig& cfg) {
    if (cfg.out.empty()) return fail_usage("--out is required");
    if (cfg.format != "csv" && cfg.format != "json")
        return fail_usage("--format must be csv or json");
    if (cfg.subcommand == "field") return cmd_field(cfg);
    if (cfg.subcommand == "simulate") return cmd_simulate(cfg);
    if (cfg.subcommand == "equilibria") return cmd_equilibria(cfg);
    if (cfg.subcommand == "limits") return cmd_limits(cfg);
    if (cfg.subcommand == "sweep") return cmd_sweep(cfg);
    return fail_usage("unknown subcommand '" + cfg.subcommand + "'");
}

} // namespace zelf_cli
