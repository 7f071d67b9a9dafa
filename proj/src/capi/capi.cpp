#include "zelf/zelf.h"

#include "core/analytics.hpp"
#include "core/continuation.hpp"
#include "core/equilibria.hpp"
#include "core/errors.hpp"
#include "core/integrate.hpp"
#include "core/model.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <new>
#include <optional>
#include <string>

// Thin extern-C shell over the solver core: opaque handles own the C++
// objects, exceptions are mapped to status codes, and the failing detail is
// kept per thread for zelf_last_error().

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

template <typename Fn>
zelf_status wrap(Fn&& fn) {
    try {
        return fn();
    } catch (const zelf::domain_error& e) {
        set_error(e.what());
        return ZELF_ERR_DOMAIN;
    } catch (const zelf::numerical_error& e) {
        set_error(e.what());
        return ZELF_ERR_NUMERICAL;
    } catch (const std::invalid_argument& e) {
        set_error(e.what());
        return ZELF_ERR_INVALID_ARGUMENT;
    } catch (const std::bad_alloc&) {
        set_error("out of memory");
        return ZELF_ERR_NUMERICAL;
    } catch (const std::exception& e) {
        set_error(e.what());
        return ZELF_ERR_NUMERICAL;
    }
}

zelf_status invalid(const char* what) {
    set_error(what);
    return ZELF_ERR_INVALID_ARGUMENT;
}

zelf::CrossSectionKind to_kind(zelf_cross_section cs) {
    return cs == ZELF_CS_RECT_2X1 ? zelf::CrossSectionKind::Rect2x1
                                  : zelf::CrossSectionKind::Rect1x2;
}

zelf_eq_kind from_kind(zelf::EqKind k) {
    switch (k) {
        case zelf::EqKind::StableNode: return ZELF_EQ_STABLE_NODE;
        case zelf::EqKind::UnstableNode: return ZELF_EQ_UNSTABLE_NODE;
        case zelf::EqKind::Saddle: return ZELF_EQ_SADDLE;
        case zelf::EqKind::StableSpiral: return ZELF_EQ_STABLE_SPIRAL;
        case zelf::EqKind::UnstableSpiral: return ZELF_EQ_UNSTABLE_SPIRAL;
        case zelf::EqKind::Center: return ZELF_EQ_CENTER;
        case zelf::EqKind::Degenerate: return ZELF_EQ_DEGENERATE;
    }
    return ZELF_EQ_DEGENERATE;
}

void fill_field(const zelf::FieldVector& f, double out[2]) {
    out[0] = f.fr;
    out[1] = f.fz;
}

void fill_jac(const zelf::FieldJacobian& j, double out[4]) {
    out[0] = j.d_fr_dr;
    out[1] = j.d_fr_dz;
    out[2] = j.d_fz_dr;
    out[3] = j.d_fz_dz;
}

void fill_mat(const zelf::Mat2& m, double out[4]) {
    out[0] = m.a_rr;
    out[1] = m.a_rz;
    out[2] = m.a_zr;
    out[3] = m.a_zz;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

struct zelf_model {
    zelf::ModelParams mp;
};

struct zelf_trajectory {
    zelf::Trajectory traj;
};

struct zelf_equilibria {
    zelf::EquilibriumSet set;
};

struct zelf_sweep {
    zelf::SweepResult result;
};

struct zelf_limit_cycle {
    zelf::LimitCycle cycle;
};

extern "C" {

const char* zelf_version(void) { return "0.1.0"; }

const char* zelf_status_name(zelf_status status) {
    switch (status) {
        case ZELF_OK: return "ok";
        case ZELF_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case ZELF_ERR_DOMAIN: return "domain_error";
        case ZELF_ERR_NUMERICAL: return "numerical_error";
        case ZELF_ERR_NOT_FOUND: return "not_found";
        case ZELF_ERR_NOT_AVAILABLE: return "not_available";
        case ZELF_ERR_INDEX: return "index_out_of_range";
    }
    return "unknown";
}

const char* zelf_eq_kind_name(zelf_eq_kind kind) {
    switch (kind) {
        case ZELF_EQ_STABLE_NODE: return "stable_node";
        case ZELF_EQ_UNSTABLE_NODE: return "unstable_node";
        case ZELF_EQ_SADDLE: return "saddle";
        case ZELF_EQ_STABLE_SPIRAL: return "stable_spiral";
        case ZELF_EQ_UNSTABLE_SPIRAL: return "unstable_spiral";
        case ZELF_EQ_CENTER: return "center";
        case ZELF_EQ_DEGENERATE: return "degenerate";
    }
    return "unknown";
}

const char* zelf_terminal_reason_name(zelf_terminal_reason reason) {
    switch (reason) {
        case ZELF_TERM_TIME_EXHAUSTED: return "time_exhausted";
        case ZELF_TERM_CONVERGED_TO_POINT: return "converged_to_point";
        case ZELF_TERM_HIT_BOUNDARY: return "hit_boundary";
        case ZELF_TERM_CLOSED_ORBIT_DETECTED: return "closed_orbit_detected";
    }
    return "unknown";
}

const char* zelf_event_kind_name(zelf_event_kind kind) {
    switch (kind) {
        case ZELF_EVENT_SADDLE_NODE: return "saddle_node";
        case ZELF_EVENT_PITCHFORK: return "pitchfork";
        case ZELF_EVENT_HOPF: return "hopf";
    }
    return "unknown";
}

const char* zelf_pitchfork_label_name(zelf_pitchfork_label label) {
    switch (label) {
        case ZELF_PITCHFORK_NONE: return "none";
        case ZELF_PITCHFORK_SUPERCRITICAL: return "supercritical";
        case ZELF_PITCHFORK_SUBCRITICAL: return "subcritical";
    }
    return "unknown";
}

const char* zelf_last_error(void) { return g_last_error.c_str(); }

/* ---- cross-section metadata ------------------------------------------- */

double zelf_cs_half_width(zelf_cross_section cs) {
    return zelf::cross_section(to_kind(cs)).half_width;
}
double zelf_cs_half_height(zelf_cross_section cs) {
    return zelf::cross_section(to_kind(cs)).half_height;
}
double zelf_cs_drag_constant(zelf_cross_section cs) {
    return zelf::cross_section(to_kind(cs)).drag_constant;
}
double zelf_cs_min_bend_radius(zelf_cross_section cs) {
    return zelf::cross_section(to_kind(cs)).min_bend_radius;
}

/* ---- force fields ------------------------------------------------------ */

zelf_status zelf_lift(zelf_cross_section cs, double r, double z, double out_field[2]) {
    if (out_field == nullptr) return invalid("null output");
    return wrap([&] {
        fill_field(zelf::lift(zelf::cross_section(to_kind(cs)), r, z), out_field);
        return ZELF_OK;
    });
}

zelf_status zelf_drag(zelf_cross_section cs, double r, double z, double out_field[2]) {
    if (out_field == nullptr) return invalid("null output");
    return wrap([&] {
        fill_field(zelf::drag(zelf::cross_section(to_kind(cs)), r, z), out_field);
        return ZELF_OK;
    });
}

zelf_status zelf_lift_jacobian(zelf_cross_section cs, double r, double z, double out_jac[4]) {
    if (out_jac == nullptr) return invalid("null output");
    return wrap([&] {
        fill_jac(zelf::lift_jacobian(zelf::cross_section(to_kind(cs)), r, z), out_jac);
        return ZELF_OK;
    });
}

zelf_status zelf_drag_jacobian(zelf_cross_section cs, double r, double z, double out_jac[4]) {
    if (out_jac == nullptr) return invalid("null output");
    return wrap([&] {
        fill_jac(zelf::drag_jacobian(zelf::cross_section(to_kind(cs)), r, z), out_jac);
        return ZELF_OK;
    });
}

zelf_status zelf_drag_invariant(zelf_cross_section cs, double r, double z, double* out) {
    if (out == nullptr) return invalid("null output");
    return wrap([&] {
        *out = zelf::drag_invariant(zelf::cross_section(to_kind(cs)), r, z);
        return ZELF_OK;
    });
}

zelf_status zelf_drag_center_eigenvalues(zelf_cross_section cs, double r_tilde, double* out_im) {
    if (out_im == nullptr) return invalid("null output");
    return wrap([&] {
        *out_im = zelf::drag_center_eigenvalues(zelf::cross_section(to_kind(cs)), r_tilde)
                      .first.imag();
        return ZELF_OK;
    });
}

zelf_status zelf_local_ellipse(zelf_cross_section cs, double* out_z_coefficient,
                               double* out_eccentricity) {
    if (out_z_coefficient == nullptr || out_eccentricity == nullptr)
        return invalid("null output");
    const zelf::LocalEllipse e = zelf::local_ellipse(zelf::cross_section(to_kind(cs)));
    *out_z_coefficient = e.z_coefficient;
    *out_eccentricity = e.eccentricity;
    return ZELF_OK;
}

/* ---- model -------------------------------------------------------------- */

zelf_status zelf_model_create(zelf_cross_section cs, double a_tilde, double r_tilde,
                              unsigned flags, zelf_model** out) {
    if (out == nullptr) return invalid("null output handle");
    *out = nullptr;
    return wrap([&] {
        const bool allow_small = flags & ZELF_MODEL_ALLOW_SMALL_BEND;
        zelf::ModelParams mp =
            (flags & ZELF_MODEL_DRAG_ONLY)
                ? zelf::make_drag_only_model(to_kind(cs), r_tilde, allow_small)
                : zelf::make_model(to_kind(cs), a_tilde, r_tilde, allow_small);
        *out = new zelf_model{mp};
        return ZELF_OK;
    });
}

zelf_status zelf_model_from_physical(double particle_radius, double bend_radius, double width,
                                     double height, double density, double viscosity,
                                     double max_axial_speed, zelf_model** out,
                                     double* out_length_scale, double* out_time_scale) {
    if (out == nullptr) return invalid("null output handle");
    *out = nullptr;
    return wrap([&] {
        const zelf::Nondimensionalized n = zelf::nondimensionalize(
            {particle_radius, bend_radius, width, height, density, viscosity, max_axial_speed});
        *out = new zelf_model{n.model};
        if (out_length_scale != nullptr) *out_length_scale = n.length_scale;
        if (out_time_scale != nullptr) *out_time_scale = n.time_scale;
        return ZELF_OK;
    });
}

void zelf_model_free(zelf_model* model) { delete model; }

zelf_cross_section zelf_model_cross_section(const zelf_model* model) {
    return model->mp.cs.kind == zelf::CrossSectionKind::Rect2x1 ? ZELF_CS_RECT_2X1
                                                                : ZELF_CS_RECT_1X2;
}
double zelf_model_a_tilde(const zelf_model* model) { return model->mp.a_tilde; }
double zelf_model_r_tilde(const zelf_model* model) { return model->mp.r_tilde; }
int zelf_model_lift_only(const zelf_model* model) {
    return model->mp.mode == zelf::ForceMode::LiftOnly;
}
int zelf_model_drag_only(const zelf_model* model) {
    return model->mp.mode == zelf::ForceMode::DragOnly;
}
int zelf_model_validity_warning(const zelf_model* model) {
    return model->mp.validity_warning();
}

zelf_status zelf_model_rhs(const zelf_model* model, double r, double z, double out_field[2]) {
    if (model == nullptr || out_field == nullptr) return invalid("null argument");
    return wrap([&] {
        const zelf::Vec2 f = zelf::rhs(model->mp, r, z);
        out_field[0] = f.r;
        out_field[1] = f.z;
        return ZELF_OK;
    });
}

zelf_status zelf_model_rhs_jacobian(const zelf_model* model, double r, double z,
                                    double out_jac[4]) {
    if (model == nullptr || out_jac == nullptr) return invalid("null argument");
    return wrap([&] {
        fill_mat(zelf::rhs_jacobian(model->mp, r, z), out_jac);
        return ZELF_OK;
    });
}

/* ---- trajectory integration --------------------------------------------- */

void zelf_integrate_options_init(zelf_integrate_options* opts) {
    if (opts == nullptr) return;
    const zelf::IntegrateOptions d;
    opts->rel_tol = d.rel_tol;
    opts->abs_tol = d.abs_tol;
    opts->t_end = d.t_end;
    opts->max_step = d.max_step;
    opts->initial_step = d.initial_step;
    opts->detect_closed_orbit = d.detect_closed_orbit;
    opts->closed_orbit_tol = d.closed_orbit_tol;
}

zelf_status zelf_integrate(const zelf_model* model, double r0, double z0,
                           const zelf_integrate_options* opts_or_null, zelf_trajectory** out) {
    if (model == nullptr || out == nullptr) return invalid("null argument");
    *out = nullptr;
    return wrap([&] {
        zelf::IntegrateOptions io;
        if (opts_or_null != nullptr) {
            io.rel_tol = opts_or_null->rel_tol;
            io.abs_tol = opts_or_null->abs_tol;
            io.t_end = opts_or_null->t_end;
            io.max_step = opts_or_null->max_step;
            io.initial_step = opts_or_null->initial_step;
            io.detect_closed_orbit = opts_or_null->detect_closed_orbit != 0;
            io.closed_orbit_tol = opts_or_null->closed_orbit_tol;
        }
        *out = new zelf_trajectory{zelf::integrate(model->mp, {r0, z0}, io)};
        return ZELF_OK;
    });
}

size_t zelf_trajectory_size(const zelf_trajectory* traj) { return traj->traj.samples.size(); }

zelf_status zelf_trajectory_sample(const zelf_trajectory* traj, size_t index, double* out_t,
                                   double* out_r, double* out_z) {
    if (traj == nullptr) return invalid("null trajectory");
    if (index >= traj->traj.samples.size()) {
        set_error("sample index out of range");
        return ZELF_ERR_INDEX;
    }
    const zelf::TrajectorySample& s = traj->traj.samples[index];
    if (out_t != nullptr) *out_t = s.t;
    if (out_r != nullptr) *out_r = s.r;
    if (out_z != nullptr) *out_z = s.z;
    return ZELF_OK;
}

zelf_terminal_reason zelf_trajectory_terminal_reason(const zelf_trajectory* traj) {
    switch (traj->traj.terminal) {
        case zelf::TerminalReason::TimeExhausted: return ZELF_TERM_TIME_EXHAUSTED;
        case zelf::TerminalReason::ConvergedToPoint: return ZELF_TERM_CONVERGED_TO_POINT;
        case zelf::TerminalReason::HitBoundary: return ZELF_TERM_HIT_BOUNDARY;
        case zelf::TerminalReason::ClosedOrbitDetected: return ZELF_TERM_CLOSED_ORBIT_DETECTED;
    }
    return ZELF_TERM_TIME_EXHAUSTED;
}

double zelf_trajectory_period(const zelf_trajectory* traj) { return traj->traj.period; }

void zelf_trajectory_free(zelf_trajectory* traj) { delete traj; }

/* ---- equilibria ----------------------------------------------------------- */

zelf_status zelf_find_equilibria(const zelf_model* model, int grid_r, int grid_z,
                                 zelf_equilibria** out) {
    if (model == nullptr || out == nullptr) return invalid("null argument");
    *out = nullptr;
    return wrap([&] {
        zelf::FindOptions opts;
        opts.grid_r = grid_r;
        opts.grid_z = grid_z;
        *out = new zelf_equilibria{zelf::find_equilibria(model->mp, opts)};
        return ZELF_OK;
    });
}

size_t zelf_equilibria_count(const zelf_equilibria* set) { return set->set.points.size(); }

int zelf_equilibria_wall_continuum(const zelf_equilibria* set) { return set->set.wall_continuum; }

namespace {
zelf_status eq_at(const zelf_equilibria* set, size_t index, const zelf::Equilibrium** out) {
    if (set == nullptr) return invalid("null equilibria set");
    if (index >= set->set.points.size()) {
        set_error("equilibrium index out of range");
        return ZELF_ERR_INDEX;
    }
    *out = &set->set.points[index];
    return ZELF_OK;
}
} // namespace

zelf_status zelf_equilibria_location(const zelf_equilibria* set, size_t index, double* out_r,
                                     double* out_z) {
    const zelf::Equilibrium* eq = nullptr;
    if (zelf_status st = eq_at(set, index, &eq); st != ZELF_OK) return st;
    if (out_r != nullptr) *out_r = eq->location.r;
    if (out_z != nullptr) *out_z = eq->location.z;
    return ZELF_OK;
}

zelf_status zelf_equilibria_eigenvalues(const zelf_equilibria* set, size_t index, double* out_re1,
                                        double* out_im1, double* out_re2, double* out_im2) {
    const zelf::Equilibrium* eq = nullptr;
    if (zelf_status st = eq_at(set, index, &eq); st != ZELF_OK) return st;
    if (out_re1 != nullptr) *out_re1 = eq->lambda1.real();
    if (out_im1 != nullptr) *out_im1 = eq->lambda1.imag();
    if (out_re2 != nullptr) *out_re2 = eq->lambda2.real();
    if (out_im2 != nullptr) *out_im2 = eq->lambda2.imag();
    return ZELF_OK;
}

zelf_status zelf_equilibria_eigenvectors(const zelf_equilibria* set, size_t index,
                                         double out_v1[2], double out_v2[2]) {
    const zelf::Equilibrium* eq = nullptr;
    if (zelf_status st = eq_at(set, index, &eq); st != ZELF_OK) return st;
    if (!eq->real_eigenpair) {
        set_error("eigenvectors are reported for real eigenvalue pairs only");
        return ZELF_ERR_NOT_AVAILABLE;
    }
    if (out_v1 != nullptr) {
        out_v1[0] = eq->v1.r;
        out_v1[1] = eq->v1.z;
    }
    if (out_v2 != nullptr) {
        out_v2[0] = eq->v2.r;
        out_v2[1] = eq->v2.z;
    }
    return ZELF_OK;
}

zelf_status zelf_equilibria_jacobian(const zelf_equilibria* set, size_t index, double out_jac[4]) {
    const zelf::Equilibrium* eq = nullptr;
    if (zelf_status st = eq_at(set, index, &eq); st != ZELF_OK) return st;
    if (out_jac != nullptr) fill_mat(eq->jac, out_jac);
    return ZELF_OK;
}

zelf_status zelf_equilibria_kind(const zelf_equilibria* set, size_t index, zelf_eq_kind* out) {
    const zelf::Equilibrium* eq = nullptr;
    if (zelf_status st = eq_at(set, index, &eq); st != ZELF_OK) return st;
    if (out != nullptr) *out = from_kind(eq->kind);
    return ZELF_OK;
}

zelf_status zelf_equilibria_residual(const zelf_equilibria* set, size_t index, double* out) {
    const zelf::Equilibrium* eq = nullptr;
    if (zelf_status st = eq_at(set, index, &eq); st != ZELF_OK) return st;
    if (out != nullptr) *out = eq->residual;
    return ZELF_OK;
}

void zelf_equilibria_free(zelf_equilibria* set) { delete set; }

/* ---- analytic limit reports ------------------------------------------------ */

zelf_status zelf_lift_limit_report_json(zelf_cross_section cs, int indent, char** out_json,
                                        int* out_passed) {
    if (out_json == nullptr) return invalid("null output");
    *out_json = nullptr;
    return wrap([&] {
        const zelf::LimitReport rep = zelf::lift_limit_report(to_kind(cs));
        *out_json = dup_string(zelf::to_json(rep, indent));
        if (out_passed != nullptr) *out_passed = rep.passed;
        return ZELF_OK;
    });
}

zelf_status zelf_drag_limit_report_json(zelf_cross_section cs, double r_tilde, int indent,
                                        char** out_json, int* out_passed) {
    if (out_json == nullptr) return invalid("null output");
    *out_json = nullptr;
    return wrap([&] {
        const zelf::LimitReport rep = zelf::drag_limit_report(to_kind(cs), r_tilde);
        *out_json = dup_string(zelf::to_json(rep, indent));
        if (out_passed != nullptr) *out_passed = rep.passed;
        return ZELF_OK;
    });
}

void zelf_string_free(char* str) { delete[] str; }

/* ---- bend-radius continuation ----------------------------------------------- */

void zelf_sweep_options_init(zelf_sweep_options* opts) {
    if (opts == nullptr) return;
    const zelf::SweepOptions d;
    opts->grid_r = d.grid_r;
    opts->grid_z = d.grid_z;
    opts->reseed_interval = d.reseed_interval;
    opts->matching_radius = d.matching_radius;
    opts->refine_width_rel = d.refine_width_rel;
}

zelf_status zelf_log_schedule(double hi, double lo, size_t n, double* out) {
    if (out == nullptr) return invalid("null output");
    if (n > 100'000'000) return invalid("schedule length is unreasonably large");
    return wrap([&] {
        const auto s = zelf::log_schedule(hi, lo, int(n));
        for (size_t i = 0; i < s.size(); ++i) out[i] = s[i];
        return ZELF_OK;
    });
}

zelf_status zelf_sweep_run(zelf_cross_section cs, double a_tilde, const double* schedule,
                           size_t schedule_len, const zelf_sweep_options* opts_or_null,
                           zelf_sweep** out) {
    if (schedule == nullptr || out == nullptr) return invalid("null argument");
    *out = nullptr;
    return wrap([&] {
        zelf::SweepOptions so;
        if (opts_or_null != nullptr) {
            so.grid_r = opts_or_null->grid_r;
            so.grid_z = opts_or_null->grid_z;
            so.reseed_interval = opts_or_null->reseed_interval;
            so.matching_radius = opts_or_null->matching_radius;
            so.refine_width_rel = opts_or_null->refine_width_rel;
        }
        const std::vector<double> sched(schedule, schedule + schedule_len);
        *out = new zelf_sweep{zelf::sweep(to_kind(cs), a_tilde, sched, so)};
        return ZELF_OK;
    });
}

size_t zelf_sweep_branch_count(const zelf_sweep* sweep) { return sweep->result.branches.size(); }

size_t zelf_sweep_branch_size(const zelf_sweep* sweep, size_t branch) {
    if (branch >= sweep->result.branches.size()) return 0;
    return sweep->result.branches[branch].samples.size();
}

zelf_status zelf_sweep_branch_sample(const zelf_sweep* sweep, size_t branch, size_t index,
                                     double* out_r_tilde, double* out_r, double* out_z,
                                     double* out_re1, double* out_im1, double* out_re2,
                                     double* out_im2, zelf_eq_kind* out_kind) {
    if (sweep == nullptr) return invalid("null sweep");
    if (branch >= sweep->result.branches.size() ||
        index >= sweep->result.branches[branch].samples.size()) {
        set_error("branch sample index out of range");
        return ZELF_ERR_INDEX;
    }
    const zelf::BranchSample& s = sweep->result.branches[branch].samples[index];
    if (out_r_tilde != nullptr) *out_r_tilde = s.r_tilde;
    if (out_r != nullptr) *out_r = s.eq.location.r;
    if (out_z != nullptr) *out_z = s.eq.location.z;
    if (out_re1 != nullptr) *out_re1 = s.eq.lambda1.real();
    if (out_im1 != nullptr) *out_im1 = s.eq.lambda1.imag();
    if (out_re2 != nullptr) *out_re2 = s.eq.lambda2.real();
    if (out_im2 != nullptr) *out_im2 = s.eq.lambda2.imag();
    if (out_kind != nullptr) *out_kind = from_kind(s.eq.kind);
    return ZELF_OK;
}

zelf_status zelf_sweep_branch_events(const zelf_sweep* sweep, size_t branch,
                                     int* out_birth_event, int* out_death_event) {
    if (sweep == nullptr) return invalid("null sweep");
    if (branch >= sweep->result.branches.size()) {
        set_error("branch index out of range");
        return ZELF_ERR_INDEX;
    }
    if (out_birth_event != nullptr) *out_birth_event = sweep->result.branches[branch].birth_event;
    if (out_death_event != nullptr) *out_death_event = sweep->result.branches[branch].death_event;
    return ZELF_OK;
}

size_t zelf_sweep_event_count(const zelf_sweep* sweep) { return sweep->result.events.size(); }

zelf_status zelf_sweep_event(const zelf_sweep* sweep, size_t index, zelf_event_kind* out_kind,
                             double* out_r_lo, double* out_r_hi, zelf_pitchfork_label* out_label,
                             double* out_hint_r, double* out_hint_z, int* out_ambiguous) {
    if (sweep == nullptr) return invalid("null sweep");
    if (index >= sweep->result.events.size()) {
        set_error("event index out of range");
        return ZELF_ERR_INDEX;
    }
    const zelf::BifurcationEvent& ev = sweep->result.events[index];
    if (out_kind != nullptr) {
        switch (ev.kind) {
            case zelf::EventKind::SaddleNode: *out_kind = ZELF_EVENT_SADDLE_NODE; break;
            case zelf::EventKind::Pitchfork: *out_kind = ZELF_EVENT_PITCHFORK; break;
            case zelf::EventKind::Hopf: *out_kind = ZELF_EVENT_HOPF; break;
        }
    }
    if (out_r_lo != nullptr) *out_r_lo = ev.r_lo;
    if (out_r_hi != nullptr) *out_r_hi = ev.r_hi;
    if (out_label != nullptr) {
        switch (ev.label) {
            case zelf::PitchforkLabel::None: *out_label = ZELF_PITCHFORK_NONE; break;
            case zelf::PitchforkLabel::Supercritical:
                *out_label = ZELF_PITCHFORK_SUPERCRITICAL;
                break;
            case zelf::PitchforkLabel::Subcritical:
                *out_label = ZELF_PITCHFORK_SUBCRITICAL;
                break;
        }
    }
    if (out_hint_r != nullptr) *out_hint_r = ev.location_hint.r;
    if (out_hint_z != nullptr) *out_hint_z = ev.location_hint.z;
    if (out_ambiguous != nullptr) *out_ambiguous = ev.ambiguous;
    return ZELF_OK;
}

zelf_status zelf_sweep_event_branches(const zelf_sweep* sweep, size_t index, const int** out_ids,
                                      size_t* out_count) {
    if (sweep == nullptr || out_ids == nullptr || out_count == nullptr)
        return invalid("null argument");
    if (index >= sweep->result.events.size()) {
        set_error("event index out of range");
        return ZELF_ERR_INDEX;
    }
    const auto& ids = sweep->result.events[index].branches;
    *out_ids = ids.data();
    *out_count = ids.size();
    return ZELF_OK;
}

zelf_status zelf_sweep_refine_event(const zelf_sweep* sweep, size_t index, double tol_r_tilde,
                                    double* out_r_lo, double* out_r_hi, int* out_warning) {
    if (sweep == nullptr) return invalid("null sweep");
    if (index >= sweep->result.events.size()) {
        set_error("event index out of range");
        return ZELF_ERR_INDEX;
    }
    return wrap([&] {
        const zelf::BifurcationEvent refined = zelf::refine_event(
            sweep->result.cs, sweep->result.a_tilde, sweep->result.events[index], tol_r_tilde);
        if (out_r_lo != nullptr) *out_r_lo = refined.r_lo;
        if (out_r_hi != nullptr) *out_r_hi = refined.r_hi;
        if (out_warning != nullptr) *out_warning = !refined.note.empty();
        if (!refined.note.empty()) set_error(refined.note);
        return ZELF_OK;
    });
}

size_t zelf_sweep_transition_count(const zelf_sweep* sweep) {
    return sweep->result.transitions.size();
}

zelf_status zelf_sweep_transition(const zelf_sweep* sweep, size_t index, int* out_branch,
                                  double* out_r_hi, double* out_r_lo, zelf_eq_kind* out_from,
                                  zelf_eq_kind* out_to) {
    if (sweep == nullptr) return invalid("null sweep");
    if (index >= sweep->result.transitions.size()) {
        set_error("transition index out of range");
        return ZELF_ERR_INDEX;
    }
    const zelf::KindTransition& tr = sweep->result.transitions[index];
    if (out_branch != nullptr) *out_branch = tr.branch;
    if (out_r_hi != nullptr) *out_r_hi = tr.r_hi;
    if (out_r_lo != nullptr) *out_r_lo = tr.r_lo;
    if (out_from != nullptr) *out_from = from_kind(tr.from);
    if (out_to != nullptr) *out_to = from_kind(tr.to);
    return ZELF_OK;
}

zelf_status zelf_sweep_final_equilibria(const zelf_sweep* sweep, zelf_equilibria** out) {
    if (sweep == nullptr || out == nullptr) return invalid("null argument");
    *out = nullptr;
    return wrap([&] {
        zelf::EquilibriumSet set;
        set.points = sweep->result.final_equilibria();
        set.wall_continuum = false;
        *out = new zelf_equilibria{std::move(set)};
        return ZELF_OK;
    });
}

void zelf_sweep_free(zelf_sweep* sweep) { delete sweep; }

/* ---- limit cycles ------------------------------------------------------------ */

zelf_status zelf_find_limit_cycle(const zelf_model* model, double spiral_r, double spiral_z,
                                  zelf_limit_cycle** out) {
    if (model == nullptr || out == nullptr) return invalid("null argument");
    *out = nullptr;
    return wrap([&]() -> zelf_status {
        const auto eq = zelf::solve_from_seed(model->mp, {spiral_r, spiral_z});
        if (!eq) {
            set_error("no equilibrium near the given point");
            return ZELF_ERR_NOT_FOUND;
        }
        std::string diag;
        auto cycle = zelf::find_limit_cycle(model->mp, *eq, {}, &diag);
        if (!cycle) {
            set_error(diag);
            return ZELF_ERR_NOT_FOUND;
        }
        *out = new zelf_limit_cycle{std::move(*cycle)};
        return ZELF_OK;
    });
}

double zelf_limit_cycle_period(const zelf_limit_cycle* cycle) { return cycle->cycle.period; }

double zelf_limit_cycle_residual(const zelf_limit_cycle* cycle) {
    return cycle->cycle.return_residual;
}

zelf_status zelf_limit_cycle_center(const zelf_limit_cycle* cycle, double* out_r, double* out_z) {
    if (cycle == nullptr) return invalid("null cycle");
    if (out_r != nullptr) *out_r = cycle->cycle.enclosed_equilibrium.r;
    if (out_z != nullptr) *out_z = cycle->cycle.enclosed_equilibrium.z;
    return ZELF_OK;
}

size_t zelf_limit_cycle_size(const zelf_limit_cycle* cycle) { return cycle->cycle.orbit.size(); }

zelf_status zelf_limit_cycle_sample(const zelf_limit_cycle* cycle, size_t index, double* out_t,
                                    double* out_r, double* out_z) {
    if (cycle == nullptr) return invalid("null cycle");
    if (index >= cycle->cycle.orbit.size()) {
        set_error("orbit sample index out of range");
        return ZELF_ERR_INDEX;
    }
    const zelf::TrajectorySample& s = cycle->cycle.orbit[index];
    if (out_t != nullptr) *out_t = s.t;
    if (out_r != nullptr) *out_r = s.r;
    if (out_z != nullptr) *out_z = s.z;
    return ZELF_OK;
}

void zelf_limit_cycle_free(zelf_limit_cycle* cycle) { delete cycle; }

} /* extern "C" */
