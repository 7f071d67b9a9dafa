/*
 * zelf: reduced-order model of inertial particle focusing in curved
 * rectangular ducts (2x1 and 1x2 cross-sections).
 *
 * C interface to the solver library: fitted lift/drag field evaluation,
 * particle trajectory integration, equilibrium finding and classification,
 * bend-radius continuation with bifurcation detection, and limit-cycle
 * certification. Handles are opaque; every fallible call returns a
 * zelf_status and leaves a human-readable detail in zelf_last_error()
 * (thread-local).
 */

#ifndef ZELF_H
#define ZELF_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zelf_status {
    ZELF_OK = 0,
    ZELF_ERR_INVALID_ARGUMENT = 1,
    ZELF_ERR_DOMAIN = 2,          /* point outside the cross-section rectangle */
    ZELF_ERR_NUMERICAL = 3,       /* solver breakdown */
    ZELF_ERR_NOT_FOUND = 4,       /* searched object does not exist (see zelf_last_error) */
    ZELF_ERR_NOT_AVAILABLE = 5,   /* field not defined for this object */
    ZELF_ERR_INDEX = 6            /* index out of range */
} zelf_status;

typedef enum zelf_cross_section {
    ZELF_CS_RECT_2X1 = 0,   /* domain |r| <= 2, |z| <= 1 */
    ZELF_CS_RECT_1X2 = 1    /* domain |r| <= 1, |z| <= 2 */
} zelf_cross_section;

typedef enum zelf_eq_kind {
    ZELF_EQ_STABLE_NODE = 0,
    ZELF_EQ_UNSTABLE_NODE = 1,
    ZELF_EQ_SADDLE = 2,
    ZELF_EQ_STABLE_SPIRAL = 3,
    ZELF_EQ_UNSTABLE_SPIRAL = 4,
    ZELF_EQ_CENTER = 5,
    ZELF_EQ_DEGENERATE = 6
} zelf_eq_kind;

typedef enum zelf_terminal_reason {
    ZELF_TERM_TIME_EXHAUSTED = 0,
    ZELF_TERM_CONVERGED_TO_POINT = 1,
    ZELF_TERM_HIT_BOUNDARY = 2,
    ZELF_TERM_CLOSED_ORBIT_DETECTED = 3
} zelf_terminal_reason;

typedef enum zelf_event_kind {
    ZELF_EVENT_SADDLE_NODE = 0,
    ZELF_EVENT_PITCHFORK = 1,
    ZELF_EVENT_HOPF = 2
} zelf_event_kind;

typedef enum zelf_pitchfork_label {
    ZELF_PITCHFORK_NONE = 0,
    ZELF_PITCHFORK_SUPERCRITICAL = 1,
    ZELF_PITCHFORK_SUBCRITICAL = 2
} zelf_pitchfork_label;

const char* zelf_version(void);
const char* zelf_status_name(zelf_status status);
const char* zelf_eq_kind_name(zelf_eq_kind kind);
const char* zelf_terminal_reason_name(zelf_terminal_reason reason);
const char* zelf_event_kind_name(zelf_event_kind kind);
const char* zelf_pitchfork_label_name(zelf_pitchfork_label label);

/* Detail message for the most recent failing call on this thread. */
const char* zelf_last_error(void);

/* ---- cross-section metadata ------------------------------------------- */

double zelf_cs_half_width(zelf_cross_section cs);
double zelf_cs_half_height(zelf_cross_section cs);
double zelf_cs_drag_constant(zelf_cross_section cs);
double zelf_cs_min_bend_radius(zelf_cross_section cs);

/* ---- force fields ------------------------------------------------------ */

/* out_field = {f_r, f_z}; jacobians are row-major
 * {d f_r/dr, d f_r/dz, d f_z/dr, d f_z/dz}. Fields are defined on the closed
 * rectangle, derivatives strictly inside. */
zelf_status zelf_lift(zelf_cross_section cs, double r, double z, double out_field[2]);
zelf_status zelf_drag(zelf_cross_section cs, double r, double z, double out_field[2]);
zelf_status zelf_lift_jacobian(zelf_cross_section cs, double r, double z, double out_jac[4]);
zelf_status zelf_drag_jacobian(zelf_cross_section cs, double r, double z, double out_jac[4]);

/* Conserved quantity of the drag-only flow. */
zelf_status zelf_drag_invariant(zelf_cross_section cs, double r, double z, double* out);

/* Pure-imaginary eigenvalue pair +-(i im) at the drag-only centers. */
zelf_status zelf_drag_center_eigenvalues(zelf_cross_section cs, double r_tilde, double* out_im);

/* Small closed orbits around the drag-only center: r1^2 + coeff z1^2 = c. */
zelf_status zelf_local_ellipse(zelf_cross_section cs, double* out_z_coefficient,
                               double* out_eccentricity);

/* ---- model -------------------------------------------------------------- */

typedef struct zelf_model zelf_model;

#define ZELF_MODEL_ALLOW_SMALL_BEND 1u
#define ZELF_MODEL_DRAG_ONLY 2u

/* r_tilde = INFINITY selects the lift-only limit; the ZELF_MODEL_DRAG_ONLY
 * flag drops the lift term (a_tilde is then ignored). */
zelf_status zelf_model_create(zelf_cross_section cs, double a_tilde, double r_tilde,
                              unsigned flags, zelf_model** out);

/* Nondimensionalizes a physical configuration (consistent units). Optional
 * outputs give the coordinate scale l/2 and the time scale mu/(2 rho Um^2). */
zelf_status zelf_model_from_physical(double particle_radius, double bend_radius, double width,
                                     double height, double density, double viscosity,
                                     double max_axial_speed, zelf_model** out,
                                     double* out_length_scale, double* out_time_scale);

void zelf_model_free(zelf_model* model);

zelf_cross_section zelf_model_cross_section(const zelf_model* model);
double zelf_model_a_tilde(const zelf_model* model);
double zelf_model_r_tilde(const zelf_model* model);
int zelf_model_lift_only(const zelf_model* model);
int zelf_model_drag_only(const zelf_model* model);
/* Nonzero when a_tilde exceeds the fitted validity range (a_tilde > 0.05). */
int zelf_model_validity_warning(const zelf_model* model);

zelf_status zelf_model_rhs(const zelf_model* model, double r, double z, double out_field[2]);
zelf_status zelf_model_rhs_jacobian(const zelf_model* model, double r, double z,
                                    double out_jac[4]);

/* ---- trajectory integration --------------------------------------------- */

typedef struct zelf_trajectory zelf_trajectory;

typedef struct zelf_integrate_options {
    double rel_tol;            /* default 1e-10 */
    double abs_tol;            /* default 1e-12 */
    double t_end;              /* default 1e9 */
    double max_step;           /* 0 = unlimited */
    double initial_step;       /* 0 = automatic */
    int detect_closed_orbit;   /* default 0 */
    double closed_orbit_tol;   /* first-return distance, default 1e-6 */
} zelf_integrate_options;

void zelf_integrate_options_init(zelf_integrate_options* opts);

zelf_status zelf_integrate(const zelf_model* model, double r0, double z0,
                           const zelf_integrate_options* opts_or_null, zelf_trajectory** out);

size_t zelf_trajectory_size(const zelf_trajectory* traj);
zelf_status zelf_trajectory_sample(const zelf_trajectory* traj, size_t index, double* out_t,
                                   double* out_r, double* out_z);
zelf_terminal_reason zelf_trajectory_terminal_reason(const zelf_trajectory* traj);
/* Orbit period when the terminal reason is a detected closed orbit, else 0. */
double zelf_trajectory_period(const zelf_trajectory* traj);
void zelf_trajectory_free(zelf_trajectory* traj);

/* ---- equilibria ----------------------------------------------------------- */

typedef struct zelf_equilibria zelf_equilibria;

/* Damped-Newton multistart on a grid_r x grid_z interior seed grid
 * (0, 0 = cross-section defaults, minimum 8 per axis). */
zelf_status zelf_find_equilibria(const zelf_model* model, int grid_r, int grid_z,
                                 zelf_equilibria** out);

size_t zelf_equilibria_count(const zelf_equilibria* set);
/* Nonzero when the duct walls carry a continuum of rest states (drag-only
 * limit); those are not included in the enumerated points. */
int zelf_equilibria_wall_continuum(const zelf_equilibria* set);
zelf_status zelf_equilibria_location(const zelf_equilibria* set, size_t index, double* out_r,
                                     double* out_z);
zelf_status zelf_equilibria_eigenvalues(const zelf_equilibria* set, size_t index, double* out_re1,
                                        double* out_im1, double* out_re2, double* out_im2);
/* Unit eigenvectors for a real eigenvalue pair; ZELF_ERR_NOT_AVAILABLE for a
 * complex pair. */
zelf_status zelf_equilibria_eigenvectors(const zelf_equilibria* set, size_t index,
                                         double out_v1[2], double out_v2[2]);
zelf_status zelf_equilibria_jacobian(const zelf_equilibria* set, size_t index, double out_jac[4]);
zelf_status zelf_equilibria_kind(const zelf_equilibria* set, size_t index, zelf_eq_kind* out);
zelf_status zelf_equilibria_residual(const zelf_equilibria* set, size_t index, double* out);
void zelf_equilibria_free(zelf_equilibria* set);

/* ---- analytic limit reports ------------------------------------------------ */

/* JSON report comparing the computed lift-only equilibria against the
 * embedded reference table (out_passed optional). Free with zelf_string_free. */
zelf_status zelf_lift_limit_report_json(zelf_cross_section cs, int indent, char** out_json,
                                        int* out_passed);
zelf_status zelf_drag_limit_report_json(zelf_cross_section cs, double r_tilde, int indent,
                                        char** out_json, int* out_passed);
void zelf_string_free(char* str);

/* ---- bend-radius continuation ----------------------------------------------- */

typedef struct zelf_sweep zelf_sweep;

typedef struct zelf_sweep_options {
    int grid_r;               /* 0 = default */
    int grid_z;
    int reseed_interval;      /* full-grid re-seed cadence, default 10 */
    double matching_radius;   /* branch matching, default 0.25 */
    double refine_width_rel;  /* event bracket refinement target, default 1e-7 */
} zelf_sweep_options;

void zelf_sweep_options_init(zelf_sweep_options* opts);

/* Fills out[0..n-1] with a descending logarithmic schedule from hi to lo. */
zelf_status zelf_log_schedule(double hi, double lo, size_t n, double* out);

/* Continuation over a strictly descending schedule of bend radii. */
zelf_status zelf_sweep_run(zelf_cross_section cs, double a_tilde, const double* schedule,
                           size_t schedule_len, const zelf_sweep_options* opts_or_null,
                           zelf_sweep** out);

size_t zelf_sweep_branch_count(const zelf_sweep* sweep);
size_t zelf_sweep_branch_size(const zelf_sweep* sweep, size_t branch);
zelf_status zelf_sweep_branch_sample(const zelf_sweep* sweep, size_t branch, size_t index,
                                     double* out_r_tilde, double* out_r, double* out_z,
                                     double* out_re1, double* out_im1, double* out_re2,
                                     double* out_im2, zelf_eq_kind* out_kind);
/* Event indices are -1 when the branch spans the schedule end. */
zelf_status zelf_sweep_branch_events(const zelf_sweep* sweep, size_t branch,
                                     int* out_birth_event, int* out_death_event);

size_t zelf_sweep_event_count(const zelf_sweep* sweep);
zelf_status zelf_sweep_event(const zelf_sweep* sweep, size_t index, zelf_event_kind* out_kind,
                             double* out_r_lo, double* out_r_hi, zelf_pitchfork_label* out_label,
                             double* out_hint_r, double* out_hint_z, int* out_ambiguous);
/* Borrowed pointer, valid while the sweep handle lives. */
zelf_status zelf_sweep_event_branches(const zelf_sweep* sweep, size_t index, const int** out_ids,
                                      size_t* out_count);
/* Re-refines an event bracket by bisection to width <= tol_r_tilde.
 * out_warning is set nonzero (bracket unchanged) when the test function no
 * longer changes sign across it. */
zelf_status zelf_sweep_refine_event(const zelf_sweep* sweep, size_t index, double tol_r_tilde,
                                    double* out_r_lo, double* out_r_hi, int* out_warning);

size_t zelf_sweep_transition_count(const zelf_sweep* sweep);
zelf_status zelf_sweep_transition(const zelf_sweep* sweep, size_t index, int* out_branch,
                                  double* out_r_hi, double* out_r_lo, zelf_eq_kind* out_from,
                                  zelf_eq_kind* out_to);

/* Equilibria of the surviving branches at the end of the schedule. */
zelf_status zelf_sweep_final_equilibria(const zelf_sweep* sweep, zelf_equilibria** out);
void zelf_sweep_free(zelf_sweep* sweep);

/* ---- limit cycles ------------------------------------------------------------ */

typedef struct zelf_limit_cycle zelf_limit_cycle;

/* Searches for an isolated periodic orbit around the spiral equilibrium near
 * (spiral_r, spiral_z). Returns ZELF_ERR_NOT_FOUND (diagnostic in
 * zelf_last_error) when the orbit escapes, converges, or never settles. */
zelf_status zelf_find_limit_cycle(const zelf_model* model, double spiral_r, double spiral_z,
                                  zelf_limit_cycle** out);

double zelf_limit_cycle_period(const zelf_limit_cycle* cycle);
double zelf_limit_cycle_residual(const zelf_limit_cycle* cycle);
zelf_status zelf_limit_cycle_center(const zelf_limit_cycle* cycle, double* out_r, double* out_z);
size_t zelf_limit_cycle_size(const zelf_limit_cycle* cycle);
zelf_status zelf_limit_cycle_sample(const zelf_limit_cycle* cycle, size_t index, double* out_t,
                                    double* out_r, double* out_z);
void zelf_limit_cycle_free(zelf_limit_cycle* cycle);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ZELF_H */
