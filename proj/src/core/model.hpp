#ifndef ZELF_CORE_MODEL_HPP
#define ZELF_CORE_MODEL_HPP

#include "core/cross_section.hpp"
#include "core/fields.hpp"
#include "core/linalg.hpp"

namespace zelf {

// Which force balance is active.
enum class ForceMode {
    Full,       // lift + drag, finite bend radius
    LiftOnly,   // infinite bend radius: drag vanishes
    DragOnly,   // vanishing particle size: lift vanishes
};

// Dimensionless model state: cross-section, particle size a-tilde and bend
// radius R-tilde. Construct through the factory functions below so the
// invariants (a-tilde > 0 where the lift acts, R-tilde >= the cross-section
// minimum unless explicitly overridden) are enforced once.
struct ModelParams {
    CrossSection cs;
    double a_tilde = 0.0;
    double r_tilde = 0.0;   // +infinity in the lift-only limit
    ForceMode mode = ForceMode::Full;

    // The fits are calibrated for small particles; larger sizes evaluate fine
    // but are outside the model's validity range.
    bool validity_warning() const { return mode != ForceMode::DragOnly && a_tilde > 0.05; }

    double lift_weight() const;   // a_tilde^3 / 8, zero in the drag-only limit
    double drag_weight() const;   // 1 / (2 R-tilde), zero in the lift-only limit
};

ModelParams make_model(CrossSectionKind kind, double a_tilde, double r_tilde,
                       bool allow_small_bend = false);
ModelParams make_lift_only_model(CrossSectionKind kind, double a_tilde);
ModelParams make_drag_only_model(CrossSectionKind kind, double r_tilde,
                                 bool allow_small_bend = false);

// Dimensional description of the duct and fluid. Units only have to be
// mutually consistent.
struct PhysicalParams {
    double particle_radius;   // a
    double bend_radius;       // R
    double width;             // W
    double height;            // H
    double density;           // rho
    double viscosity;         // mu
    double max_axial_speed;   // U_m
};

// Result of nondimensionalizing a physical configuration: the model plus the
// scales that map dimensionless coordinates and times back to physical ones
// (r = length_scale * r_tilde, t = time_scale * t_tilde).
struct Nondimensionalized {
    ModelParams model;
    double length_scale;   // l / 2
    double time_scale;     // mu / (2 rho U_m^2)
};

Nondimensionalized nondimensionalize(const PhysicalParams& p);

// Right-hand side of the equations of motion,
//   dX/dt = (1/6pi) [ (a^3/8) L(X) + (1/2R) D(X) ],
// with the inactive term dropped in the limit modes.
Vec2 rhs(const ModelParams& mp, double r, double z);
Mat2 rhs_jacobian(const ModelParams& mp, double r, double z);

// Unchecked variants for solver internals that probe outside the rectangle.
Vec2 rhs_unchecked(const ModelParams& mp, double r, double z);
Mat2 rhs_jacobian_unchecked(const ModelParams& mp, double r, double z);

} // namespace zelf

#endif
