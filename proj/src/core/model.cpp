#include "core/model.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace zelf {

namespace {

constexpr double k_inv_six_pi = 1.0 / (6.0 * std::numbers::pi);

void check_bend_radius(const CrossSection& cs, double r_tilde, bool allow_small_bend) {
    if (!(r_tilde > 0.0))
        throw std::invalid_argument("bend radius R-tilde must be positive");
    if (!allow_small_bend && r_tilde < cs.min_bend_radius)
        throw std::invalid_argument("R-tilde = " + std::to_string(r_tilde) +
                                    " is below the minimum bend radius " +
                                    std::to_string(cs.min_bend_radius) + " of the " +
                                    to_string(cs.kind) + " cross-section");
}

} // namespace

double ModelParams::lift_weight() const {
    if (mode == ForceMode::DragOnly) return 0.0;
    return a_tilde * a_tilde * a_tilde / 8.0;
}

double ModelParams::drag_weight() const {
    if (mode == ForceMode::LiftOnly) return 0.0;
    return 0.5 / r_tilde;
}

ModelParams make_model(CrossSectionKind kind, double a_tilde, double r_tilde,
                       bool allow_small_bend) {
    ModelParams mp;
    mp.cs = cross_section(kind);
    if (!(a_tilde > 0.0))
        throw std::invalid_argument("particle size a-tilde must be positive");
    if (std::isinf(r_tilde)) {
        mp.mode = ForceMode::LiftOnly;
        mp.a_tilde = a_tilde;
        mp.r_tilde = std::numeric_limits<double>::infinity();
        return mp;
    }
    check_bend_radius(mp.cs, r_tilde, allow_small_bend);
    mp.mode = ForceMode::Full;
    mp.a_tilde = a_tilde;
    mp.r_tilde = r_tilde;
    return mp;
}

ModelParams make_lift_only_model(CrossSectionKind kind, double a_tilde) {
    return make_model(kind, a_tilde, std::numeric_limits<double>::infinity());
}

ModelParams make_drag_only_model(CrossSectionKind kind, double r_tilde, bool allow_small_bend) {
    ModelParams mp;
    mp.cs = cross_section(kind);
    check_bend_radius(mp.cs, r_tilde, allow_small_bend);
    mp.mode = ForceMode::DragOnly;
    mp.a_tilde = 0.0;
    mp.r_tilde = r_tilde;
    return mp;
}

Nondimensionalized nondimensionalize(const PhysicalParams& p) {
    if (!(p.particle_radius > 0.0) || !(p.bend_radius > 0.0) || !(p.width > 0.0) ||
        !(p.height > 0.0) || !(p.density > 0.0) || !(p.viscosity > 0.0) ||
        !(p.max_axial_speed > 0.0))
        throw std::invalid_argument("all physical parameters must be strictly positive");

    const CrossSection cs = cross_section_from_aspect_ratio(p.width, p.height);
    const double l = std::min(p.width, p.height);

    Nondimensionalized out;
    out.model = make_model(cs.kind, 2.0 * p.particle_radius / l, 2.0 * p.bend_radius / l);
    out.length_scale = 0.5 * l;
    out.time_scale = p.viscosity / (2.0 * p.density * p.max_axial_speed * p.max_axial_speed);
    return out;
}

Vec2 rhs_unchecked(const ModelParams& mp, double r, double z) {
    double fr = 0.0, fz = 0.0;
    if (mp.mode != ForceMode::DragOnly) {
        const FieldVector L = lift_unchecked(mp.cs, r, z);
        const double wl = mp.lift_weight();
        fr += wl * L.fr;
        fz += wl * L.fz;
    }
    if (mp.mode != ForceMode::LiftOnly) {
        const FieldVector D = drag_unchecked(mp.cs, r, z);
        const double wd = mp.drag_weight();
        fr += wd * D.fr;
        fz += wd * D.fz;
    }
    return {k_inv_six_pi * fr, k_inv_six_pi * fz};
}

Mat2 rhs_jacobian_unchecked(const ModelParams& mp, double r, double z) {
    Mat2 j{};
    if (mp.mode != ForceMode::DragOnly) {
        const FieldJacobian L = lift_jacobian_unchecked(mp.cs, r, z);
        const double wl = mp.lift_weight();
        j = j + wl * L.as_mat2();
    }
    if (mp.mode != ForceMode::LiftOnly) {
        const FieldJacobian D = drag_jacobian_unchecked(mp.cs, r, z);
        const double wd = mp.drag_weight();
        j = j + wd * D.as_mat2();
    }
    return k_inv_six_pi * j;
}

Vec2 rhs(const ModelParams& mp, double r, double z) {
    if (!mp.cs.contains(r, z))
        throw domain_error("point (" + std::to_string(r) + ", " + std::to_string(z) +
                           ") is outside the " + to_string(mp.cs.kind) + " cross-section");
    return rhs_unchecked(mp, r, z);
}

Mat2 rhs_jacobian(const ModelParams& mp, double r, double z) {
    if (!mp.cs.strictly_inside(r, z))
        throw domain_error("Jacobian requested outside the open domain at (" +
                           std::to_string(r) + ", " + std::to_string(z) + ")");
    return rhs_jacobian_unchecked(mp, r, z);
}

} // namespace zelf
