#include "core/fields.hpp"

#include "core/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

// The lift fits are polynomial brackets times the exponential of a polynomial,
// evaluated exactly as fitted for a small particle in the 2x1 duct; the 1x2
// lift is the 90-degree rotation of the 2x1 field. Drag is fitted per
// cross-section. Even powers are computed from r*r and z*z so that the field
// parities (L_r odd in r / even in z, L_z even in r / odd in z, D_r even/even,
// D_z odd/odd) hold bit-exactly.

namespace zelf {

namespace {

constexpr double k_six_pi = 6.0 * std::numbers::pi;

void require_in_domain(const CrossSection& cs, double r, double z) {
    if (!cs.contains(r, z))
        throw domain_error("point (" + std::to_string(r) + ", " + std::to_string(z) +
                           ") is outside the " + to_string(cs.kind) + " cross-section");
    if (!std::isfinite(r) || !std::isfinite(z))
        throw domain_error("non-finite sample point");
}

void require_strictly_inside(const CrossSection& cs, double r, double z) {
    require_in_domain(cs, r, z);
    if (!cs.strictly_inside(r, z))
        throw domain_error("derivatives are defined strictly inside the domain; (" +
                           std::to_string(r) + ", " + std::to_string(z) + ") is on the boundary");
}

// ---- 2x1 lift fit ----------------------------------------------------------

struct LiftTerms {
    double B, E, dB_dr, dB_dz, dE_dr, dE_dz;   // L_r = r * B * exp(E)
    double G, F, dG_dr, dG_dz, dF_dr, dF_dz;   // L_z = z * G * exp(F)
};

LiftTerms lift_terms_2x1(double r, double z) {
    const double r2 = r * r, r4 = r2 * r2, r6 = r4 * r2, r8 = r4 * r4;
    const double z2 = z * z, z4 = z2 * z2, z6 = z4 * z2;

    LiftTerms t;
    t.B = 1.0 - 0.0643 * r6 - 25.5128 * z6 - 31.1 * (1.0 - 0.4006 * r2) * z4;
    t.E = 0.505 + 0.427 * r2 - 5.081 * z2 - 0.2 * r4 + 1.518 * r2 * z2 + 0.594 * z4 +
          0.042 * r6 + 0.007 * r4 * z2 - 2.283 * r2 * z4 + 2.8 * z6;
    t.dB_dr = r * (-0.3858 * r4 + 24.91732 * z4);
    t.dB_dz = z * (-153.0768 * z4 - 124.4 * (1.0 - 0.4006 * r2) * z2);
    t.dE_dr = r * (0.854 - 0.8 * r2 + 3.036 * z2 + 0.252 * r4 + 0.028 * r2 * z2 - 4.566 * z4);
    t.dE_dz = z * (-10.162 + 3.036 * r2 + 2.376 * z2 + 0.014 * r4 - 9.132 * r2 * z2 + 16.8 * z4);

    t.G = 1.0 - 9.0878 * z6 - 0.0316 * r8 - 1.6 * (1.0 - 0.1778 * r4) * z2;
    t.F = 3.030 - 1.168 * z2 - 0.536 * r2 - 2.199 * z4 + 0.476 * z2 * r2 + 0.104 * r4 +
          2.094 * z6 + 0.051 * z4 * r2 - 0.212 * z2 * r4 - 0.033 * r6;
    t.dG_dr = r * (-0.2528 * r6 + 1.13792 * r2 * z2);
    t.dG_dz = z * (-54.5268 * z4 - 3.2 * (1.0 - 0.1778 * r4));
    t.dF_dr = r * (-1.072 + 0.952 * z2 + 0.416 * r2 + 0.102 * z4 - 0.848 * r2 * z2 - 0.198 * r4);
    t.dF_dz = z * (-2.336 - 8.796 * z2 + 0.952 * r2 + 12.564 * z4 + 0.204 * r2 * z2 - 0.424 * r4);
    return t;
}

FieldVector lift_2x1(double r, double z) {
    const LiftTerms t = lift_terms_2x1(r, z);
    return {r * t.B * std::exp(t.E), z * t.G * std::exp(t.F)};
}

FieldJacobian lift_jacobian_2x1(double r, double z) {
    const LiftTerms t = lift_terms_2x1(r, z);
    const double eE = std::exp(t.E);
    const double eF = std::exp(t.F);
    FieldJacobian j;
    j.d_fr_dr = (t.B + r * t.dB_dr + r * t.B * t.dE_dr) * eE;
    j.d_fr_dz = r * (t.dB_dz + t.B * t.dE_dz) * eE;
    j.d_fz_dr = z * (t.dG_dr + t.G * t.dF_dr) * eF;
    j.d_fz_dz = (t.G + z * t.dG_dz + z * t.G * t.dF_dz) * eF;
    return j;
}

// ---- drag fits -------------------------------------------------------------

FieldVector drag_2x1(double C, double r, double z) {
    const double u = 1.0 - 0.25 * r * r;
    const double v = 1.0 - z * z;
    const double w = 1.0 - 5.0 * z * z;
    return {k_six_pi * C * u * u * v * w, k_six_pi * C * r * z * u * v * v};
}

FieldJacobian drag_jacobian_2x1(double C, double r, double z) {
    const double u = 1.0 - 0.25 * r * r;
    const double v = 1.0 - z * z;
    const double w = 1.0 - 5.0 * z * z;
    FieldJacobian j;
    j.d_fr_dr = -k_six_pi * C * r * u * v * w;
    j.d_fr_dz = k_six_pi * C * u * u * z * (20.0 * z * z - 12.0);
    j.d_fz_dr = k_six_pi * C * z * (1.0 - 0.75 * r * r) * v * v;
    j.d_fz_dz = k_six_pi * C * r * u * v * w;
    return j;
}

FieldVector drag_1x2(double C, double r, double z) {
    const double p = 1.0 - r * r;
    const double q = 1.0 - 0.25 * z * z;
    const double s = 1.0 - 1.25 * z * z;
    return {k_six_pi * C * p * p * q * s, 4.0 * k_six_pi * C * r * z * p * q * q};
}

FieldJacobian drag_jacobian_1x2(double C, double r, double z) {
    const double p = 1.0 - r * r;
    const double q = 1.0 - 0.25 * z * z;
    const double s = 1.0 - 1.25 * z * z;
    const double k24 = 4.0 * k_six_pi * C;
    FieldJacobian j;
    j.d_fr_dr = -k24 * r * p * q * s;
    j.d_fr_dz = k_six_pi * C * p * p * z * (1.25 * z * z - 3.0);
    j.d_fz_dr = k24 * z * (1.0 - 3.0 * r * r) * q * q;
    j.d_fz_dz = k24 * r * p * q * s;
    return j;
}

} // namespace

FieldVector lift_unchecked(const CrossSection& cs, double r, double z) {
    if (cs.kind == CrossSectionKind::Rect2x1) return lift_2x1(r, z);
    // 90-degree rotation of the 2x1 field: swap coordinates and components.
    const FieldVector f = lift_2x1(z, r);
    return {f.fz, f.fr};
}

FieldVector drag_unchecked(const CrossSection& cs, double r, double z) {
    return cs.kind == CrossSectionKind::Rect2x1 ? drag_2x1(cs.drag_constant, r, z)
                                                : drag_1x2(cs.drag_constant, r, z);
}

FieldJacobian lift_jacobian_unchecked(const CrossSection& cs, double r, double z) {
    if (cs.kind == CrossSectionKind::Rect2x1) return lift_jacobian_2x1(r, z);
    const FieldJacobian j = lift_jacobian_2x1(z, r);
    // Chain rule through the coordinate swap: transpose about the anti-diagonal.
    return {j.d_fz_dz, j.d_fz_dr, j.d_fr_dz, j.d_fr_dr};
}

FieldJacobian drag_jacobian_unchecked(const CrossSection& cs, double r, double z) {
    return cs.kind == CrossSectionKind::Rect2x1 ? drag_jacobian_2x1(cs.drag_constant, r, z)
                                                : drag_jacobian_1x2(cs.drag_constant, r, z);
}

FieldVector lift(const CrossSection& cs, double r, double z) {
    require_in_domain(cs, r, z);
    return lift_unchecked(cs, r, z);
}

FieldVector drag(const CrossSection& cs, double r, double z) {
    require_in_domain(cs, r, z);
    return drag_unchecked(cs, r, z);
}

FieldJacobian lift_jacobian(const CrossSection& cs, double r, double z) {
    require_strictly_inside(cs, r, z);
    return lift_jacobian_unchecked(cs, r, z);
}

FieldJacobian drag_jacobian(const CrossSection& cs, double r, double z) {
    require_strictly_inside(cs, r, z);
    return drag_jacobian_unchecked(cs, r, z);
}

} // namespace zelf
