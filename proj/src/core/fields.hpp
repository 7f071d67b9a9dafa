#ifndef ZELF_CORE_FIELDS_HPP
#define ZELF_CORE_FIELDS_HPP

#include "core/cross_section.hpp"
#include "core/linalg.hpp"

namespace zelf {

// A force (or velocity) sample in the cross-sectional plane.
struct FieldVector {
    double fr = 0.0;
    double fz = 0.0;
};

// Exact partial derivatives of a field at a point.
struct FieldJacobian {
    double d_fr_dr = 0.0, d_fr_dz = 0.0;
    double d_fz_dr = 0.0, d_fz_dz = 0.0;

    Mat2 as_mat2() const { return {d_fr_dr, d_fr_dz, d_fz_dr, d_fz_dz}; }
};

// Fitted inertial-lift force. Defined on the closed domain rectangle of `cs`;
// throws zelf::domain_error outside it.
FieldVector lift(const CrossSection& cs, double r, double z);

// Fitted secondary-drag force (Stokes drag of the curvature-induced vortices).
FieldVector drag(const CrossSection& cs, double r, double z);

// Analytic partial derivatives of the fits. Contracted strictly inside the
// domain; boundary points throw zelf::domain_error.
FieldJacobian lift_jacobian(const CrossSection& cs, double r, double z);
FieldJacobian drag_jacobian(const CrossSection& cs, double r, double z);

// Unchecked evaluations used by the solvers, which may probe slightly outside
// the rectangle (Newton iterates, finite differences in tests).
FieldVector lift_unchecked(const CrossSection& cs, double r, double z);
FieldVector drag_unchecked(const CrossSection& cs, double r, double z);
FieldJacobian lift_jacobian_unchecked(const CrossSection& cs, double r, double z);
FieldJacobian drag_jacobian_unchecked(const CrossSection& cs, double r, double z);

} // namespace zelf

#endif
