#ifndef ZELF_CORE_ANALYTICS_HPP
#define ZELF_CORE_ANALYTICS_HPP

#include "core/equilibria.hpp"
#include "core/model.hpp"

#include <complex>
#include <string>
#include <vector>

namespace zelf {

// Conserved quantity of the drag-only flow: trajectories are its level sets.
//   2x1: H = z (1 - z^2)^2 (r^2 - 4)^2
//   1x2: H = z (z - 2)^2 (z + 2)^2 (1 - r^2)^2
double drag_invariant(const CrossSection& cs, double r, double z);

// Eigenvalues of the linearization at the drag-only centers (0, +-1/sqrt5)
// resp. (0, +-2/sqrt5): a pure-imaginary pair
//   2x1: +- (2 i C / R) (2/5)^{3/2},   1x2: +- (4 i C / R) (2/5)^{3/2}.
std::pair<std::complex<double>, std::complex<double>>
drag_center_eigenvalues(const CrossSection& cs, double r_tilde);

// Small closed orbits around the drag-only center satisfy
// r1^2 + coefficient * z1^2 = const.
struct LocalEllipse {
    double z_coefficient;   // 25/2 for 2x1, 25/32 for 1x2
    double eccentricity;    // sqrt(23)/5 resp. sqrt(14)/8
};
LocalEllipse local_ellipse(const CrossSection& cs);

// Reference eigendata for one large-bend-radius equilibrium, to the printed
// precision of the fit tables. Eigenvalues are coefficients of a-tilde^3.
struct GoldenEquilibrium {
    Vec2 location;
    EqKind kind;
    double eig_coeff[2];
    Vec2 eigvec[2];
};

// Comparison of one computed equilibrium against its golden row.
struct LimitReportEntry {
    GoldenEquilibrium golden;
    Equilibrium computed;
    double location_delta = 0.0;
    double eig_delta[2] = {0.0, 0.0};    // per matched eigenvalue coefficient
    double eigvec_delta[2] = {0.0, 0.0}; // per matched eigenvector, up to sign
    bool matched = false;                // a computed point was found
    bool ok = false;                     // all deltas within tolerance
};

enum class LimitKind { LiftOnly, DragOnly };

struct LimitReport {
    LimitKind limit;
    CrossSectionKind cs;
    bool passed = false;
    // Lift-only: per-equilibrium comparison against the embedded table.
    std::vector<LimitReportEntry> entries;
    double location_tol = 1e-3;
    double eig_tol = 1e-3;
    // Drag-only: analytic center data cross-checked numerically.
    Vec2 centers[2] = {{}, {}};
    double center_delta = 0.0;               // worst |computed - analytic| location
    double eig_formula_coefficient = 0.0;    // k in lambda = +- i k C / R
    double eig_relative_delta = 0.0;         // numeric vs closed form, relative
    std::string invariant_expression;
    LocalEllipse ellipse = {0.0, 0.0};
};

// Computes the lift-only equilibria with the equilibria module and compares
// them against the embedded table values.
LimitReport lift_limit_report(CrossSectionKind kind);

// Centers, conserved quantity, eigenvalue formula (cross-checked against the
// numerical eigensystem at the given bend radius) and local ellipse geometry.
LimitReport drag_limit_report(CrossSectionKind kind, double r_tilde = 100.0);

// Golden table access for tests and the reports.
const std::vector<GoldenEquilibrium>& golden_lift_equilibria(CrossSectionKind kind);

// JSON rendering of a report (stable key order).
std::string to_json(const LimitReport& report, int indent = 2);

} // namespace zelf

#endif
