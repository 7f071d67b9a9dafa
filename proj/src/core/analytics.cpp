#include "core/analytics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zelf {

namespace {

// Eigenvalue coefficients of a-tilde^3 and eigenvectors for the nine
// large-bend-radius equilibria of the 2x1 lift fit. The origin row follows
// from the 1x2 table through the rotation identity.
std::vector<GoldenEquilibrium> make_golden_2x1() {
    std::vector<GoldenEquilibrium> g;
    g.push_back({{0.0, 0.0}, EqKind::UnstableNode, {0.0110, 0.1373}, {{1, 0}, {0, 1}}});
    for (double sz : {1.0, -1.0})
        g.push_back({{0.0, sz * 0.6000}, EqKind::StableNode, {-0.0092, -0.2762}, {{1, 0}, {0, 1}}});
    for (double sr : {1.0, -1.0})
        g.push_back({{sr * 1.5800, 0.0}, EqKind::StableNode, {-0.1059, -0.0094}, {{1, 0}, {0, 1}}});
    for (double sr : {1.0, -1.0})
        for (double sz : {1.0, -1.0}) {
            const double s = sr * sz;
            g.push_back({{sr * 1.5303, sz * 0.4094},
                         EqKind::Saddle,
                         {-0.0770, 0.0283},
                         {{0.7380, s * 0.6748}, {-s * 0.5225, 0.8526}}});
        }
    return g;
}

std::vector<GoldenEquilibrium> swap_golden(const std::vector<GoldenEquilibrium>& src) {
    std::vector<GoldenEquilibrium> g;
    g.reserve(src.size());
    for (const GoldenEquilibrium& e : src) {
        GoldenEquilibrium s = e;
        s.location = {e.location.z, e.location.r};
        s.eigvec[0] = {e.eigvec[0].z, e.eigvec[0].r};
        s.eigvec[1] = {e.eigvec[1].z, e.eigvec[1].r};
        g.push_back(s);
    }
    return g;
}

double eigvec_delta_up_to_sign(const Vec2& a, const Vec2& b) {
    return std::min((a - b).norm(), (a + b).norm());
}

nlohmann::json complex_json(const std::complex<double>& c) {
    return {{"re", c.real()}, {"im", c.imag()}};
}

} // namespace

double drag_invariant(const CrossSection& cs, double r, double z) {
    if (cs.kind == CrossSectionKind::Rect2x1) {
        const double v = 1.0 - z * z;
        const double w = r * r - 4.0;
        return z * v * v * w * w;
    }
    const double v = (z - 2.0) * (z + 2.0);
    const double p = 1.0 - r * r;
    return z * v * v * p * p;
}

std::pair<std::complex<double>, std::complex<double>>
drag_center_eigenvalues(const CrossSection& cs, double r_tilde) {
    if (!(r_tilde > 0.0)) throw std::invalid_argument("R-tilde must be positive");
    const double factor = cs.kind == CrossSectionKind::Rect2x1 ? 2.0 : 4.0;
    const double mag = factor * cs.drag_constant * std::pow(0.4, 1.5) / r_tilde;
    return {std::complex<double>(0.0, mag), std::complex<double>(0.0, -mag)};
}

LocalEllipse local_ellipse(const CrossSection& cs) {
    if (cs.kind == CrossSectionKind::Rect2x1) return {12.5, std::sqrt(23.0) / 5.0};
    return {25.0 / 32.0, std::sqrt(14.0) / 8.0};
}

const std::vector<GoldenEquilibrium>& golden_lift_equilibria(CrossSectionKind kind) {
    static const std::vector<GoldenEquilibrium> g2x1 = make_golden_2x1();
    static const std::vector<GoldenEquilibrium> g1x2 = swap_golden(g2x1);
    return kind == CrossSectionKind::Rect2x1 ? g2x1 : g1x2;
}

LimitReport lift_limit_report(CrossSectionKind kind) {
    LimitReport report;
    report.limit = LimitKind::LiftOnly;
    report.cs = kind;

    const ModelParams mp = make_lift_only_model(kind, 0.05);
    const double a3 = mp.a_tilde * mp.a_tilde * mp.a_tilde;
    const EquilibriumSet found = find_equilibria(mp);

    bool all_ok = found.points.size() == golden_lift_equilibria(kind).size();
    for (const GoldenEquilibrium& gold : golden_lift_equilibria(kind)) {
        LimitReportEntry entry;
        entry.golden = gold;

        const Equilibrium* best = nullptr;
        double best_d = std::numeric_limits<double>::infinity();
        for (const Equilibrium& eq : found.points) {
            const double d = distance(eq.location, gold.location);
            if (d < best_d) {
                best_d = d;
                best = &eq;
            }
        }
        if (best == nullptr || best_d > 0.1) {
            entry.matched = false;
            all_ok = false;
            report.entries.push_back(entry);
            continue;
        }
        entry.matched = true;
        entry.computed = *best;
        entry.location_delta = best_d;

        // Pair computed eigenvalues with the golden coefficients by proximity.
        const double c1 = best->lambda1.real() / a3;
        const double c2 = best->lambda2.real() / a3;
        const bool straight = std::abs(c1 - gold.eig_coeff[0]) + std::abs(c2 - gold.eig_coeff[1]) <=
                              std::abs(c1 - gold.eig_coeff[1]) + std::abs(c2 - gold.eig_coeff[0]);
        const double m1 = straight ? c1 : c2;
        const double m2 = straight ? c2 : c1;
        const Vec2 w1 = straight ? best->v1 : best->v2;
        const Vec2 w2 = straight ? best->v2 : best->v1;
        entry.eig_delta[0] = std::abs(m1 - gold.eig_coeff[0]);
        entry.eig_delta[1] = std::abs(m2 - gold.eig_coeff[1]);
        entry.eigvec_delta[0] = eigvec_delta_up_to_sign(w1, gold.eigvec[0]);
        entry.eigvec_delta[1] = eigvec_delta_up_to_sign(w2, gold.eigvec[1]);

        entry.ok = entry.location_delta < report.location_tol &&
                   entry.eig_delta[0] < report.eig_tol && entry.eig_delta[1] < report.eig_tol &&
                   entry.eigvec_delta[0] < report.eig_tol && entry.eigvec_delta[1] < report.eig_tol &&
                   best->kind == gold.kind;
        all_ok = all_ok && entry.ok;
        report.entries.push_back(entry);
    }
    report.passed = all_ok;
    return report;
}

LimitReport drag_limit_report(CrossSectionKind kind, double r_tilde) {
    LimitReport report;
    report.limit = LimitKind::DragOnly;
    report.cs = kind;

    const CrossSection cs = cross_section(kind);
    const double zc = (kind == CrossSectionKind::Rect2x1 ? 1.0 : 2.0) / std::sqrt(5.0);
    report.centers[0] = {0.0, zc};
    report.centers[1] = {0.0, -zc};
    report.eig_formula_coefficient =
        (kind == CrossSectionKind::Rect2x1 ? 2.0 : 4.0) * std::pow(0.4, 1.5);
    report.invariant_expression = kind == CrossSectionKind::Rect2x1
                                      ? "z*(1-z^2)^2*(r^2-4)^2"
                                      : "z*(z-2)^2*(z+2)^2*(1-r^2)^2";
    report.ellipse = local_ellipse(cs);

    const ModelParams mp = make_drag_only_model(kind, r_tilde);
    const EquilibriumSet found = find_equilibria(mp);
    const auto formula = drag_center_eigenvalues(cs, r_tilde);

    double worst_loc = std::numeric_limits<double>::infinity();
    double worst_eig = std::numeric_limits<double>::infinity();
    if (found.points.size() == 2) {
        worst_loc = 0.0;
        worst_eig = 0.0;
        for (int i = 0; i < 2; ++i) {
            double best = std::numeric_limits<double>::infinity();
            const Equilibrium* match = nullptr;
            for (const Equilibrium& eq : found.points) {
                const double d = distance(eq.location, report.centers[i]);
                if (d < best) {
                    best = d;
                    match = &eq;
                }
            }
            worst_loc = std::max(worst_loc, best);
            const double mag = std::abs(match->lambda1.imag());
            worst_eig = std::max(worst_eig,
                                 std::abs(mag - formula.first.imag()) / formula.first.imag());
        }
    }
    report.center_delta = worst_loc;
    report.eig_relative_delta = worst_eig;
    report.passed = found.points.size() == 2 && worst_loc < 1e-10 && worst_eig < 1e-10;
    return report;
}

std::string to_json(const LimitReport& report, int indent) {
    nlohmann::json j;
    j["limit"] = report.limit == LimitKind::LiftOnly ? "lift_only" : "drag_only";
    j["cross_section"] = to_string(report.cs);
    j["passed"] = report.passed;

    if (report.limit == LimitKind::LiftOnly) {
        j["location_tolerance"] = report.location_tol;
        j["eigen_tolerance"] = report.eig_tol;
        nlohmann::json entries = nlohmann::json::array();
        for (const LimitReportEntry& e : report.entries) {
            nlohmann::json je;
            je["golden"] = {{"r", e.golden.location.r},
                            {"z", e.golden.location.z},
                            {"kind", to_string(e.golden.kind)},
                            {"eig_coefficients", {e.golden.eig_coeff[0], e.golden.eig_coeff[1]}}};
            je["matched"] = e.matched;
            if (e.matched) {
                je["computed"] = {{"r", e.computed.location.r},
                                  {"z", e.computed.location.z},
                                  {"kind", to_string(e.computed.kind)},
                                  {"lambda1", complex_json(e.computed.lambda1)},
                                  {"lambda2", complex_json(e.computed.lambda2)}};
                je["location_delta"] = e.location_delta;
                je["eig_delta"] = {e.eig_delta[0], e.eig_delta[1]};
                je["eigvec_delta"] = {e.eigvec_delta[0], e.eigvec_delta[1]};
            }
            je["ok"] = e.ok;
            entries.push_back(je);
        }
        j["equilibria"] = entries;
    } else {
        j["centers"] = {{{"r", report.centers[0].r}, {"z", report.centers[0].z}},
                        {{"r", report.centers[1].r}, {"z", report.centers[1].z}}};
        j["center_delta"] = report.center_delta;
        j["eigenvalue_formula"] = {{"coefficient_of_iC_over_R", report.eig_formula_coefficient},
                                   {"relative_delta_vs_numeric", report.eig_relative_delta}};
        j["trajectory_invariant"] = report.invariant_expression;
        j["local_ellipse"] = {{"z_coefficient", report.ellipse.z_coefficient},
                              {"eccentricity", report.ellipse.eccentricity}};
    }
    return j.dump(indent);
}

} // namespace zelf
