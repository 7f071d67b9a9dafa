#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/analytics.hpp"
#include "core/equilibria.hpp"
#include "core/model.hpp"

#include <cmath>
#include <complex>

using namespace zelf;

namespace {
const Equilibrium* nearest(const EquilibriumSet& set, Vec2 p) {
    const Equilibrium* best = nullptr;
    double bd = 1e300;
    for (const Equilibrium& eq : set.points) {
        const double d = distance(eq.location, p);
        if (d < bd) {
            bd = d;
            best = &eq;
        }
    }
    return best;
}
} // namespace

TEST_CASE("lift-only 2x1 equilibria match the nine known points") {
    const ModelParams mp = make_lift_only_model(CrossSectionKind::Rect2x1, 0.05);
    const EquilibriumSet set = find_equilibria(mp);
    REQUIRE(set.points.size() == 9);
    CHECK_FALSE(set.wall_continuum);
    const Vec2 expected[] = {{0.0, 0.0}, {0.0, 0.6}, {0.0, -0.6}, {1.58, 0.0}, {-1.58, 0.0},
                             {1.5303, 0.4094}, {1.5303, -0.4094}, {-1.5303, 0.4094},
                             {-1.5303, -0.4094}};
    for (const Vec2& p : expected) {
        const Equilibrium* eq = nearest(set, p);
        REQUIRE(eq != nullptr);
        CHECK(std::abs(eq->location.r - p.r) < 1e-3);
        CHECK(std::abs(eq->location.z - p.z) < 1e-3);
        CHECK(eq->residual < 1e-12);
    }
}

TEST_CASE("drag-only centers") {
    SUBCASE("2x1") {
        const ModelParams mp = make_drag_only_model(CrossSectionKind::Rect2x1, 100.0);
        const EquilibriumSet set = find_equilibria(mp);
        REQUIRE(set.points.size() == 2);
        CHECK(set.wall_continuum);
        const double z0 = 1.0 / std::sqrt(5.0);
        for (const Equilibrium& eq : set.points) {
            CHECK(std::abs(eq.location.r) < 1e-10);
            CHECK(std::abs(std::abs(eq.location.z) - z0) < 1e-10);
            CHECK(eq.kind == EqKind::Center);
        }
    }
    SUBCASE("1x2") {
        const ModelParams mp = make_drag_only_model(CrossSectionKind::Rect1x2, 100.0);
        const EquilibriumSet set = find_equilibria(mp);
        REQUIRE(set.points.size() == 2);
        const double z0 = 2.0 / std::sqrt(5.0);
        for (const Equilibrium& eq : set.points) {
            CHECK(std::abs(eq.location.r) < 1e-10);
            CHECK(std::abs(std::abs(eq.location.z) - z0) < 1e-10);
            CHECK(eq.kind == EqKind::Center);
        }
    }
}

TEST_CASE("full model at R-tilde 100 has two spirals and a wall-side saddle") {
    const ModelParams mp = make_model(CrossSectionKind::Rect2x1, 0.05, 100.0);
    const EquilibriumSet set = find_equilibria(mp);
    REQUIRE(set.points.size() == 3);
    int spirals = 0, saddles = 0;
    for (const Equilibrium& eq : set.points) {
        if (eq.kind == EqKind::StableSpiral) {
            ++spirals;
            CHECK(std::abs(eq.location.r) < 1.0);   // near the center
        }
        if (eq.kind == EqKind::Saddle) {
            ++saddles;
            CHECK(eq.location.r > 1.5);             // near the right wall
            CHECK(std::abs(eq.location.z) < 1e-9);
        }
    }
    CHECK(spirals == 2);
    CHECK(saddles == 1);
}

TEST_CASE("classification") {
    using cplx = std::complex<double>;
    CHECK(classify(cplx(-0.0092), cplx(-0.2762), ForceMode::LiftOnly) == EqKind::StableNode);
    CHECK(classify(cplx(0.0283), cplx(-0.0770), ForceMode::LiftOnly) == EqKind::Saddle);
    CHECK(classify(cplx(0.011), cplx(0.1373), ForceMode::LiftOnly) == EqKind::UnstableNode);
    CHECK(classify(cplx(0.0, 2.3e-5), cplx(0.0, -2.3e-5), ForceMode::DragOnly) == EqKind::Center);
    CHECK(classify(cplx(0.0, 2.3e-5), cplx(0.0, -2.3e-5), ForceMode::Full) == EqKind::Degenerate);
    CHECK(classify(cplx(-1e-3, 0.1), cplx(-1e-3, -0.1), ForceMode::Full) == EqKind::StableSpiral);
    CHECK(classify(cplx(1e-3, 0.1), cplx(1e-3, -0.1), ForceMode::Full) == EqKind::UnstableSpiral);
    // Inside the relative degeneracy band the sign is not trusted.
    CHECK(classify(cplx(1e-9), cplx(-0.1), ForceMode::Full) == EqKind::Degenerate);
}

TEST_CASE("eigensystem against the embedded fit-table values") {
    const double a3 = 0.05 * 0.05 * 0.05;
    SUBCASE("2x1 right-edge node") {
        const ModelParams mp = make_lift_only_model(CrossSectionKind::Rect2x1, 0.05);
        const auto eq = solve_from_seed(mp, {1.58, 0.0});
        REQUIRE(eq.has_value());
        // lambda1 > lambda2 ordering: -0.0094 before -0.1059.
        CHECK(std::abs(eq->lambda1.real() / a3 - (-0.0094)) < 1e-3);
        CHECK(std::abs(eq->lambda2.real() / a3 - (-0.1059)) < 1e-3);
        CHECK(distance(eq->v2, {1.0, 0.0}) < 1e-9);
        CHECK(distance(eq->v1, {0.0, 1.0}) < 1e-9);
        CHECK(eq->kind == EqKind::StableNode);
    }
    SUBCASE("1x2 origin") {
        const ModelParams mp = make_lift_only_model(CrossSectionKind::Rect1x2, 0.05);
        const auto eq = solve_from_seed(mp, {0.0, 0.0});
        REQUIRE(eq.has_value());
        CHECK(std::abs(eq->lambda1.real() / a3 - 0.1373) < 1e-3);
        CHECK(std::abs(eq->lambda2.real() / a3 - 0.0110) < 1e-3);
        CHECK(eq->kind == EqKind::UnstableNode);
    }
    SUBCASE("2x1 corner saddle eigenvector") {
        const ModelParams mp = make_lift_only_model(CrossSectionKind::Rect2x1, 0.05);
        const auto eq = solve_from_seed(mp, {1.5303, 0.4094});
        REQUIRE(eq.has_value());
        CHECK(std::abs(eq->lambda1.real() / a3 - 0.0283) < 1e-3);
        CHECK(std::abs(eq->lambda2.real() / a3 - (-0.0770)) < 1e-3);
        // The contracting direction printed as (0.7380, 0.6748).
        const Vec2 v = eq->v2;
        CHECK(std::abs(v.r - 0.7380) < 1e-3);
        CHECK(std::abs(v.z - 0.6748) < 1e-3);
    }
    SUBCASE("eigensystem rejects non-equilibria") {
        const ModelParams mp = make_lift_only_model(CrossSectionKind::Rect2x1, 0.05);
        CHECK_THROWS_AS(eigensystem(mp, {0.5, 0.3}), std::invalid_argument);
    }
}

TEST_CASE("mirror closure and spectral consistency") {
    const ModelParams mp = make_model(CrossSectionKind::Rect2x1, 0.05, 5000.0);
    const EquilibriumSet set = find_equilibria(mp);
    for (const Equilibrium& eq : set.points) {
        CHECK(eq.residual < 1e-12);
        // Trace/determinant consistency.
        const auto sum = eq.lambda1 + eq.lambda2;
        const auto prod = eq.lambda1 * eq.lambda2;
        const double scale = std::max(std::abs(eq.jac.trace()), std::abs(eq.jac.det()));
        CHECK(std::abs(sum.real() - eq.jac.trace()) < 1e-12 * std::max(1.0, scale));
        CHECK(std::abs(sum.imag()) < 1e-15);
        CHECK(std::abs(prod.real() - eq.jac.det()) <= 1e-12 * std::max(std::abs(eq.jac.det()), 1e-30));
        // Mirror closure.
        if (std::abs(eq.location.z) > 1e-9) {
            const Equilibrium* m = nearest(set, {eq.location.r, -eq.location.z});
            REQUIRE(m != nullptr);
            CHECK(std::abs(m->location.z + eq.location.z) < 1e-9);
            CHECK(std::abs(m->location.r - eq.location.r) < 1e-9);
            CHECK(std::abs(m->lambda1.real() - eq.lambda1.real()) < 1e-14);
            CHECK(std::abs(m->lambda2.real() - eq.lambda2.real()) < 1e-14);
        }
    }
}

TEST_CASE("lift-only eigenvalues scale exactly as particle size cubed") {
    const ModelParams a = make_lift_only_model(CrossSectionKind::Rect2x1, 0.05);
    const ModelParams b = make_lift_only_model(CrossSectionKind::Rect2x1, 0.10);
    const auto ea = solve_from_seed(a, {0.0, 0.6});
    const auto eb = solve_from_seed(b, {0.0, 0.6});
    REQUIRE(ea.has_value());
    REQUIRE(eb.has_value());
    CHECK(eb->lambda1.real() / ea->lambda1.real() == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(eb->lambda2.real() / ea->lambda2.real() == doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("1x2 lift-only equilibria are the coordinate swap of 2x1") {
    const ModelParams m21 = make_lift_only_model(CrossSectionKind::Rect2x1, 0.05);
    const ModelParams m12 = make_lift_only_model(CrossSectionKind::Rect1x2, 0.05);
    const EquilibriumSet s21 = find_equilibria(m21);
    const EquilibriumSet s12 = find_equilibria(m12);
    REQUIRE(s21.points.size() == 9);
    REQUIRE(s12.points.size() == 9);
    for (const Equilibrium& eq : s21.points) {
        const Equilibrium* sw = nearest(s12, {eq.location.z, eq.location.r});
        REQUIRE(sw != nullptr);
        CHECK(distance(sw->location, {eq.location.z, eq.location.r}) < 1e-10);
        CHECK(std::abs(sw->lambda1.real() - eq.lambda1.real()) < 1e-15);
        CHECK(std::abs(sw->lambda2.real() - eq.lambda2.real()) < 1e-15);
        CHECK(sw->kind == eq.kind);
    }
}

TEST_CASE("grid density precondition") {
    const ModelParams mp = make_lift_only_model(CrossSectionKind::Rect2x1, 0.05);
    FindOptions opts;
    opts.grid_r = 7;
    opts.grid_z = 21;
    CHECK_THROWS_AS(find_equilibria(mp, opts), std::invalid_argument);
    opts.grid_r = 8;
    opts.grid_z = 8;
    CHECK_NOTHROW(find_equilibria(mp, opts));
}
