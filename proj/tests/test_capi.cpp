#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <zelf/zelf.h>

#include <json.hpp>

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

// Exercises the shared-library surface the way an external binding would:
// through the C header only.

TEST_CASE("version and names") {
    CHECK(std::strlen(zelf_version()) > 0);
    CHECK(std::string(zelf_status_name(ZELF_OK)) == "ok");
    CHECK(std::string(zelf_status_name(ZELF_ERR_DOMAIN)) == "domain_error");
    CHECK(std::string(zelf_eq_kind_name(ZELF_EQ_SADDLE)) == "saddle");
    CHECK(std::string(zelf_terminal_reason_name(ZELF_TERM_HIT_BOUNDARY)) == "hit_boundary");
    CHECK(std::string(zelf_event_kind_name(ZELF_EVENT_HOPF)) == "hopf");
    CHECK(std::string(zelf_pitchfork_label_name(ZELF_PITCHFORK_SUPERCRITICAL)) ==
          "supercritical");
}

TEST_CASE("cross-section metadata") {
    CHECK(zelf_cs_half_width(ZELF_CS_RECT_2X1) == 2.0);
    CHECK(zelf_cs_half_height(ZELF_CS_RECT_2X1) == 1.0);
    CHECK(zelf_cs_drag_constant(ZELF_CS_RECT_2X1) == 0.02319);
    CHECK(zelf_cs_min_bend_radius(ZELF_CS_RECT_2X1) == 2.0);
    CHECK(zelf_cs_half_width(ZELF_CS_RECT_1X2) == 1.0);
    CHECK(zelf_cs_drag_constant(ZELF_CS_RECT_1X2) == 0.018542);
}

TEST_CASE("field evaluation and domain errors") {
    double f[2] = {1.0, 1.0};
    REQUIRE(zelf_lift(ZELF_CS_RECT_2X1, 0.0, 0.0, f) == ZELF_OK);
    CHECK(f[0] == 0.0);
    CHECK(f[1] == 0.0);
    REQUIRE(zelf_drag(ZELF_CS_RECT_2X1, 0.0, 0.0, f) == ZELF_OK);
    CHECK(f[0] == doctest::Approx(6.0 * 3.14159265358979 * 0.02319).epsilon(1e-10));

    CHECK(zelf_lift(ZELF_CS_RECT_2X1, 3.0, 0.0, f) == ZELF_ERR_DOMAIN);
    CHECK(std::strlen(zelf_last_error()) > 0);
    CHECK(zelf_lift(ZELF_CS_RECT_2X1, 0.0, 0.0, nullptr) == ZELF_ERR_INVALID_ARGUMENT);

    double j[4];
    REQUIRE(zelf_drag_jacobian(ZELF_CS_RECT_2X1, 0.5, 0.25, j) == ZELF_OK);
    CHECK(std::abs(j[0] + j[3]) < 1e-15);   // divergence-free
    CHECK(zelf_drag_jacobian(ZELF_CS_RECT_2X1, 2.0, 0.0, j) == ZELF_ERR_DOMAIN);
}

TEST_CASE("analytic helpers") {
    double h = 0.0;
    REQUIRE(zelf_drag_invariant(ZELF_CS_RECT_2X1, 0.0, 1.0 / std::sqrt(5.0), &h) == ZELF_OK);
    CHECK(h == doctest::Approx(4.57946721791957).epsilon(1e-12));

    double im = 0.0;
    REQUIRE(zelf_drag_center_eigenvalues(ZELF_CS_RECT_2X1, 100.0, &im) == ZELF_OK);
    CHECK(im == doctest::Approx(1.1733315030288755e-4).epsilon(1e-12));
    CHECK(zelf_drag_center_eigenvalues(ZELF_CS_RECT_2X1, -2.0, &im) ==
          ZELF_ERR_INVALID_ARGUMENT);

    double coeff = 0.0, ecc = 0.0;
    REQUIRE(zelf_local_ellipse(ZELF_CS_RECT_1X2, &coeff, &ecc) == ZELF_OK);
    CHECK(coeff == 25.0 / 32.0);
    CHECK(ecc == doctest::Approx(std::sqrt(14.0) / 8.0).epsilon(1e-14));
}

TEST_CASE("model lifecycle") {
    zelf_model* m = nullptr;
    REQUIRE(zelf_model_create(ZELF_CS_RECT_2X1, 0.05, 100.0, 0, &m) == ZELF_OK);
    REQUIRE(m != nullptr);
    CHECK(zelf_model_cross_section(m) == ZELF_CS_RECT_2X1);
    CHECK(zelf_model_a_tilde(m) == 0.05);
    CHECK(zelf_model_r_tilde(m) == 100.0);
    CHECK_FALSE(zelf_model_lift_only(m));
    CHECK_FALSE(zelf_model_drag_only(m));
    CHECK_FALSE(zelf_model_validity_warning(m));

    double f[2];
    REQUIRE(zelf_model_rhs(m, 0.0, 0.0, f) == ZELF_OK);
    CHECK(f[0] == doctest::Approx(0.02319 / 200.0).epsilon(1e-14));
    CHECK(f[1] == 0.0);
    zelf_model_free(m);

    // Bend radius below the physical minimum.
    CHECK(zelf_model_create(ZELF_CS_RECT_2X1, 0.05, 1.0, 0, &m) == ZELF_ERR_INVALID_ARGUMENT);
    REQUIRE(zelf_model_create(ZELF_CS_RECT_2X1, 0.05, 1.0, ZELF_MODEL_ALLOW_SMALL_BEND, &m) ==
            ZELF_OK);
    zelf_model_free(m);

    // Limit configurations.
    REQUIRE(zelf_model_create(ZELF_CS_RECT_2X1, 0.05, INFINITY, 0, &m) == ZELF_OK);
    CHECK(zelf_model_lift_only(m));
    zelf_model_free(m);
    REQUIRE(zelf_model_create(ZELF_CS_RECT_2X1, 0.0, 100.0, ZELF_MODEL_DRAG_ONLY, &m) == ZELF_OK);
    CHECK(zelf_model_drag_only(m));
    zelf_model_free(m);

    // Oversized particle flags the validity warning but constructs.
    REQUIRE(zelf_model_create(ZELF_CS_RECT_2X1, 0.2, 100.0, 0, &m) == ZELF_OK);
    CHECK(zelf_model_validity_warning(m));
    zelf_model_free(m);
}

TEST_CASE("physical nondimensionalization") {
    zelf_model* m = nullptr;
    double length = 0.0, time = 0.0;
    REQUIRE(zelf_model_from_physical(1.0, 100.0, 4.0, 2.0, 1.0, 1.0, 1.0, &m, &length, &time) ==
            ZELF_OK);
    CHECK(zelf_model_cross_section(m) == ZELF_CS_RECT_2X1);
    CHECK(zelf_model_a_tilde(m) == 1.0);
    CHECK(zelf_model_r_tilde(m) == 100.0);
    CHECK(length == 1.0);
    CHECK(time == 0.5);
    zelf_model_free(m);
    CHECK(zelf_model_from_physical(1.0, 100.0, 3.0, 2.0, 1.0, 1.0, 1.0, &m, nullptr, nullptr) ==
          ZELF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("trajectory integration") {
    zelf_model* m = nullptr;
    REQUIRE(zelf_model_create(ZELF_CS_RECT_2X1, 0.0, 100.0, ZELF_MODEL_DRAG_ONLY, &m) == ZELF_OK);

    zelf_integrate_options opts;
    zelf_integrate_options_init(&opts);
    CHECK(opts.rel_tol == 1e-10);
    CHECK(opts.abs_tol == 1e-12);
    opts.detect_closed_orbit = 1;

    zelf_trajectory* traj = nullptr;
    REQUIRE(zelf_integrate(m, 1.0, 0.5, &opts, &traj) == ZELF_OK);
    REQUIRE(traj != nullptr);
    CHECK(zelf_trajectory_terminal_reason(traj) == ZELF_TERM_CLOSED_ORBIT_DETECTED);
    CHECK(zelf_trajectory_period(traj) > 0.0);
    const size_t n = zelf_trajectory_size(traj);
    REQUIRE(n > 10);
    double t0, r0, z0, t1, r1, z1;
    REQUIRE(zelf_trajectory_sample(traj, 0, &t0, &r0, &z0) == ZELF_OK);
    REQUIRE(zelf_trajectory_sample(traj, n - 1, &t1, &r1, &z1) == ZELF_OK);
    CHECK(t0 == 0.0);
    CHECK(r0 == 1.0);
    CHECK(z0 == 0.5);
    CHECK(std::hypot(r1 - r0, z1 - z0) < 1e-6);
    CHECK(zelf_trajectory_sample(traj, n, &t0, &r0, &z0) == ZELF_ERR_INDEX);
    zelf_trajectory_free(traj);

    CHECK(zelf_integrate(m, 5.0, 0.0, nullptr, &traj) == ZELF_ERR_DOMAIN);
    zelf_model_free(m);
}

TEST_CASE("equilibria through the C surface") {
    zelf_model* m = nullptr;
    REQUIRE(zelf_model_create(ZELF_CS_RECT_2X1, 0.05, INFINITY, 0, &m) == ZELF_OK);
    zelf_equilibria* set = nullptr;
    REQUIRE(zelf_find_equilibria(m, 0, 0, &set) == ZELF_OK);
    REQUIRE(set != nullptr);
    CHECK(zelf_equilibria_count(set) == 9);
    CHECK_FALSE(zelf_equilibria_wall_continuum(set));

    bool found_origin = false;
    for (size_t i = 0; i < zelf_equilibria_count(set); ++i) {
        double r, z, re1, im1, re2, im2, resid;
        zelf_eq_kind kind;
        REQUIRE(zelf_equilibria_location(set, i, &r, &z) == ZELF_OK);
        REQUIRE(zelf_equilibria_eigenvalues(set, i, &re1, &im1, &re2, &im2) == ZELF_OK);
        REQUIRE(zelf_equilibria_kind(set, i, &kind) == ZELF_OK);
        REQUIRE(zelf_equilibria_residual(set, i, &resid) == ZELF_OK);
        CHECK(resid < 1e-12);
        CHECK(im1 == 0.0);
        double v1[2], v2[2], jac[4];
        REQUIRE(zelf_equilibria_eigenvectors(set, i, v1, v2) == ZELF_OK);
        REQUIRE(zelf_equilibria_jacobian(set, i, jac) == ZELF_OK);
        CHECK(std::abs(jac[0] + jac[3] - (re1 + re2)) < 1e-15);
        if (std::abs(r) < 1e-9 && std::abs(z) < 1e-9) {
            found_origin = true;
            CHECK(kind == ZELF_EQ_UNSTABLE_NODE);
        }
    }
    CHECK(found_origin);
    CHECK(zelf_equilibria_location(set, 99, nullptr, nullptr) == ZELF_ERR_INDEX);
    zelf_equilibria_free(set);

    // Grid density precondition surfaces as invalid argument.
    CHECK(zelf_find_equilibria(m, 4, 4, &set) == ZELF_ERR_INVALID_ARGUMENT);
    zelf_model_free(m);

    // Complex pair has no eigenvectors.
    REQUIRE(zelf_model_create(ZELF_CS_RECT_2X1, 0.0, 100.0, ZELF_MODEL_DRAG_ONLY, &m) == ZELF_OK);
    REQUIRE(zelf_find_equilibria(m, 0, 0, &set) == ZELF_OK);
    REQUIRE(zelf_equilibria_count(set) == 2);
    CHECK(zelf_equilibria_wall_continuum(set));
    double v1[2], v2[2];
    CHECK(zelf_equilibria_eigenvectors(set, 0, v1, v2) == ZELF_ERR_NOT_AVAILABLE);
    zelf_equilibria_free(set);
    zelf_model_free(m);
}

TEST_CASE("limit reports as JSON") {
    char* json = nullptr;
    int passed = 0;
    REQUIRE(zelf_lift_limit_report_json(ZELF_CS_RECT_2X1, 2, &json, &passed) == ZELF_OK);
    REQUIRE(json != nullptr);
    CHECK(passed == 1);
    const auto parsed = nlohmann::json::parse(json);
    CHECK(parsed["limit"] == "lift_only");
    CHECK(parsed["equilibria"].size() == 9);
    zelf_string_free(json);

    REQUIRE(zelf_drag_limit_report_json(ZELF_CS_RECT_1X2, 100.0, 0, &json, &passed) == ZELF_OK);
    const auto parsed2 = nlohmann::json::parse(json);
    CHECK(passed == 1);
    CHECK(parsed2["local_ellipse"]["z_coefficient"].get<double>() == 25.0 / 32.0);
    zelf_string_free(json);
}

TEST_CASE("sweep and limit cycles through the C surface") {
    std::vector<double> schedule(60);
    REQUIRE(zelf_log_schedule(4500.0, 1000.0, schedule.size(), schedule.data()) == ZELF_OK);
    CHECK(schedule.front() == 4500.0);
    CHECK(schedule.back() == 1000.0);

    zelf_sweep* sweep = nullptr;
    REQUIRE(zelf_sweep_run(ZELF_CS_RECT_1X2, 0.05, schedule.data(), schedule.size(), nullptr,
                           &sweep) == ZELF_OK);
    REQUIRE(sweep != nullptr);
    CHECK(zelf_sweep_branch_count(sweep) >= 3);

    // The center pitchfork and on-axis saddle-node live in this window.
    size_t n_events = zelf_sweep_event_count(sweep);
    REQUIRE(n_events >= 2);
    bool saw_pitchfork = false;
    for (size_t i = 0; i < n_events; ++i) {
        zelf_event_kind kind;
        double lo, hi, hr, hz;
        zelf_pitchfork_label label;
        int ambiguous;
        REQUIRE(zelf_sweep_event(sweep, i, &kind, &lo, &hi, &label, &hr, &hz, &ambiguous) ==
                ZELF_OK);
        CHECK(lo < hi);
        CHECK_FALSE(ambiguous);
        const int* ids = nullptr;
        size_t nids = 0;
        REQUIRE(zelf_sweep_event_branches(sweep, i, &ids, &nids) == ZELF_OK);
        CHECK(nids >= 1);
        if (kind == ZELF_EVENT_PITCHFORK) {
            saw_pitchfork = true;
            CHECK(nids == 3);
            double rlo, rhi;
            int warning = 1;
            REQUIRE(zelf_sweep_refine_event(sweep, i, 0.5, &rlo, &rhi, &warning) == ZELF_OK);
            CHECK(warning == 0);
            CHECK(rhi - rlo <= 0.5);
        }
    }
    CHECK(saw_pitchfork);

    // Branch samples are retrievable and ordered.
    for (size_t b = 0; b < zelf_sweep_branch_count(sweep); ++b) {
        const size_t n = zelf_sweep_branch_size(sweep, b);
        double prev = 1e300;
        for (size_t i = 0; i < n; ++i) {
            double rt, r, z, re1, im1, re2, im2;
            zelf_eq_kind kind;
            REQUIRE(zelf_sweep_branch_sample(sweep, b, i, &rt, &r, &z, &re1, &im1, &re2, &im2,
                                             &kind) == ZELF_OK);
            CHECK(rt < prev);
            prev = rt;
        }
        int birth, death;
        REQUIRE(zelf_sweep_branch_events(sweep, b, &birth, &death) == ZELF_OK);
    }

    // Final state: two unstable spirals with certified limit cycles.
    zelf_equilibria* final_set = nullptr;
    REQUIRE(zelf_sweep_final_equilibria(sweep, &final_set) == ZELF_OK);
    REQUIRE(zelf_equilibria_count(final_set) == 3);
    zelf_model* m = nullptr;
    REQUIRE(zelf_model_create(ZELF_CS_RECT_1X2, 0.05, 1000.0, 0, &m) == ZELF_OK);
    int cycles = 0;
    for (size_t i = 0; i < zelf_equilibria_count(final_set); ++i) {
        zelf_eq_kind kind;
        double r, z;
        REQUIRE(zelf_equilibria_kind(final_set, i, &kind) == ZELF_OK);
        REQUIRE(zelf_equilibria_location(final_set, i, &r, &z) == ZELF_OK);
        if (kind != ZELF_EQ_UNSTABLE_SPIRAL) continue;
        zelf_limit_cycle* cycle = nullptr;
        REQUIRE(zelf_find_limit_cycle(m, r, z, &cycle) == ZELF_OK);
        REQUIRE(cycle != nullptr);
        CHECK(zelf_limit_cycle_period(cycle) > 0.0);
        CHECK(zelf_limit_cycle_residual(cycle) < 1e-8);
        double cr, cz;
        REQUIRE(zelf_limit_cycle_center(cycle, &cr, &cz) == ZELF_OK);
        CHECK(std::hypot(cr - r, cz - z) < 1e-9);
        REQUIRE(zelf_limit_cycle_size(cycle) > 10);
        double t, rr, zz;
        REQUIRE(zelf_limit_cycle_sample(cycle, 0, &t, &rr, &zz) == ZELF_OK);
        CHECK(t == 0.0);
        zelf_limit_cycle_free(cycle);
        ++cycles;
    }
    CHECK(cycles == 2);

    // A stable region without a cycle reports not-found with a diagnostic.
    zelf_limit_cycle* cycle = nullptr;
    double sr, sz;
    zelf_eq_kind kind0;
    for (size_t i = 0; i < zelf_equilibria_count(final_set); ++i) {
        REQUIRE(zelf_equilibria_kind(final_set, i, &kind0) == ZELF_OK);
        if (kind0 == ZELF_EQ_SADDLE) {
            REQUIRE(zelf_equilibria_location(final_set, i, &sr, &sz) == ZELF_OK);
            CHECK(zelf_find_limit_cycle(m, sr, sz, &cycle) != ZELF_OK);
            CHECK(cycle == nullptr);
        }
    }

    zelf_equilibria_free(final_set);
    zelf_model_free(m);
    zelf_sweep_free(sweep);
}

TEST_CASE("sweep input validation") {
    const double bad[] = {10.0, 20.0};
    zelf_sweep* sweep = nullptr;
    CHECK(zelf_sweep_run(ZELF_CS_RECT_2X1, 0.05, bad, 2, nullptr, &sweep) ==
          ZELF_ERR_INVALID_ARGUMENT);
    CHECK(sweep == nullptr);
    CHECK(zelf_sweep_run(ZELF_CS_RECT_2X1, 0.05, nullptr, 0, nullptr, &sweep) ==
          ZELF_ERR_INVALID_ARGUMENT);
}
