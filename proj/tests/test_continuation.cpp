#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/continuation.hpp"

#include <algorithm>
#include <cmath>

using namespace zelf;

namespace {
std::vector<const BifurcationEvent*> events_of_kind(const SweepResult& res, EventKind kind) {
    std::vector<const BifurcationEvent*> out;
    for (const BifurcationEvent& ev : res.events)
        if (ev.kind == kind) out.push_back(&ev);
    return out;
}

// One sweep per cross-section, shared across the checks below.
const SweepResult& sweep_2x1() {
    static const SweepResult res = sweep(CrossSectionKind::Rect2x1, 0.05,
                                         log_schedule(1e5, 2.0, 400));
    return res;
}
const SweepResult& sweep_1x2() {
    static const SweepResult res = sweep(CrossSectionKind::Rect1x2, 0.05,
                                         log_schedule(1e5, 1000.0, 300));
    return res;
}
} // namespace

TEST_CASE("log schedule endpoints and monotonicity") {
    const auto s = log_schedule(1e5, 2.0, 400);
    CHECK(s.size() == 400);
    CHECK(s.front() == 1e5);
    CHECK(s.back() == 2.0);
    for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
    CHECK_THROWS_AS(log_schedule(10.0, 100.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(log_schedule(10.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("sweep input validation") {
    CHECK_THROWS_AS(sweep(CrossSectionKind::Rect2x1, 0.05, {100.0}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(CrossSectionKind::Rect2x1, 0.05, {100.0, 200.0}),
                    std::invalid_argument);
    CHECK_THROWS_AS(sweep(CrossSectionKind::Rect2x1, 0.05, {100.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(sweep(CrossSectionKind::Rect2x1, -0.05, {100.0, 10.0}),
                    std::invalid_argument);
}

TEST_CASE("2x1 sweep reproduces the bifurcation cascade") {
    const SweepResult& res = sweep_2x1();

    SUBCASE("right-edge pitchfork sits inside (2200, 3500)") {
        const auto pfs = events_of_kind(res, EventKind::Pitchfork);
        REQUIRE(pfs.size() == 2);
        const BifurcationEvent& right = *pfs[0];   // events sorted by descending bracket
        CHECK(right.r_lo > 2200.0);
        CHECK(right.r_hi < 3500.0);
        CHECK(right.location_hint.r > 1.0);
        CHECK(right.label == PitchforkLabel::Subcritical);
        CHECK(right.died.size() == 2);
        CHECK(right.branches.size() == 3);
        CHECK_FALSE(right.ambiguous);
    }
    SUBCASE("center pitchfork immediately precedes the center saddle-node") {
        const auto pfs = events_of_kind(res, EventKind::Pitchfork);
        REQUIRE(pfs.size() == 2);
        const BifurcationEvent& center = *pfs[1];
        CHECK(center.location_hint.r < 0.0);
        CHECK(center.born.size() == 2);
        const auto sns = events_of_kind(res, EventKind::SaddleNode);
        REQUIRE(sns.size() == 3);
        // The on-axis saddle-node right below the center pitchfork.
        const BifurcationEvent& sn_center = *sns[0];
        CHECK(std::abs(sn_center.location_hint.z) < 1e-3);
        CHECK(sn_center.r_hi < center.r_lo);
        CHECK(center.r_lo - sn_center.r_hi < 0.01 * center.r_lo);
    }
    SUBCASE("top/bottom saddle-node pair is simultaneous") {
        const auto sns = events_of_kind(res, EventKind::SaddleNode);
        REQUIRE(sns.size() == 3);
        const BifurcationEvent& top = *sns[1];
        const BifurcationEvent& bottom = *sns[2];
        CHECK(std::abs(top.location_hint.z + bottom.location_hint.z) < 1e-2);
        CHECK(std::abs(top.location_hint.z) > 0.3);
        CHECK(std::abs(top.r_hi - bottom.r_hi) < 1e-3 * top.r_hi);
        CHECK(top.died.size() == 2);
        CHECK(bottom.died.size() == 2);
    }
    SUBCASE("hopf pair with brackets inside (100, 1900)") {
        const auto hopfs = events_of_kind(res, EventKind::Hopf);
        REQUIRE(hopfs.size() == 2);
        for (const BifurcationEvent* h : hopfs) {
            CHECK(h->r_hi < 1900.0);
            CHECK(h->r_lo > 100.0);
            CHECK(h->refined);
        }
        CHECK(std::abs(hopfs[0]->r_hi - hopfs[1]->r_hi) < 1e-3 * hopfs[0]->r_hi);
        CHECK(std::abs(hopfs[0]->location_hint.z + hopfs[1]->location_hint.z) < 1e-6);
    }
    SUBCASE("final state: two stable spirals and one saddle") {
        const auto final = res.final_equilibria();
        REQUIRE(final.size() == 3);
        int spirals = 0, saddles = 0;
        for (const Equilibrium& eq : final) {
            if (eq.kind == EqKind::StableSpiral) ++spirals;
            if (eq.kind == EqKind::Saddle) ++saddles;
        }
        CHECK(spirals == 2);
        CHECK(saddles == 1);
    }
    SUBCASE("events change the equilibrium count by two") {
        for (const BifurcationEvent& ev : res.events) {
            if (ev.kind == EventKind::Hopf) {
                CHECK(ev.died.empty());
                CHECK(ev.born.empty());
            } else {
                CHECK(ev.died.size() + ev.born.size() == 2);
            }
        }
    }
    SUBCASE("branches are z-mirror paired or on the axis") {
        for (const Branch& br : res.branches) {
            const BranchSample& s = br.samples.front();
            if (std::abs(s.eq.location.z) < 1e-9) continue;
            bool mirrored = false;
            for (const Branch& other : res.branches) {
                if (other.samples.front().r_tilde != s.r_tilde) continue;
                const Vec2 loc = other.samples.front().eq.location;
                if (std::abs(loc.r - s.eq.location.r) < 1e-9 &&
                    std::abs(loc.z + s.eq.location.z) < 1e-9)
                    mirrored = true;
            }
            CHECK(mirrored);
        }
    }
    SUBCASE("branch samples move smoothly and change kind only at records") {
        for (const Branch& br : res.branches) {
            for (std::size_t i = 1; i < br.samples.size(); ++i) {
                CHECK(distance(br.samples[i].eq.location, br.samples[i - 1].eq.location) < 0.25);
                if (br.samples[i].eq.kind == br.samples[i - 1].eq.kind) continue;
                const double hi = br.samples[i - 1].r_tilde;
                const double lo = br.samples[i].r_tilde;
                bool recorded = false;
                for (const KindTransition& tr : res.transitions)
                    if (tr.branch == br.id && tr.r_hi >= hi - 1e-9 && tr.r_lo <= lo + 1e-9)
                        recorded = true;
                for (const BifurcationEvent& ev : res.events) {
                    const bool mine = std::find(ev.branches.begin(), ev.branches.end(), br.id) !=
                                      ev.branches.end();
                    if (mine && ev.r_hi >= lo - 1e-9 && ev.r_lo <= hi + 1e-9) recorded = true;
                }
                CHECK(recorded);
            }
        }
    }
}

TEST_CASE("hopf refinement pins the eigenvalue crossing") {
    const SweepResult& res = sweep_2x1();
    const auto hopfs = events_of_kind(res, EventKind::Hopf);
    REQUIRE(hopfs.size() == 2);
    const BifurcationEvent& h = *hopfs[0];
    // Re-evaluate the tracked spiral at the refined midpoint.
    const double mid = std::sqrt(h.r_hi * h.r_lo);
    const ModelParams mp = make_model(CrossSectionKind::Rect2x1, 0.05, mid);
    const auto eq = solve_from_seed(mp, h.location_hint);
    REQUIRE(eq.has_value());
    CHECK_FALSE(eq->real_eigenpair);
    CHECK(std::abs(eq->lambda1.real()) < 1e-8);
    CHECK(eq->lambda1.imag() > 0.0);
}

TEST_CASE("refine_event tightens a pitchfork bracket to unit width") {
    const SweepResult& res = sweep_2x1();
    const auto pfs = events_of_kind(res, EventKind::Pitchfork);
    REQUIRE(!pfs.empty());
    BifurcationEvent wide = *pfs[0];
    wide.r_hi = 3500.0;
    wide.r_lo = 2200.0;
    wide.refined = false;
    const BifurcationEvent refined = refine_event(CrossSectionKind::Rect2x1, 0.05, wide, 1.0);
    CHECK(refined.refined);
    CHECK(refined.r_hi - refined.r_lo <= 1.0);
    CHECK(refined.r_hi <= 3500.0);
    CHECK(refined.r_lo >= 2200.0);
    // The tight bracket from the sweep lies inside the re-refined one.
    CHECK(pfs[0]->r_hi <= refined.r_hi + 1.0);
    CHECK(pfs[0]->r_lo >= refined.r_lo - 1.0);
}

TEST_CASE("refine_event reports a lost sign change") {
    BifurcationEvent ev;
    ev.kind = EventKind::SaddleNode;
    ev.r_hi = 5000.0;
    ev.r_lo = 4500.0;   // no fold of the 2x1 model in this bracket
    ev.locations_hi = {{-1.3, 0.5}};
    const BifurcationEvent out = refine_event(CrossSectionKind::Rect2x1, 0.05, ev, 1.0);
    CHECK_FALSE(out.refined);
    CHECK(out.note.find("warning") != std::string::npos);
    CHECK(out.r_hi == 5000.0);
    CHECK(out.r_lo == 4500.0);
}

TEST_CASE("1x2 sweep reproduces the bifurcation cascade") {
    const SweepResult& res = sweep_1x2();

    const auto pfs = events_of_kind(res, EventKind::Pitchfork);
    const auto sns = events_of_kind(res, EventKind::SaddleNode);
    REQUIRE(pfs.size() == 2);
    REQUIRE(sns.size() == 5);

    SUBCASE("right-edge pitchfork is supercritical inside (6000, 35000)") {
        const BifurcationEvent& pf = *pfs[0];
        CHECK(pf.label == PitchforkLabel::Supercritical);
        CHECK(pf.r_lo > 6000.0);
        CHECK(pf.r_hi < 35000.0);
        CHECK(pf.location_hint.r > 0.0);
        CHECK(std::abs(pf.location_hint.z) < 1e-3);
    }
    SUBCASE("first saddle-node pair precedes the pitchfork") {
        CHECK(sns[0]->r_hi > pfs[0]->r_hi);
        CHECK(sns[1]->r_hi > pfs[0]->r_hi);
        CHECK(std::abs(sns[0]->r_hi - sns[1]->r_hi) < 1e-3 * sns[0]->r_hi);
    }
    SUBCASE("released nodes die in a saddle-node pair inside (3500, 6000)") {
        const BifurcationEvent& a = *sns[2];
        const BifurcationEvent& b = *sns[3];
        for (const BifurcationEvent* ev : {&a, &b}) {
            CHECK(ev->r_lo > 3500.0);
            CHECK(ev->r_hi < 6000.0);
        }
        CHECK(std::abs(a.r_hi - b.r_hi) < 1e-3 * a.r_hi);
        // They consume the branches born at the pitchfork.
        for (int id : pfs[0]->born) {
            const bool consumed =
                std::find(a.died.begin(), a.died.end(), id) != a.died.end() ||
                std::find(b.died.begin(), b.died.end(), id) != b.died.end();
            CHECK(consumed);
        }
    }
    SUBCASE("center pitchfork and the final on-axis saddle-node") {
        const BifurcationEvent& center = *pfs[1];
        CHECK(center.location_hint.r < 0.3);
        CHECK(center.born.size() == 2);
        const BifurcationEvent& last_sn = *sns[4];
        CHECK(last_sn.r_hi < center.r_lo);
        CHECK(std::abs(last_sn.location_hint.z) < 1e-3);
    }
    SUBCASE("born branches become unstable spirals") {
        bool found = false;
        for (const KindTransition& tr : res.transitions) {
            if (tr.from == EqKind::UnstableNode && tr.to == EqKind::UnstableSpiral) found = true;
        }
        CHECK(found);
    }
    SUBCASE("final state: two unstable spirals and one saddle") {
        const auto final = res.final_equilibria();
        REQUIRE(final.size() == 3);
        int spirals = 0, saddles = 0;
        for (const Equilibrium& eq : final) {
            if (eq.kind == EqKind::UnstableSpiral) ++spirals;
            if (eq.kind == EqKind::Saddle) ++saddles;
        }
        CHECK(spirals == 2);
        CHECK(saddles == 1);
    }
}

TEST_CASE("coarse schedules detect the same cascade without ambiguity") {
    // Large steps land few points near the events; subdivision, the
    // resolution-aware root merging and the determinant-based pitchfork
    // refinement must still produce the exact event list.
    const SweepResult res = sweep(CrossSectionKind::Rect1x2, 0.05,
                                  log_schedule(15000.0, 1000.0, 80));
    REQUIRE(res.events.size() == 5);
    for (const BifurcationEvent& ev : res.events) CHECK_FALSE(ev.ambiguous);
    CHECK(res.events[0].kind == EventKind::Pitchfork);
    CHECK(res.events[0].label == PitchforkLabel::Supercritical);
    CHECK(res.events[1].kind == EventKind::SaddleNode);
    CHECK(res.events[2].kind == EventKind::SaddleNode);
    CHECK(res.events[3].kind == EventKind::Pitchfork);
    CHECK(res.events[4].kind == EventKind::SaddleNode);
    CHECK(res.final_equilibria().size() == 3);
}

TEST_CASE("refined event locations are independent of the schedule density") {
    const SweepResult coarse = sweep(CrossSectionKind::Rect2x1, 0.05,
                                     log_schedule(1e5, 2.0, 150));
    const SweepResult& fine = sweep_2x1();
    REQUIRE(coarse.events.size() == fine.events.size());
    for (std::size_t i = 0; i < fine.events.size(); ++i) {
        CHECK(coarse.events[i].kind == fine.events[i].kind);
        CHECK(std::abs(coarse.events[i].r_hi - fine.events[i].r_hi) <
              1e-4 * fine.events[i].r_hi);
    }
}

TEST_CASE("limit cycles around the 1x2 unstable spirals") {
    const auto final = sweep_1x2().final_equilibria();
    const ModelParams mp = make_model(CrossSectionKind::Rect1x2, 0.05, 1000.0);
    int cycles = 0;
    for (const Equilibrium& eq : final) {
        if (eq.kind != EqKind::UnstableSpiral) continue;
        std::string diag;
        const auto lc = find_limit_cycle(mp, eq, {}, &diag);
        REQUIRE_MESSAGE(lc.has_value(), diag);
        CHECK(lc->return_residual < 1e-8);
        CHECK(lc->period > 0.0);
        CHECK(lc->encloses_only_reference);
        CHECK(distance(lc->enclosed_equilibrium, eq.location) < 1e-12);
        REQUIRE(lc->orbit.size() > 10);
        // The orbit is a closed loop: ends where it starts.
        const TrajectorySample& first = lc->orbit.front();
        const TrajectorySample& last = lc->orbit.back();
        CHECK(std::hypot(first.r - last.r, first.z - last.z) < 1e-8);
        ++cycles;
    }
    CHECK(cycles == 2);
}

TEST_CASE("stable spirals of the 2x1 duct have no encompassing cycle") {
    const ModelParams mp = make_model(CrossSectionKind::Rect2x1, 0.05, 100.0);
    const EquilibriumSet set = find_equilibria(mp);
    int checked = 0;
    for (const Equilibrium& eq : set.points) {
        if (eq.kind != EqKind::StableSpiral) continue;
        std::string diag;
        CHECK_FALSE(find_limit_cycle(mp, eq, {}, &diag).has_value());
        CHECK_FALSE(diag.empty());
        ++checked;
    }
    CHECK(checked == 2);
}

TEST_CASE("drag-only center reports the degenerate-center diagnostic") {
    const ModelParams mp = make_drag_only_model(CrossSectionKind::Rect2x1, 100.0);
    const EquilibriumSet set = find_equilibria(mp);
    REQUIRE(set.points.size() == 2);
    std::string diag;
    CHECK_FALSE(find_limit_cycle(mp, set.points[0], {}, &diag).has_value());
    CHECK(diag.find("degenerate center") != std::string::npos);
}

TEST_CASE("limit-cycle search rejects non-spiral equilibria") {
    const ModelParams mp = make_model(CrossSectionKind::Rect2x1, 0.05, 100.0);
    const EquilibriumSet set = find_equilibria(mp);
    for (const Equilibrium& eq : set.points) {
        if (eq.kind != EqKind::Saddle) continue;
        CHECK_THROWS_AS(find_limit_cycle(mp, eq), std::invalid_argument);
    }
}
