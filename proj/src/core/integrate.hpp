#ifndef ZELF_CORE_INTEGRATE_HPP
#define ZELF_CORE_INTEGRATE_HPP

#include "core/model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace zelf {

enum class TerminalReason {
    TimeExhausted,
    ConvergedToPoint,
    HitBoundary,
    ClosedOrbitDetected,
};

struct TrajectorySample {
    double t;
    double r;
    double z;
};

struct IntegrateOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double t_end = 1e9;
    double max_step = 0.0;              // 0 = unlimited
    double initial_step = 0.0;          // 0 = automatic
    bool detect_closed_orbit = false;
    double closed_orbit_tol = 1e-6;     // first-return distance that counts as closed
    double convergence_rhs_tol = 1e-12; // |rhs| threshold for rest detection
    int convergence_steps = 10;         // consecutive accepted steps below threshold
    std::size_t max_steps = 20'000'000;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;   // strictly increasing t, first at t = 0
    TerminalReason terminal = TerminalReason::TimeExhausted;
    double period = 0.0;                     // set for ClosedOrbitDetected
    bool stiff_fallback_used = false;

    Vec2 final_state() const {
        return {samples.back().r, samples.back().z};
    }
};

// Integrates dX/dt = rhs(X) from `start` with an embedded Dormand-Prince 4(5)
// pair. Stops at t_end, on boundary contact (the terminal sample is placed on
// the boundary), when |rhs| stays below the convergence threshold for the
// configured number of accepted steps (or is already at rest at the seed), or
// on the first certified return to the start point when closed-orbit
// detection is enabled. Near-wall stiffness that collapses the explicit step
// is handed to a fixed-step implicit midpoint fallback; if that also fails, a
// zelf::numerical_error naming the failing state is thrown.
Trajectory integrate(const ModelParams& mp, Vec2 start, const IntegrateOptions& opts = {});

// Low-level adaptive stepper shared by integrate() and the limit-cycle
// search. Holds the FSAL state; advance() performs one accepted step.
class AdaptiveStepper {
public:
    AdaptiveStepper(const ModelParams& mp, Vec2 y0, double rel_tol, double abs_tol,
                    double initial_step = 0.0, double max_step = 0.0);

    double t() const { return t_; }
    const Vec2& y() const { return y_; }
    const Vec2& f() const { return f_; }   // rhs at the current state
    double last_step() const { return h_last_; }
    bool stiff_fallback_used() const { return fallback_used_; }

    void advance();

    // Single fixed step of size dt from the current state (dt is expected to
    // be at most around the last accepted step). Used for event localization.
    Vec2 probe(double dt) const;

private:
    struct StepAttempt {
        Vec2 y_new;
        Vec2 f_new;
        double err;
    };
    StepAttempt attempt(double h) const;
    void implicit_midpoint_block(double h);

    ModelParams mp_;
    Vec2 y_;
    Vec2 f_;
    double t_ = 0.0;
    double h_ = 0.0;
    double h_last_ = 0.0;
    double rel_tol_;
    double abs_tol_;
    double max_step_;
    bool fallback_used_ = false;
};

const char* to_string(TerminalReason reason);

} // namespace zelf

#endif
