#include "core/integrate.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zelf {

namespace {

// Dormand-Prince 4(5) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// Difference between the 5th- and embedded 4th-order weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

double step_floor(double t) { return 1e-13 * std::max(std::abs(t), 1.0); }

std::string state_string(double t, const Vec2& y) {
    return "t = " + std::to_string(t) + ", (r, z) = (" + std::to_string(y.r) + ", " +
           std::to_string(y.z) + ")";
}

} // namespace

AdaptiveStepper::AdaptiveStepper(const ModelParams& mp, Vec2 y0, double rel_tol, double abs_tol,
                                 double initial_step, double max_step)
    : mp_(mp), y_(y0),
      // Tolerances below roundoff make every step rejectable.
      rel_tol_(std::max(rel_tol, 4.0 * std::numeric_limits<double>::epsilon())),
      abs_tol_(std::max(abs_tol, 1e-300)),
      max_step_(max_step > 0.0 ? max_step : std::numeric_limits<double>::infinity()) {
    f_ = rhs_unchecked(mp_, y_.r, y_.z);
    if (initial_step > 0.0) {
        h_ = initial_step;
        return;
    }
    // Automatic initial step (Hairer's heuristic, trimmed to two dimensions).
    auto rms = [this](const Vec2& v, const Vec2& ref) {
        const double sr = abs_tol_ + rel_tol_ * std::abs(ref.r);
        const double sz = abs_tol_ + rel_tol_ * std::abs(ref.z);
        return std::sqrt(0.5 * ((v.r / sr) * (v.r / sr) + (v.z / sz) * (v.z / sz)));
    };
    const double d0 = rms(y_, y_);
    const double d1 = rms(f_, y_);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    const Vec2 y1 = y_ + h0 * f_;
    const Vec2 f1 = rhs_unchecked(mp_, y1.r, y1.z);
    const double d2 = rms(f1 - f_, y_) / h0;
    double h1;
    if (std::max(d1, d2) <= 1e-15)
        h1 = std::max(1e-6, h0 * 1e-3);
    else
        h1 = std::pow(0.01 / std::max(d1, d2), 0.2);
    h_ = std::min({100.0 * h0, h1, max_step_});
}

AdaptiveStepper::StepAttempt AdaptiveStepper::attempt(double h) const {
    const Vec2& k1 = f_;
    const Vec2 k2 = rhs_unchecked(mp_, y_.r + h * a21 * k1.r, y_.z + h * a21 * k1.z);
    const Vec2 k3 = rhs_unchecked(mp_, y_.r + h * (a31 * k1.r + a32 * k2.r),
                                  y_.z + h * (a31 * k1.z + a32 * k2.z));
    const Vec2 k4 = rhs_unchecked(mp_, y_.r + h * (a41 * k1.r + a42 * k2.r + a43 * k3.r),
                                  y_.z + h * (a41 * k1.z + a42 * k2.z + a43 * k3.z));
    const Vec2 k5 =
        rhs_unchecked(mp_, y_.r + h * (a51 * k1.r + a52 * k2.r + a53 * k3.r + a54 * k4.r),
                      y_.z + h * (a51 * k1.z + a52 * k2.z + a53 * k3.z + a54 * k4.z));
    const Vec2 k6 = rhs_unchecked(
        mp_, y_.r + h * (a61 * k1.r + a62 * k2.r + a63 * k3.r + a64 * k4.r + a65 * k5.r),
        y_.z + h * (a61 * k1.z + a62 * k2.z + a63 * k3.z + a64 * k4.z + a65 * k5.z));

    StepAttempt out;
    out.y_new = {y_.r + h * (b1 * k1.r + b3 * k3.r + b4 * k4.r + b5 * k5.r + b6 * k6.r),
                 y_.z + h * (b1 * k1.z + b3 * k3.z + b4 * k4.z + b5 * k5.z + b6 * k6.z)};
    out.f_new = rhs_unchecked(mp_, out.y_new.r, out.y_new.z);   // FSAL stage
    const Vec2 err{
        h * (e1 * k1.r + e3 * k3.r + e4 * k4.r + e5 * k5.r + e6 * k6.r + e7 * out.f_new.r),
        h * (e1 * k1.z + e3 * k3.z + e4 * k4.z + e5 * k5.z + e6 * k6.z + e7 * out.f_new.z)};
    const double sr = abs_tol_ + rel_tol_ * std::max(std::abs(y_.r), std::abs(out.y_new.r));
    const double sz = abs_tol_ + rel_tol_ * std::max(std::abs(y_.z), std::abs(out.y_new.z));
    out.err = std::sqrt(0.5 * ((err.r / sr) * (err.r / sr) + (err.z / sz) * (err.z / sz)));
    if (!std::isfinite(out.y_new.r) || !std::isfinite(out.y_new.z) || !std::isfinite(out.err))
        out.err = std::numeric_limits<double>::infinity();
    return out;
}

Vec2 AdaptiveStepper::probe(double dt) const {
    return attempt(dt).y_new;
}

void AdaptiveStepper::implicit_midpoint_block(double h) {
    // A-stable fixed-step fallback: a short block of implicit midpoint steps,
    // each solved by Newton with the analytic Jacobian.
    fallback_used_ = true;
    constexpr int block = 64;
    double hm = h;
    for (int attempt_count = 0; attempt_count < 60; ++attempt_count) {
        bool block_ok = true;
        Vec2 y = y_;
        double t = t_;
        for (int i = 0; i < block; ++i) {
            Vec2 ynew = y + hm * rhs_unchecked(mp_, y.r, y.z);
            bool ok = false;
            for (int it = 0; it < 25; ++it) {
                const Vec2 mid = 0.5 * (y + ynew);
                const Vec2 g = ynew - y - hm * rhs_unchecked(mp_, mid.r, mid.z);
                if (g.norm() < 1e-14 * (1.0 + y.norm())) {
                    ok = true;
                    break;
                }
                const Mat2 jf = rhs_jacobian_unchecked(mp_, mid.r, mid.z);
                const Mat2 jg{1.0 - 0.5 * hm * jf.a_rr, -0.5 * hm * jf.a_rz,
                              -0.5 * hm * jf.a_zr, 1.0 - 0.5 * hm * jf.a_zz};
                Vec2 delta;
                if (!solve2(jg, -1.0 * g, delta)) break;
                ynew = ynew + delta;
            }
            if (!ok || !std::isfinite(ynew.r) || !std::isfinite(ynew.z)) {
                block_ok = false;
                break;
            }
            y = ynew;
            t += hm;
        }
        if (block_ok) {
            y_ = y;
            t_ = t;
            f_ = rhs_unchecked(mp_, y_.r, y_.z);
            h_ = hm;
            h_last_ = hm;
            return;
        }
        hm *= 0.5;
        if (hm < step_floor(t_))
            throw numerical_error("stiff fallback failed: implicit midpoint did not converge at " +
                                  state_string(t_, y_));
    }
    throw numerical_error("stiff fallback failed to make progress at " + state_string(t_, y_));
}

void AdaptiveStepper::advance() {
    double h = std::min(h_, max_step_);
    for (int rejections = 0;; ++rejections) {
        if (h < step_floor(t_)) {
            // Explicit step collapsed; let the A-stable fallback push through.
            implicit_midpoint_block(std::max(1e3 * h, 1e2 * step_floor(t_)));
            return;
        }
        const StepAttempt s = attempt(h);
        if (s.err <= 1.0) {
            t_ += h;
            y_ = s.y_new;
            f_ = s.f_new;
            h_last_ = h;
            const double grow = s.err > 0.0 ? 0.9 * std::pow(s.err, -0.2) : 5.0;
            h_ = h * std::clamp(grow, 0.2, 5.0);
            h_ = std::min(h_, max_step_);
            return;
        }
        const double shrink = std::isfinite(s.err) ? std::max(0.1, 0.9 * std::pow(s.err, -0.2))
                                                   : 0.1;
        h *= std::min(shrink, 0.7);
        if (rejections > 200)
            throw numerical_error("step control failed to find an acceptable step at " +
                                  state_string(t_, y_));
    }
}

namespace {

// Locates the sub-step dt in (0, h] at which `inside` flips, to within the
// given tolerance on the state, and returns the boundary-clamped state.
Vec2 locate_boundary(const AdaptiveStepper& st, const CrossSection& cs, double h, double& dt_out) {
    double lo = 0.0, hi = h;
    Vec2 y_hi = st.probe(h);
    for (int i = 0; i < 100 && (hi - lo) > 1e-15 * h; ++i) {
        const double mid = 0.5 * (lo + hi);
        const Vec2 y_mid = st.probe(mid);
        if (cs.contains(y_mid.r, y_mid.z)) {
            lo = mid;
        } else {
            hi = mid;
            y_hi = y_mid;
        }
    }
    Vec2 y_end = y_hi;
    y_end.r = std::clamp(y_end.r, -cs.half_width, cs.half_width);
    y_end.z = std::clamp(y_end.z, -cs.half_height, cs.half_height);
    dt_out = hi;
    return y_end;
}

} // namespace

Trajectory integrate(const ModelParams& mp, Vec2 start, const IntegrateOptions& opts) {
    if (!mp.cs.contains(start.r, start.z))
        throw domain_error("integration seed (" + std::to_string(start.r) + ", " +
                           std::to_string(start.z) + ") is outside the domain");
    if (!(opts.t_end > 0.0))
        throw std::invalid_argument("t_end must be positive");

    Trajectory traj;
    traj.samples.push_back({0.0, start.r, start.z});

    AdaptiveStepper st(mp, start, opts.rel_tol, opts.abs_tol, opts.initial_step, opts.max_step);

    // Seed already at rest.
    if (st.f().norm() < opts.convergence_rhs_tol) {
        traj.terminal = TerminalReason::ConvergedToPoint;
        return traj;
    }

    // Closed-orbit bookkeeping: a section through the seed, normal to the
    // initial velocity; a first return that lands within closed_orbit_tol of
    // the seed certifies a closed orbit.
    Vec2 section_normal{0.0, 0.0};
    bool orbit_detection = opts.detect_closed_orbit;
    if (orbit_detection) {
        const double fn = st.f().norm();
        if (fn > 0.0)
            section_normal = st.f() * (1.0 / fn);
        else
            orbit_detection = false;
    }
    double d_max = 0.0;

    int quiet_steps = 0;
    const double instant_tol = 0.01 * opts.convergence_rhs_tol;

    for (std::size_t n = 0; n < opts.max_steps; ++n) {
        if (st.t() >= opts.t_end) {
            traj.terminal = TerminalReason::TimeExhausted;
            return traj;
        }

        const double t_prev = st.t();
        const Vec2 y_prev = st.y();
        const double g_prev = orbit_detection ? (y_prev - start).dot(section_normal) : 0.0;

        st.advance();
        double h = st.t() - t_prev;

        // Clip to t_end by re-probing a shorter step when we overshot.
        bool clipped_to_end = false;
        Vec2 y_new = st.y();
        double t_new = st.t();
        if (t_new > opts.t_end) {
            // Re-localize the state exactly at t_end with a single sub-step.
            AdaptiveStepper sub(mp, y_prev, opts.rel_tol, opts.abs_tol, h, opts.max_step);
            y_new = sub.probe(opts.t_end - t_prev);
            t_new = opts.t_end;
            h = t_new - t_prev;
            clipped_to_end = true;
        }

        if (!mp.cs.contains(y_new.r, y_new.z)) {
            AdaptiveStepper sub(mp, y_prev, opts.rel_tol, opts.abs_tol, h, opts.max_step);
            double dt = h;
            const Vec2 y_b = locate_boundary(sub, mp.cs, h, dt);
            traj.samples.push_back({t_prev + dt, y_b.r, y_b.z});
            traj.terminal = TerminalReason::HitBoundary;
            traj.stiff_fallback_used = st.stiff_fallback_used();
            return traj;
        }

        traj.samples.push_back({t_new, y_new.r, y_new.z});

        if (orbit_detection) {
            const double d = (y_new - start).norm();
            d_max = std::max(d_max, d);
            const double g_new = (y_new - start).dot(section_normal);
            const double near = std::min((y_prev - start).norm(), d);
            if (g_prev < 0.0 && g_new >= 0.0 && near < 0.5 * d_max) {
                // Localize the section crossing inside this step.
                AdaptiveStepper sub(mp, y_prev, opts.rel_tol, opts.abs_tol, h, opts.max_step);
                double lo = 0.0, hi = h;
                Vec2 x_cross = y_new;
                for (int i = 0; i < 90 && (hi - lo) > 1e-15 * h; ++i) {
                    const double mid = 0.5 * (lo + hi);
                    const Vec2 ym = sub.probe(mid);
                    if ((ym - start).dot(section_normal) < 0.0)
                        lo = mid;
                    else {
                        hi = mid;
                        x_cross = ym;
                    }
                }
                if ((x_cross - start).norm() < opts.closed_orbit_tol) {
                    const double t_cross = t_prev + hi;
                    traj.samples.back() = {t_cross, x_cross.r, x_cross.z};
                    traj.terminal = TerminalReason::ClosedOrbitDetected;
                    traj.period = t_cross;
                    traj.stiff_fallback_used = st.stiff_fallback_used();
                    return traj;
                }
            }
        }

        const double fnorm = clipped_to_end ? rhs_unchecked(mp, y_new.r, y_new.z).norm()
                                            : st.f().norm();
        if (fnorm < opts.convergence_rhs_tol)
            ++quiet_steps;
        else
            quiet_steps = 0;
        if (quiet_steps >= opts.convergence_steps || fnorm < instant_tol) {
            traj.terminal = TerminalReason::ConvergedToPoint;
            traj.stiff_fallback_used = st.stiff_fallback_used();
            return traj;
        }

        if (clipped_to_end) {
            traj.terminal = TerminalReason::TimeExhausted;
            traj.stiff_fallback_used = st.stiff_fallback_used();
            return traj;
        }
    }
    throw numerical_error("integration exceeded the step budget at " +
                          state_string(0.0, st.y()));
}

const char* to_string(TerminalReason reason) {
    switch (reason) {
        case TerminalReason::TimeExhausted: return "time_exhausted";
        case TerminalReason::ConvergedToPoint: return "converged_to_point";
        case TerminalReason::HitBoundary: return "hit_boundary";
        case TerminalReason::ClosedOrbitDetected: return "closed_orbit_detected";
    }
    return "unknown";
}

} // namespace zelf
