#ifndef ZELF_CORE_CONTINUATION_HPP
#define ZELF_CORE_CONTINUATION_HPP

#include "core/equilibria.hpp"
#include "core/integrate.hpp"
#include "core/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace zelf {

struct BranchSample {
    double r_tilde;
    Equilibrium eq;
};

// One equilibrium tracked across the bend-radius schedule. Samples are in
// descending r_tilde order; birth/death link into SweepResult::events.
struct Branch {
    int id = -1;
    std::vector<BranchSample> samples;
    int birth_event = -1;   // -1: existed at the start of the schedule
    int death_event = -1;   // -1: still alive at the end
};

enum class EventKind { SaddleNode, Pitchfork, Hopf };
enum class PitchforkLabel { None, Supercritical, Subcritical };

struct BifurcationEvent {
    EventKind kind;
    double r_hi = 0.0;                 // bracket in r_tilde, r_hi > r_lo
    double r_lo = 0.0;
    std::vector<int> branches;         // participating branch ids (incl. pitchfork parent)
    std::vector<int> died;             // branches that end at this event
    std::vector<int> born;             // branches that start at this event
    PitchforkLabel label = PitchforkLabel::None;
    Vec2 location_hint{};              // where in the cross-section it happens
    bool z_mirror_axis = true;         // pitchforks: the symmetry the event breaks
    bool refined = false;
    bool ambiguous = false;            // left for refinement, not silently resolved
    std::string note;
    // Participant locations at the bracket ends; warm-start data for refinement.
    std::vector<Vec2> locations_hi;
    std::vector<Vec2> locations_lo;
};

// A qualitative kind change along a surviving branch that is not a
// bifurcation (node <-> spiral as the eigenvalues collide and go complex).
struct KindTransition {
    int branch;
    double r_hi = 0.0;
    double r_lo = 0.0;
    EqKind from;
    EqKind to;
};

struct SweepOptions {
    int grid_r = 0;                  // multistart grid, 0 = cross-section default
    int grid_z = 0;
    int reseed_interval = 10;        // full-grid re-seed every this many steps
    double matching_radius = 0.25;   // nearest-neighbor branch matching
    double locate_width_rel = 1e-5;  // interval width at which events are emitted
    double refine_width_rel = 1e-7;  // default refinement target for brackets
    double newton_tol = 1e-12;
};

struct SweepResult {
    CrossSectionKind cs;
    double a_tilde = 0.0;
    std::vector<double> schedule;            // descending
    std::vector<Branch> branches;
    std::vector<BifurcationEvent> events;    // descending r_hi
    std::vector<KindTransition> transitions;

    // Equilibria of the surviving branches at the end of the schedule.
    std::vector<Equilibrium> final_equilibria() const;
};

// Descending logarithmic schedule from hi to lo with n points (inclusive).
std::vector<double> log_schedule(double hi, double lo, int n);

// Natural-parameter continuation over the descending schedule: warm-started
// Newton with periodic full-grid re-seeds, nearest-neighbor branch matching,
// interval subdivision wherever the branch set changes or matching is
// ambiguous, and bisection refinement of every detected event.
SweepResult sweep(CrossSectionKind cs, double a_tilde, const std::vector<double>& schedule,
                  const SweepOptions& opts = {});

// Re-refines an event bracket to width <= tol_r_tilde (bisection on the
// eigenvalue test function for Hopf, on the interior equilibrium count for
// folds). If the test function no longer changes sign across the bracket the
// original event is returned with a warning note.
BifurcationEvent refine_event(CrossSectionKind cs, double a_tilde, const BifurcationEvent& event,
                              double tol_r_tilde, const SweepOptions& opts = {});

struct LimitCycleOptions {
    double offset = 1e-3;          // initial radial offset from the spiral
    int max_revolutions = 500;
    double rel_tol = 1e-12;
    double abs_tol = 1e-13;
    double settle_tol = 1e-9;      // successive crossing gap that counts as settled
    double residual_tol = 1e-8;    // certification: full-state return residual
};

struct LimitCycle {
    double r_tilde = 0.0;
    Vec2 enclosed_equilibrium{};
    double period = 0.0;
    double return_residual = 0.0;
    int revolutions = 0;                      // spent settling onto the cycle
    bool encloses_only_reference = true;
    std::vector<TrajectorySample> orbit;      // one period, starting on the section
};

// Searches for an isolated periodic orbit around a spiral equilibrium by
// forward integration from a small radial offset and certification through a
// Poincare section anchored at the spiral. Returns nullopt (with a diagnostic
// when the pointer is given) if the orbit reaches a boundary, converges to a
// point, or fails to settle within the revolution budget; the drag-only
// center reports the degenerate-center diagnostic.
std::optional<LimitCycle> find_limit_cycle(const ModelParams& mp, const Equilibrium& spiral,
                                           const LimitCycleOptions& opts = {},
                                           std::string* diagnostic = nullptr);

const char* to_string(EventKind kind);
const char* to_string(PitchforkLabel label);

} // namespace zelf

#endif
