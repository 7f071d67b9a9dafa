#include "core/continuation.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>

namespace zelf {

namespace {

constexpr double k_mirror_tol = 1e-6;      // exactness of a z- (or r-) mirror pair
constexpr double k_resolve_sep = 2e-3;     // separation at which a colliding pair is resolved

struct MatchResult {
    std::vector<std::pair<int, int>> pairs;  // (active index, point index)
    std::vector<int> dead;                   // unmatched active indices
    std::vector<int> born;                   // unmatched point indices
    bool ambiguous = false;

    bool clean() const { return dead.empty() && born.empty() && !ambiguous; }
};

struct ActiveBranch {
    int id;
    Equilibrium last;
};

struct SweepState {
    CrossSectionKind cs;
    double a_tilde = 0.0;
    SweepOptions opts;
    FindOptions find_opts;
    std::vector<ActiveBranch> active;
    SweepResult result;
};

ModelParams model_at(const SweepState& s, double r_tilde) {
    return make_model(s.cs, s.a_tilde, r_tilde, /*allow_small_bend=*/true);
}

std::vector<Vec2> active_locations(const SweepState& s) {
    std::vector<Vec2> out;
    out.reserve(s.active.size());
    for (const ActiveBranch& b : s.active) out.push_back(b.last.location);
    return out;
}

EquilibriumSet solve_full(const SweepState& s, double r_tilde, std::vector<Vec2> warm) {
    FindOptions fo = s.find_opts;
    fo.extra_seeds = std::move(warm);
    return find_equilibria(model_at(s, r_tilde), fo);
}

EquilibriumSet solve_warm(const SweepState& s, double r_tilde, const std::vector<Vec2>& warm) {
    return find_from_seeds(model_at(s, r_tilde), warm, s.find_opts);
}

MatchResult match_sets(const SweepState& s, const std::vector<Equilibrium>& points) {
    MatchResult m;
    const std::size_t na = s.active.size();
    const std::size_t np = points.size();

    // The z-mirror symmetry of the model makes z = 0 invariant: branches on
    // the axis never leave it, so axis and off-axis entities never continue
    // into one another even when a pitchfork puts them arbitrarily close.
    auto on_axis = [](const Vec2& x) { return std::abs(x.z) < 1e-7; };

    struct Cand {
        double d;
        int ai, pi;
    };
    std::vector<Cand> cands;
    for (std::size_t a = 0; a < na; ++a)
        for (std::size_t p = 0; p < np; ++p) {
            const Vec2& xa = s.active[a].last.location;
            const Vec2& xp = points[p].location;
            if (on_axis(xa) != on_axis(xp)) continue;
            const double d = distance(xa, xp);
            if (d < s.opts.matching_radius) cands.push_back({d, int(a), int(p)});
        }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.d != y.d) return x.d < y.d;
        if (x.ai != y.ai) return x.ai < y.ai;
        return x.pi < y.pi;
    });

    std::vector<bool> a_used(na, false), p_used(np, false);
    for (const Cand& c : cands) {
        if (a_used[c.ai] || p_used[c.pi]) continue;
        a_used[c.ai] = true;
        p_used[c.pi] = true;
        m.pairs.push_back({c.ai, c.pi});
    }
    for (std::size_t a = 0; a < na; ++a)
        if (!a_used[a]) m.dead.push_back(int(a));
    for (std::size_t p = 0; p < np; ++p)
        if (!p_used[p]) m.born.push_back(int(p));

    // Matching is ambiguous when an unmatched entity sits inside the capture
    // radius of an already-matched one: the change cannot be attributed to a
    // single branch without a narrower interval.
    for (int p : m.born)
        for (const auto& pr : m.pairs)
            if (distance(points[p].location, s.active[pr.first].last.location) <
                s.opts.matching_radius)
                m.ambiguous = true;
    for (int a : m.dead)
        for (const auto& pr : m.pairs)
            if (distance(s.active[a].last.location, points[pr.second].location) <
                s.opts.matching_radius)
                m.ambiguous = true;
    return m;
}

bool is_hopf_pair(const Equilibrium& hi, const Equilibrium& lo) {
    const bool both_complex = !hi.real_eigenpair && !lo.real_eigenpair;
    if (!both_complex) return false;
    const double re_hi = hi.lambda1.real();
    const double re_lo = lo.lambda1.real();
    return (re_hi < 0.0 && re_lo > 0.0) || (re_hi > 0.0 && re_lo < 0.0) ||
           (re_hi != 0.0 && re_lo == 0.0) || (re_hi == 0.0 && re_lo != 0.0);
}

// A matched pair whose stability class flips with a real eigenvalue involved
// marks an unresolved event inside the interval (branch matching silently
// reconnected across it); such intervals are subdivided like count changes.
bool implausible_kind_change(const Equilibrium& hi, const Equilibrium& lo) {
    if (hi.kind == lo.kind) return false;
    if (hi.kind == EqKind::Degenerate || lo.kind == EqKind::Degenerate) return false;
    if (!hi.real_eigenpair && !lo.real_eigenpair) return false;   // Hopf handles these
    auto cls = [](EqKind k) {
        switch (k) {
            case EqKind::StableNode:
            case EqKind::StableSpiral: return 0;
            case EqKind::UnstableNode:
            case EqKind::UnstableSpiral: return 1;
            default: return 2;
        }
    };
    return cls(hi.kind) != cls(lo.kind);
}

// ---- event refinement -------------------------------------------------------

int interior_count(const SweepState& s, double r_tilde, const std::vector<Vec2>& warm) {
    return int(solve_full(s, r_tilde, warm).points.size());
}

void refine_fold(SweepState& s, BifurcationEvent& ev, double tol) {
    std::vector<Vec2> warm = ev.locations_hi;
    warm.insert(warm.end(), ev.locations_lo.begin(), ev.locations_lo.end());
    const int count_hi = interior_count(s, ev.r_hi, warm);
    const int count_lo = interior_count(s, ev.r_lo, warm);
    if (count_hi == count_lo) {
        ev.note = "refinement warning: equilibrium count does not change across the bracket";
        return;
    }
    double hi = ev.r_hi, lo = ev.r_lo;
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = std::sqrt(hi * lo);
        if (interior_count(s, mid, warm) == count_hi)
            hi = mid;
        else
            lo = mid;
    }
    ev.r_hi = hi;
    ev.r_lo = lo;
    ev.refined = true;
}

void refine_hopf(SweepState& s, BifurcationEvent& ev, double tol) {
    // Track the spiral by warm-started Newton from the bracket-end location.
    Vec2 loc = ev.locations_hi.empty() ? ev.location_hint : ev.locations_hi.front();
    auto re_at = [&](double r_tilde, Vec2& seed) -> double {
        auto eq = solve_from_seed(model_at(s, r_tilde), seed, s.find_opts);
        if (!eq || eq->real_eigenpair)
            throw numerical_error("lost the spiral while refining a Hopf bracket");
        seed = eq->location;
        return eq->lambda1.real();
    };
    Vec2 seed_hi = loc, seed_lo = loc;
    const double re_hi = re_at(ev.r_hi, seed_hi);
    const double re_lo = re_at(ev.r_lo, seed_lo);
    if (!((re_hi < 0.0) != (re_lo < 0.0))) {
        ev.note = "refinement warning: eigenvalue real part does not change sign across the bracket";
        return;
    }
    double hi = ev.r_hi, lo = ev.r_lo;
    Vec2 seed = seed_hi;
    for (int it = 0; it < 200 && (hi - lo) > tol; ++it) {
        const double mid = std::sqrt(hi * lo);
        const double re_mid = re_at(mid, seed);
        if ((re_mid < 0.0) == (re_hi < 0.0))
            hi = mid;
        else
            lo = mid;
    }
    ev.r_hi = hi;
    ev.r_lo = lo;
    ev.refined = true;
}

// Pitchforks refine on the determinant of the surviving on-axis parent: its
// symmetry-breaking eigenvalue crosses zero exactly at the event, and Newton
// seeded exactly on the symmetry axis stays there (the parity is bit-exact),
// immune to the unresolvable root valley around the event. The raw bracket
// comes from a count transition that the valley can displace slightly, so it
// is expanded first until the determinant changes sign across it.
void refine_pitchfork(SweepState& s, BifurcationEvent& ev, double tol) {
    const bool z_axis = ev.z_mirror_axis;
    Vec2 seed = z_axis ? Vec2{ev.location_hint.r, 0.0} : Vec2{0.0, ev.location_hint.z};
    bool lost = false;
    auto det_at = [&](double r_tilde) -> double {
        auto eq = solve_from_seed(model_at(s, r_tilde), seed, s.find_opts);
        if (!eq) {
            lost = true;
            return 0.0;
        }
        seed = z_axis ? Vec2{eq->location.r, 0.0} : Vec2{0.0, eq->location.z};
        return eq->jac.det();
    };

    double hi = ev.r_hi, lo = ev.r_lo;
    double det_hi = det_at(hi);
    double det_lo = det_at(lo);
    // The detected bracket marks where the newborn pair became resolvable,
    // which can sit slightly off the determinant crossing; widen until the
    // sign change is captured.
    for (int k = 0; k < 14 && !lost && (det_hi < 0.0) == (det_lo < 0.0); ++k) {
        const double width = std::max(hi - lo, 1e-4 * hi);
        hi = hi + width;
        lo = std::max(lo - width, lo * 0.5);
        det_hi = det_at(hi);
        det_lo = det_at(lo);
    }
    if (lost || (det_hi < 0.0) == (det_lo < 0.0)) {
        ev.note = lost ? "refinement warning: lost the pitchfork parent near the bracket"
                       : "refinement warning: parent determinant does not change sign near "
                         "the bracket";
        return;
    }
    for (int it = 0; it < 200 && !lost && (hi - lo) > tol; ++it) {
        const double mid = std::sqrt(hi * lo);
        if ((det_at(mid) < 0.0) == (det_hi < 0.0))
            hi = mid;
        else
            lo = mid;
    }
    if (lost) {
        ev.note = "refinement warning: lost the pitchfork parent during bisection";
        return;
    }
    ev.r_hi = hi;
    ev.r_lo = lo;
    ev.refined = true;
}

void refine_in_place(SweepState& s, BifurcationEvent& ev, double tol) {
    if (ev.kind == EventKind::Hopf)
        refine_hopf(s, ev, tol);
    else if (ev.kind == EventKind::Pitchfork)
        refine_pitchfork(s, ev, tol);
    else
        refine_fold(s, ev, tol);
}

// ---- commit / emit -----------------------------------------------------------

void commit_interval(SweepState& s, double r_hi, double r_lo,
                     const std::vector<Equilibrium>& points, const MatchResult& m,
                     const std::set<int>& event_participants,
                     const std::vector<std::pair<int, int>>& born_events,
                     const std::vector<std::pair<int, int>>& dead_events) {
    std::vector<ActiveBranch> next;

    for (const auto& [ai, pi] : m.pairs) {
        ActiveBranch b = s.active[ai];
        const Equilibrium& before = b.last;
        const Equilibrium& after = points[pi];

        if (is_hopf_pair(before, after)) {
            BifurcationEvent ev;
            ev.kind = EventKind::Hopf;
            ev.r_hi = r_hi;
            ev.r_lo = r_lo;
            ev.branches = {b.id};
            ev.location_hint = after.location;
            ev.locations_hi = {before.location};
            ev.locations_lo = {after.location};
            refine_in_place(s, ev, std::max(s.opts.refine_width_rel * r_hi, 1e-9));
            s.result.events.push_back(ev);
        } else if (before.kind != after.kind && event_participants.count(b.id) == 0) {
            s.result.transitions.push_back({b.id, r_hi, r_lo, before.kind, after.kind});
        }

        b.last = after;
        s.result.branches[b.id].samples.push_back({r_lo, after});
        next.push_back(b);
    }

    for (std::size_t bi = 0; bi < m.born.size(); ++bi) {
        const Equilibrium& eq = points[m.born[bi]];
        Branch br;
        br.id = int(s.result.branches.size());
        for (const auto& [idx, ev] : born_events)
            if (idx == int(bi)) br.birth_event = ev;
        br.samples.push_back({r_lo, eq});
        s.result.branches.push_back(br);
        next.push_back({br.id, eq});
    }

    for (std::size_t di = 0; di < m.dead.size(); ++di) {
        const int id = s.active[m.dead[di]].id;
        for (const auto& [idx, ev] : dead_events)
            if (idx == int(di)) s.result.branches[id].death_event = ev;
    }

    std::sort(next.begin(), next.end(),
              [](const ActiveBranch& a, const ActiveBranch& b) { return a.id < b.id; });
    s.active = std::move(next);
}

// Groups indices into clusters of mutual proximity (single-linkage).
std::vector<std::vector<int>> cluster_by_distance(const std::vector<int>& ids,
                                                  const std::vector<Vec2>& locs, double radius) {
    std::vector<std::vector<int>> clusters;
    std::vector<bool> used(ids.size(), false);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (used[i]) continue;
        std::vector<int> cluster{int(i)};
        used[i] = true;
        for (std::size_t n = 0; n < cluster.size(); ++n)
            for (std::size_t j = 0; j < ids.size(); ++j)
                if (!used[j] && distance(locs[cluster[n]], locs[j]) < radius) {
                    used[j] = true;
                    cluster.push_back(int(j));
                }
        for (int& c : cluster) c = ids[c];
        clusters.push_back(cluster);
    }
    return clusters;
}

// Emits raw fold events for the set change across a bottom interval and
// commits it. Classification (pitchfork vs saddle-node, labels) happens in
// the finalize pass with the full branch histories at hand.
void emit_and_commit(SweepState& s, double r_hi, double r_lo,
                     const std::vector<Equilibrium>& points, const MatchResult& m,
                     bool still_wide) {
    std::set<int> participants;
    std::vector<std::pair<int, int>> born_events, dead_events;

    std::vector<Vec2> dead_locs, born_locs;
    for (int a : m.dead) dead_locs.push_back(s.active[a].last.location);
    for (int p : m.born) born_locs.push_back(points[p].location);

    auto emit_cluster = [&](const std::vector<int>& cluster, bool dying) {
        const auto& locs = dying ? dead_locs : born_locs;
        const auto& order = dying ? m.dead : m.born;
        std::vector<int> pos;   // positions within m.dead / m.born
        for (int raw : cluster)
            for (std::size_t i = 0; i < order.size(); ++i)
                if (order[i] == raw) pos.push_back(int(i));

        BifurcationEvent ev;
        ev.kind = EventKind::SaddleNode;   // provisional; classified in finalize
        ev.r_hi = r_hi;
        ev.r_lo = r_lo;
        Vec2 mean{0.0, 0.0};
        for (int i : pos) mean = mean + locs[i];
        mean = mean * (1.0 / double(pos.size()));
        ev.location_hint = mean;
        if (still_wide) {
            ev.ambiguous = true;
            ev.note = "bracket not localized to the target width";
        }

        for (int i : pos) {
            if (dying) {
                const int id = s.active[order[i]].id;
                ev.branches.push_back(id);
                ev.died.push_back(id);
                participants.insert(id);
                ev.locations_hi.push_back(locs[i]);
                dead_events.push_back({i, int(s.result.events.size())});
            } else {
                const int id = int(s.result.branches.size()) + i;
                ev.branches.push_back(id);
                ev.born.push_back(id);
                ev.locations_lo.push_back(locs[i]);
                born_events.push_back({i, int(s.result.events.size())});
            }
        }
        s.result.events.push_back(ev);
    };

    for (const auto& cluster : cluster_by_distance(m.dead, dead_locs, s.opts.matching_radius))
        emit_cluster(cluster, true);
    for (const auto& cluster : cluster_by_distance(m.born, born_locs, s.opts.matching_radius))
        emit_cluster(cluster, false);

    commit_interval(s, r_hi, r_lo, points, m, participants, born_events, dead_events);
}

void process_interval(SweepState& s, double r_hi, double r_lo, const EquilibriumSet& set_lo,
                      int depth) {
    const MatchResult m = match_sets(s, set_lo.points);
    bool needs_split = !m.clean();
    if (!needs_split) {
        for (const auto& [ai, pi] : m.pairs)
            if (implausible_kind_change(s.active[ai].last, set_lo.points[pi])) needs_split = true;
    }
    if (!needs_split) {
        commit_interval(s, r_hi, r_lo, set_lo.points, m, {}, {}, {});
        return;
    }
    const bool narrow = (r_hi - r_lo) <= std::max(s.opts.locate_width_rel * r_hi, 1e-12);
    if (narrow || depth > 80) {
        emit_and_commit(s, r_hi, r_lo, set_lo.points, m, depth > 80 && !narrow);
        return;
    }
    const double r_mid = std::sqrt(r_hi * r_lo);
    std::vector<Vec2> warm = active_locations(s);
    for (const Equilibrium& eq : set_lo.points) warm.push_back(eq.location);
    const EquilibriumSet set_mid = solve_full(s, r_mid, warm);
    process_interval(s, r_hi, r_mid, set_mid, depth + 1);

    std::vector<Vec2> warm2 = active_locations(s);
    for (const Equilibrium& eq : set_lo.points) warm2.push_back(eq.location);
    const EquilibriumSet set_lo2 = solve_full(s, r_lo, warm2);
    process_interval(s, r_mid, r_lo, set_lo2, depth + 1);
}

// ---- finalize: merge fragments, classify folds, refine -------------------------

// Location and kind of a branch at the sample nearest the event on its
// existence side, walked away from the event until the pair separates.
struct ResolvedPair {
    Vec2 loc[2];
    EqKind kind[2];
    bool ok = false;
};

ResolvedPair resolve_pair(const SweepState& s, int id_a, int id_b, bool dying) {
    const Branch& ba = s.result.branches[id_a];
    const Branch& bb = s.result.branches[id_b];
    ResolvedPair out;

    std::map<double, const BranchSample*> by_r;
    for (const BranchSample& sm : bb.samples) by_r[sm.r_tilde] = &sm;

    // Dying branches: walk backward from the end (toward larger r_tilde);
    // born ones: forward from the start (toward smaller r_tilde). Keep walking
    // past samples still inside the classification degeneracy band so the
    // super/subcritical label reads settled kinds.
    const auto& sa = ba.samples;
    const int n = int(sa.size());
    bool have_fallback = false;
    for (int k = 0; k < n; ++k) {
        const BranchSample& cand = dying ? sa[n - 1 - k] : sa[k];
        auto it = by_r.find(cand.r_tilde);
        if (it == by_r.end()) continue;
        if (distance(cand.eq.location, it->second->eq.location) <= k_resolve_sep) continue;
        const bool degenerate =
            cand.eq.kind == EqKind::Degenerate || it->second->eq.kind == EqKind::Degenerate;
        if (!have_fallback || !degenerate) {
            out.loc[0] = cand.eq.location;
            out.kind[0] = cand.eq.kind;
            out.loc[1] = it->second->eq.location;
            out.kind[1] = it->second->eq.kind;
            out.ok = true;
            have_fallback = true;
        }
        if (!degenerate) return out;
    }
    return out;
}

bool is_mirror_pair(const Vec2& a, const Vec2& b) {
    const bool z_mirror = std::abs(a.r - b.r) < 1e-3 && std::abs(a.z + b.z) < k_mirror_tol &&
                          std::abs(a.z - b.z) > 10.0 * k_mirror_tol;
    const bool r_mirror = std::abs(a.z - b.z) < 1e-3 && std::abs(a.r + b.r) < k_mirror_tol &&
                          std::abs(a.r - b.r) > 10.0 * k_mirror_tol;
    return z_mirror || r_mirror;
}

bool kind_is_stable(EqKind k) { return k == EqKind::StableNode || k == EqKind::StableSpiral; }

// A pitchfork needs a branch that survives the event on the symmetry axis.
// Among candidates, the one whose kind flips across the bracket (its
// symmetry-breaking eigenvalue crosses zero there) is the parent.
int find_parent_branch(const SweepState& s, const BifurcationEvent& ev, bool z_mirror) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    bool best_flips = false;
    for (const Branch& br : s.result.branches) {
        if (br.samples.empty()) continue;
        if (!(br.samples.front().r_tilde >= ev.r_hi && br.samples.back().r_tilde <= ev.r_lo))
            continue;
        const BranchSample* above = nullptr;   // nearest sample at r >= r_hi
        const BranchSample* below = nullptr;   // nearest sample at r <= r_lo
        for (const BranchSample& sm : br.samples) {
            if (sm.r_tilde >= ev.r_hi) above = &sm;
            if (below == nullptr && sm.r_tilde <= ev.r_lo) below = &sm;
        }
        if (above == nullptr || below == nullptr) continue;
        const double d = distance(below->eq.location, ev.location_hint);
        if (d > s.opts.matching_radius) continue;
        const double off_axis =
            z_mirror ? std::abs(below->eq.location.z) : std::abs(below->eq.location.r);
        if (off_axis > 1e-5) continue;
        const bool flips = above->eq.kind != below->eq.kind;
        if ((flips && !best_flips) || (flips == best_flips && d < best_d)) {
            best = br.id;
            best_d = d;
            best_flips = flips;
        }
    }
    return best;
}

void classify_fold(SweepState& s, BifurcationEvent& ev) {
    if (ev.kind == EventKind::Hopf) return;
    const bool dying = !ev.died.empty();
    const std::vector<int>& ids = dying ? ev.died : ev.born;
    if (!ev.born.empty() && !ev.died.empty()) {
        ev.ambiguous = true;
        ev.note = "composite event: branches both appear and end in one bracket";
        return;
    }
    if (ids.size() != 2) {
        ev.ambiguous = true;
        if (ev.note.empty())
            ev.note = "unresolved set change: " + std::to_string(ids.size()) +
                      " branch(es) changed without a pairing";
        return;
    }

    const ResolvedPair rp = resolve_pair(s, ids[0], ids[1], dying);
    if (!rp.ok) {
        ev.ambiguous = true;
        ev.note = "participants never separate beyond the resolution floor";
        return;
    }

    if (is_mirror_pair(rp.loc[0], rp.loc[1])) {
        const bool z_mirror = std::abs(rp.loc[0].z + rp.loc[1].z) < k_mirror_tol;
        const int parent = find_parent_branch(s, ev, z_mirror);
        if (parent >= 0) {
            ev.z_mirror_axis = z_mirror;
            ev.kind = EventKind::Pitchfork;
            ev.label = (kind_is_stable(rp.kind[0]) && kind_is_stable(rp.kind[1]))
                           ? PitchforkLabel::Supercritical
                           : PitchforkLabel::Subcritical;
            if (std::find(ev.branches.begin(), ev.branches.end(), parent) == ev.branches.end())
                ev.branches.push_back(parent);
            ev.ambiguous = false;
            return;
        }
    }
    ev.kind = EventKind::SaddleNode;
    ev.ambiguous = false;
}

// Fold events that are fragments of one collision (split at the numerical
// resolution floor) are merged back together before classification.
void finalize_events(SweepState& s) {
    std::vector<BifurcationEvent>& evs = s.result.events;
    std::vector<int> target(evs.size(), -1);
    std::vector<BifurcationEvent> merged;

    auto mergeable = [&](const BifurcationEvent& a, const BifurcationEvent& b) {
        if (a.kind == EventKind::Hopf || b.kind == EventKind::Hopf) return false;
        if (!((a.born.empty() && b.born.empty()) || (a.died.empty() && b.died.empty())))
            return false;
        if (a.died.size() + a.born.size() >= 2 && b.died.size() + b.born.size() >= 2) return false;
        if (distance(a.location_hint, b.location_hint) > 0.05) return false;
        // Fragments of one collision sit within the root-resolution window;
        // distinct events can be only a few steps apart, so keep this tight.
        const double gap = std::max(0.0, std::max(a.r_lo, b.r_lo) - std::min(a.r_hi, b.r_hi));
        return gap <= 5e-5 * std::max(a.r_hi, b.r_hi);
    };

    for (std::size_t i = 0; i < evs.size(); ++i) {
        bool absorbed = false;
        for (std::size_t j = 0; j < merged.size() && !absorbed; ++j) {
            if (mergeable(merged[j], evs[i])) {
                BifurcationEvent& t = merged[j];
                t.r_hi = std::max(t.r_hi, evs[i].r_hi);
                t.r_lo = std::min(t.r_lo, evs[i].r_lo);
                t.branches.insert(t.branches.end(), evs[i].branches.begin(), evs[i].branches.end());
                t.died.insert(t.died.end(), evs[i].died.begin(), evs[i].died.end());
                t.born.insert(t.born.end(), evs[i].born.begin(), evs[i].born.end());
                t.locations_hi.insert(t.locations_hi.end(), evs[i].locations_hi.begin(),
                                      evs[i].locations_hi.end());
                t.locations_lo.insert(t.locations_lo.end(), evs[i].locations_lo.begin(),
                                      evs[i].locations_lo.end());
                target[i] = int(j);
                absorbed = true;
            }
        }
        if (!absorbed) {
            target[i] = int(merged.size());
            merged.push_back(evs[i]);
        }
    }
    for (Branch& br : s.result.branches) {
        if (br.birth_event >= 0) br.birth_event = target[br.birth_event];
        if (br.death_event >= 0) br.death_event = target[br.death_event];
    }
    evs = std::move(merged);

    // A branch pair that appears and disappears within the resolution window
    // around an event is a phantom of the unresolvable root valley, not a
    // bifurcation; drop the birth/death pair it generated.
    {
        std::vector<bool> drop(evs.size(), false);
        for (std::size_t i = 0; i < evs.size(); ++i) {
            if (drop[i] || evs[i].kind == EventKind::Hopf || evs[i].born.empty() ||
                !evs[i].died.empty())
                continue;
            std::vector<int> born = evs[i].born;
            std::sort(born.begin(), born.end());
            for (std::size_t j = 0; j < evs.size(); ++j) {
                if (i == j || drop[j] || evs[j].kind == EventKind::Hopf || evs[j].died.empty() ||
                    !evs[j].born.empty())
                    continue;
                std::vector<int> died = evs[j].died;
                std::sort(died.begin(), died.end());
                if (born != died) continue;
                if (std::abs(evs[i].r_hi - evs[j].r_hi) > 2e-3 * evs[i].r_hi) continue;
                drop[i] = drop[j] = true;
                for (int id : born) {
                    s.result.branches[id].birth_event = -1;
                    s.result.branches[id].death_event = -1;
                }
                break;
            }
        }
        std::vector<int> shift(evs.size());
        std::vector<BifurcationEvent> kept;
        for (std::size_t i = 0; i < evs.size(); ++i) {
            shift[i] = int(kept.size());
            if (!drop[i]) kept.push_back(evs[i]);
        }
        for (Branch& br : s.result.branches) {
            if (br.birth_event >= 0) br.birth_event = drop[br.birth_event] ? -1 : shift[br.birth_event];
            if (br.death_event >= 0) br.death_event = drop[br.death_event] ? -1 : shift[br.death_event];
        }
        evs = std::move(kept);
    }

    for (BifurcationEvent& ev : evs) {
        if (ev.kind == EventKind::Hopf) continue;
        classify_fold(s, ev);
        if (!ev.ambiguous && !ev.refined) {
            try {
                refine_in_place(s, ev, std::max(s.opts.refine_width_rel * ev.r_hi, 1e-9));
            } catch (const numerical_error& e) {
                ev.note = std::string("refinement warning: ") + e.what();
            }
        }
    }

    // Sort by descending bracket and remap the branch event links once more.
    std::vector<int> order(evs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return evs[a].r_hi > evs[b].r_hi; });
    std::vector<int> remap(order.size());
    std::vector<BifurcationEvent> sorted;
    sorted.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        remap[order[i]] = int(i);
        sorted.push_back(evs[order[i]]);
    }
    evs = std::move(sorted);
    for (Branch& br : s.result.branches) {
        if (br.birth_event >= 0) br.birth_event = remap[br.birth_event];
        if (br.death_event >= 0) br.death_event = remap[br.death_event];
    }
}

} // namespace

std::vector<double> log_schedule(double hi, double lo, int n) {
    if (!(hi > lo) || !(lo > 0.0)) throw std::invalid_argument("need hi > lo > 0");
    if (n < 2) throw std::invalid_argument("schedule needs at least two points");
    std::vector<double> out(n);
    const double lh = std::log(hi), ll = std::log(lo);
    for (int i = 0; i < n; ++i) out[i] = std::exp(lh + (ll - lh) * i / (n - 1));
    out.front() = hi;
    out.back() = lo;
    return out;
}

SweepResult sweep(CrossSectionKind cs, double a_tilde, const std::vector<double>& schedule,
                  const SweepOptions& opts) {
    if (schedule.size() < 2) throw std::invalid_argument("schedule needs at least two points");
    for (std::size_t i = 1; i < schedule.size(); ++i)
        if (!(schedule[i] < schedule[i - 1]))
            throw std::invalid_argument("schedule must be strictly descending");
    if (!(schedule.front() <= 1e9)) throw std::invalid_argument("schedule exceeds R-tilde = 1e9");
    const CrossSection section = cross_section(cs);
    if (!(schedule.back() >= section.min_bend_radius))
        throw std::invalid_argument("schedule extends below the minimum bend radius");
    if (!(a_tilde > 0.0)) throw std::invalid_argument("a-tilde must be positive");

    SweepState s;
    s.cs = cs;
    s.a_tilde = a_tilde;
    s.opts = opts;
    s.find_opts.grid_r = opts.grid_r;
    s.find_opts.grid_z = opts.grid_z;
    s.find_opts.newton_tol = opts.newton_tol;
    s.result.cs = cs;
    s.result.a_tilde = a_tilde;
    s.result.schedule = schedule;

    const EquilibriumSet first = solve_full(s, schedule.front(), {});
    for (const Equilibrium& eq : first.points) {
        Branch br;
        br.id = int(s.result.branches.size());
        br.samples.push_back({schedule.front(), eq});
        s.result.branches.push_back(br);
        s.active.push_back({br.id, eq});
    }

    for (std::size_t k = 1; k < schedule.size(); ++k) {
        const double r_hi = schedule[k - 1];
        const double r_lo = schedule[k];
        const bool full = (k % std::max(1, s.opts.reseed_interval)) == 0;
        const std::vector<Vec2> warm = active_locations(s);
        const EquilibriumSet set_lo = full ? solve_full(s, r_lo, warm) : solve_warm(s, r_lo, warm);
        process_interval(s, r_hi, r_lo, set_lo, 0);
    }

    finalize_events(s);
    return s.result;
}

BifurcationEvent refine_event(CrossSectionKind cs, double a_tilde, const BifurcationEvent& event,
                              double tol_r_tilde, const SweepOptions& opts) {
    SweepState s;
    s.cs = cs;
    s.a_tilde = a_tilde;
    s.opts = opts;
    s.find_opts.grid_r = opts.grid_r;
    s.find_opts.grid_z = opts.grid_z;
    s.find_opts.newton_tol = opts.newton_tol;

    BifurcationEvent ev = event;
    ev.note.clear();
    refine_in_place(s, ev, tol_r_tilde);
    return ev;
}

std::vector<Equilibrium> SweepResult::final_equilibria() const {
    std::vector<Equilibrium> out;
    const double r_end = schedule.back();
    for (const Branch& br : branches) {
        if (br.samples.empty()) continue;
        const BranchSample& last = br.samples.back();
        if (last.r_tilde <= r_end * (1.0 + 1e-12)) out.push_back(last.eq);
    }
    std::sort(out.begin(), out.end(), [](const Equilibrium& a, const Equilibrium& b) {
        if (a.location.r != b.location.r) return a.location.r < b.location.r;
        return a.location.z < b.location.z;
    });
    return out;
}

// ---- limit cycles ------------------------------------------------------------

std::optional<LimitCycle> find_limit_cycle(const ModelParams& mp, const Equilibrium& spiral,
                                           const LimitCycleOptions& opts, std::string* diagnostic) {
    auto fail = [&](const std::string& why) -> std::optional<LimitCycle> {
        if (diagnostic) *diagnostic = why;
        return std::nullopt;
    };

    if (mp.mode == ForceMode::DragOnly && spiral.kind == EqKind::Center)
        return fail("degenerate center: the conserved drag-only flow carries a continuum of "
                    "closed orbits, no isolated cycle");
    if (spiral.kind != EqKind::StableSpiral && spiral.kind != EqKind::UnstableSpiral)
        throw std::invalid_argument("limit-cycle search requires a spiral equilibrium");

    const Vec2 center = spiral.location;
    const double im = std::abs(spiral.lambda1.imag());
    if (!(im > 0.0)) throw std::invalid_argument("spiral has no rotation");
    const double period_est = 2.0 * std::numbers::pi / im;

    double dir = 1.0;
    if (center.r + opts.offset >= mp.cs.half_width) dir = -1.0;
    Vec2 start{center.r + dir * opts.offset, center.z};

    auto locate_crossing = [&](const AdaptiveStepper& st_prev, double h, Vec2& x_out,
                               double& dt_out) {
        double lo = 0.0, hi = h;
        Vec2 x_hi = st_prev.probe(h);
        for (int i = 0; i < 90; ++i) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            const Vec2 xm = st_prev.probe(mid);
            if (((st_prev.y().z - center.z) < 0.0) == ((xm.z - center.z) < 0.0))
                lo = mid;
            else {
                hi = mid;
                x_hi = xm;
            }
        }
        x_out = x_hi;
        dt_out = hi;
    };

    struct Crossing {
        double s;
        Vec2 state;
        double t;
    };

    const double t_budget = 3.0 * (opts.max_revolutions + 10) * period_est;
    AdaptiveStepper st(mp, start, opts.rel_tol, opts.abs_tol);

    int crossing_sign = 0;
    std::vector<double> recent;
    Crossing last_crossing{0.0, start, 0.0};
    bool have_crossing = false;
    int revolutions = 0;
    int jumps = 0;
    bool settled = false;

    while (!settled) {
        const Vec2 y_prev = st.y();
        const double t_prev = st.t();
        if (st.f().norm() < 1e-12)
            return fail("trajectory converged to a point before settling on a cycle");
        if (t_prev > t_budget || revolutions > opts.max_revolutions)
            return fail("no cycle within the revolution budget (" +
                        std::to_string(opts.max_revolutions) + " revolutions)");
        st.advance();
        const Vec2 y_new = st.y();
        if (!mp.cs.contains(y_new.r, y_new.z))
            return fail("orbit reached the domain boundary");

        const double dz_prev = y_prev.z - center.z;
        const double dz_new = y_new.z - center.z;
        if (dz_prev == 0.0 || (dz_prev < 0.0) == (dz_new < 0.0)) continue;

        AdaptiveStepper sub(mp, y_prev, opts.rel_tol, opts.abs_tol, st.t() - t_prev);
        Vec2 x_c;
        double dt = 0.0;
        locate_crossing(sub, st.t() - t_prev, x_c, dt);
        if (!(x_c.r > center.r + 1e-9)) continue;

        const int sgn = dz_new > dz_prev ? 1 : -1;
        if (crossing_sign == 0) crossing_sign = sgn;
        if (sgn != crossing_sign) continue;

        const double s = x_c.r - center.r;
        ++revolutions;
        if (s < 0.25 * opts.offset)
            return fail("orbit spirals inward toward the equilibrium; no encompassing cycle");

        if (have_crossing) {
            const double ds = std::abs(s - last_crossing.s);
            if (ds < opts.settle_tol && revolutions >= 2) {
                last_crossing = {s, x_c, t_prev + dt};
                settled = true;
                break;
            }
        }
        recent.push_back(s);
        last_crossing = {s, x_c, t_prev + dt};
        have_crossing = true;

        // Aitken extrapolation of the return map accelerates weakly
        // contracting cycles well past plain iteration.
        if (recent.size() >= 3 && jumps < 50) {
            const double s1 = recent[recent.size() - 3];
            const double s2 = recent[recent.size() - 2];
            const double s3 = recent[recent.size() - 1];
            const double d1 = s2 - s1, d2 = s3 - s2;
            const double denom = d2 - d1;
            if (std::abs(d2) < std::abs(d1) && std::abs(denom) > 1e-300) {
                const double s_star = s3 - d2 * d2 / denom;
                if (std::isfinite(s_star) && s_star > 0.25 * opts.offset &&
                    center.r + s_star < mp.cs.half_width &&
                    std::abs(s_star - s3) < std::max(0.2 * std::abs(s3), 0.05)) {
                    st = AdaptiveStepper(mp, {center.r + s_star, center.z}, opts.rel_tol,
                                         opts.abs_tol);
                    recent.clear();
                    have_crossing = false;
                    ++jumps;
                }
            }
        }
    }

    // Certification: one full revolution from the settled crossing.
    LimitCycle cycle;
    cycle.r_tilde = mp.r_tilde;
    cycle.enclosed_equilibrium = center;
    cycle.revolutions = revolutions;

    AdaptiveStepper st2(mp, last_crossing.state, opts.rel_tol, opts.abs_tol);
    cycle.orbit.push_back({0.0, last_crossing.state.r, last_crossing.state.z});
    bool closed = false;
    while (!closed) {
        const Vec2 y_prev = st2.y();
        const double t_prev = st2.t();
        if (t_prev > 12.0 * period_est)
            return fail("certification loop did not return to the section");
        st2.advance();
        const Vec2 y_new = st2.y();
        if (!mp.cs.contains(y_new.r, y_new.z))
            return fail("certification loop reached the domain boundary");
        cycle.orbit.push_back({st2.t(), y_new.r, y_new.z});

        const double dz_prev = y_prev.z - center.z;
        const double dz_new = y_new.z - center.z;
        if (dz_prev == 0.0 || (dz_prev < 0.0) == (dz_new < 0.0)) continue;
        const int sgn = dz_new > dz_prev ? 1 : -1;
        if (sgn != crossing_sign) continue;

        AdaptiveStepper sub(mp, y_prev, opts.rel_tol, opts.abs_tol, st2.t() - t_prev);
        Vec2 x_c;
        double dt = 0.0;
        locate_crossing(sub, st2.t() - t_prev, x_c, dt);
        if (!(x_c.r > center.r + 1e-9)) continue;

        cycle.period = t_prev + dt;
        cycle.return_residual = (x_c - last_crossing.state).norm();
        cycle.orbit.back() = {cycle.period, x_c.r, x_c.z};
        closed = true;
    }

    if (cycle.return_residual > opts.residual_tol)
        return fail("return residual " + std::to_string(cycle.return_residual) +
                    " exceeds the certification tolerance");

    auto winding = [&](const Vec2& p) {
        double total = 0.0;
        for (std::size_t i = 1; i < cycle.orbit.size(); ++i) {
            const Vec2 a{cycle.orbit[i - 1].r - p.r, cycle.orbit[i - 1].z - p.z};
            const Vec2 b{cycle.orbit[i].r - p.r, cycle.orbit[i].z - p.z};
            total += std::atan2(a.cross(b), a.dot(b));
        }
        return total / (2.0 * std::numbers::pi);
    };
    if (std::abs(std::abs(winding(center)) - 1.0) > 0.1)
        return fail("certified orbit does not enclose the referenced equilibrium");
    const EquilibriumSet all = find_equilibria(mp);
    for (const Equilibrium& eq : all.points) {
        if (distance(eq.location, center) < 1e-6) continue;
        if (std::abs(winding(eq.location)) > 0.5) cycle.encloses_only_reference = false;
    }
    return cycle;
}

const char* to_string(EventKind kind) {
    switch (kind) {
        case EventKind::SaddleNode: return "saddle_node";
        case EventKind::Pitchfork: return "pitchfork";
        case EventKind::Hopf: return "hopf";
    }
    return "unknown";
}

const char* to_string(PitchforkLabel label) {
    switch (label) {
        case PitchforkLabel::None: return "none";
        case PitchforkLabel::Supercritical: return "supercritical";
        case PitchforkLabel::Subcritical: return "subcritical";
    }
    return "unknown";
}

} // namespace zelf
