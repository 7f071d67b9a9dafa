#include "core/equilibria.hpp"

#include "core/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace zelf {

namespace {

// The nine large-bend-radius equilibria of the 2x1 lift fit; always worth
// seeding since the full-model branches stay near them at large R-tilde.
const Vec2 k_lift_points_2x1[] = {
    {0.0, 0.0},   {0.0, 0.6},    {0.0, -0.6},   {1.58, 0.0},    {-1.58, 0.0},
    {1.5303, 0.4094}, {1.5303, -0.4094}, {-1.5303, 0.4094}, {-1.5303, -0.4094},
};

std::vector<Vec2> known_seeds(const CrossSection& cs) {
    std::vector<Vec2> seeds;
    for (const Vec2& p : k_lift_points_2x1)
        seeds.push_back(cs.kind == CrossSectionKind::Rect2x1 ? p : Vec2{p.z, p.r});
    // Drag-only centers on the r = 0 axis.
    const double zc = (cs.kind == CrossSectionKind::Rect2x1 ? 1.0 : 2.0) / std::sqrt(5.0);
    seeds.push_back({0.0, zc});
    seeds.push_back({0.0, -zc});
    return seeds;
}

bool inside_search_box(const CrossSection& cs, const Vec2& x) {
    return std::abs(x.r) <= 1.25 * cs.half_width && std::abs(x.z) <= 1.25 * cs.half_height;
}

} // namespace

std::optional<Equilibrium> solve_from_seed(const ModelParams& mp, Vec2 seed,
                                           const FindOptions& opts) {
    Vec2 x = seed;
    // The z-mirror parity makes z = 0 invariant under Newton; keeping
    // near-axis seeds exactly on it avoids wandering inside the flat
    // transverse valley next to a pitchfork.
    if (std::abs(x.z) < 1e-9) x.z = 0.0;
    Vec2 f = rhs_unchecked(mp, x.r, x.z);
    double fnorm = f.norm();

    for (int it = 0; it < opts.max_iterations && fnorm >= opts.newton_tol; ++it) {
        const Mat2 j = rhs_jacobian_unchecked(mp, x.r, x.z);
        Vec2 delta;
        if (!solve2(j, -1.0 * f, delta)) return std::nullopt;

        // Backtracking line search on |rhs|^2, clipped to the search box so
        // the exponentials in the lift fit stay bounded.
        double step = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 40; ++bt) {
            const Vec2 trial = x + step * delta;
            if (inside_search_box(mp.cs, trial)) {
                const Vec2 ft = rhs_unchecked(mp, trial.r, trial.z);
                const double fn = ft.norm();
                if (std::isfinite(fn) && fn < fnorm * (1.0 - 1e-4 * step) + 1e-300) {
                    x = trial;
                    f = ft;
                    fnorm = fn;
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!moved) return std::nullopt;
    }
    if (!(fnorm < opts.newton_tol)) return std::nullopt;

    // Keep polishing well past the acceptance threshold. This drives genuine
    // roots to the floating-point floor (the |rhs| test alone can leave them
    // orders above roundoff when the Jacobian is small), and it slides
    // pseudo-converged points out of the flat spots where |rhs| dips under
    // the tolerance without a zero: candidates in the drag layer along the
    // walls migrate onto the wall (and into the margin filter), candidates in
    // the soft valley around a pitchfork migrate onto the actual root.
    for (int p = 0; p < 40; ++p) {
        const Mat2 j = rhs_jacobian_unchecked(mp, x.r, x.z);
        Vec2 delta;
        if (!solve2(j, -1.0 * f, delta)) break;
        double step = 1.0;
        bool moved = false;
        for (int bt = 0; bt < 30; ++bt) {
            const Vec2 trial = x + step * delta;
            if (inside_search_box(mp.cs, trial)) {
                const Vec2 ft = rhs_unchecked(mp, trial.r, trial.z);
                if (std::isfinite(ft.norm()) && ft.norm() < fnorm) {
                    x = trial;
                    f = ft;
                    fnorm = ft.norm();
                    moved = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!moved) break;
    }

    // Snap results onto the axis when the on-axis point is at least as good a
    // zero. Inside the flat transverse valley around a pitchfork the whole
    // |z| band sits at the roundoff floor and is numerically the axis root; a
    // genuine off-axis newborn fails the residual comparison and is kept.
    if (x.z != 0.0 && std::abs(x.z) < 3e-3) {
        const Vec2 fs = rhs_unchecked(mp, x.r, 0.0);
        if (fs.norm() <= fnorm) {
            x.z = 0.0;
            f = fs;
            fnorm = fs.norm();
        }
    }

    Equilibrium eq = eigensystem(mp, x, 10.0 * opts.newton_tol);
    eq.residual = fnorm;
    return eq;
}

EqKind classify(std::complex<double> lambda1, std::complex<double> lambda2, ForceMode mode) {
    const double mag = std::max(std::abs(lambda1), std::abs(lambda2));
    if (mag == 0.0) return EqKind::Degenerate;
    const double band = 1e-4 * mag;

    const bool complex_pair =
        std::abs(lambda1.imag()) > 0.0 || std::abs(lambda2.imag()) > 0.0;
    if (complex_pair) {
        const double re = lambda1.real();
        if (std::abs(re) < band)
            return mode == ForceMode::DragOnly ? EqKind::Center : EqKind::Degenerate;
        return re < 0.0 ? EqKind::StableSpiral : EqKind::UnstableSpiral;
    }

    const double l1 = lambda1.real();
    const double l2 = lambda2.real();
    if (std::abs(l1) < band || std::abs(l2) < band) return EqKind::Degenerate;
    if (l1 < 0.0 && l2 < 0.0) return EqKind::StableNode;
    if (l1 > 0.0 && l2 > 0.0) return EqKind::UnstableNode;
    return EqKind::Saddle;
}

Equilibrium eigensystem(const ModelParams& mp, Vec2 location, double residual_tol) {
    const Vec2 f = rhs_unchecked(mp, location.r, location.z);
    if (!(f.norm() <= residual_tol))
        throw std::invalid_argument("eigensystem requested at a non-equilibrium point: |rhs| = " +
                                    std::to_string(f.norm()));

    Equilibrium eq;
    eq.location = location;
    eq.residual = f.norm();
    eq.jac = rhs_jacobian_unchecked(mp, location.r, location.z);
    const Eigen2 e = eigen2(eq.jac);
    eq.lambda1 = e.lambda1;
    eq.lambda2 = e.lambda2;
    eq.real_eigenpair = e.real_pair;
    eq.defective = e.defective;
    if (e.real_pair) {
        eq.v1 = e.v1;
        eq.v2 = e.v2;
    }
    eq.kind = classify(eq.lambda1, eq.lambda2, mp.mode);
    return eq;
}

EquilibriumSet find_equilibria(const ModelParams& mp, const FindOptions& opts) {
    const CrossSection& cs = mp.cs;
    int nr = opts.grid_r;
    int nz = opts.grid_z;
    if (nr == 0) nr = cs.kind == CrossSectionKind::Rect2x1 ? 41 : 21;
    if (nz == 0) nz = cs.kind == CrossSectionKind::Rect2x1 ? 21 : 41;
    if (nr < 8 || nz < 8)
        throw std::invalid_argument("seed grid density must be at least 8 per axis");

    std::vector<Vec2> seeds;
    seeds.reserve(static_cast<std::size_t>(nr) * nz + 16);
    for (int i = 0; i < nr; ++i) {
        const double r = -cs.half_width + (i + 1) * (2.0 * cs.half_width) / (nr + 1);
        for (int k = 0; k < nz; ++k) {
            const double z = -cs.half_height + (k + 1) * (2.0 * cs.half_height) / (nz + 1);
            seeds.push_back({r, z});
        }
    }
    for (const Vec2& p : known_seeds(cs)) seeds.push_back(p);
    for (const Vec2& p : opts.extra_seeds) seeds.push_back(p);

    return find_from_seeds(mp, seeds, opts);
}

namespace {

// Two converged candidates count as one root when the residual stays at the
// acceptance level along the segment between them: around a near-degenerate
// root the |rhs| < tol region is a finite lens and every point in it is the
// same root at working precision. A genuine pair has a residual bump between
// its members. Mirror twins straddling the symmetry axis are exempt - the
// axis root between them would masquerade as such a valley.
bool numerically_same_root(const ModelParams& mp, const Equilibrium& a, const Equilibrium& b,
                           const FindOptions& opts) {
    const double d = distance(a.location, b.location);
    if (d < opts.dedupe_radius) return true;
    if (d > 1e-2) return false;
    const bool axis_a = std::abs(a.location.z) < 1e-9;
    const bool axis_b = std::abs(b.location.z) < 1e-9;
    if (!axis_a && !axis_b && (a.location.z < 0.0) != (b.location.z < 0.0)) return false;
    const Vec2 mid = 0.5 * (a.location + b.location);
    return rhs_unchecked(mp, mid.r, mid.z).norm() < 10.0 * opts.newton_tol;
}

} // namespace

EquilibriumSet find_from_seeds(const ModelParams& mp, const std::vector<Vec2>& seeds,
                               const FindOptions& opts) {
    const CrossSection& cs = mp.cs;
    EquilibriumSet out;
    out.wall_continuum = (mp.mode == ForceMode::DragOnly);

    std::vector<Equilibrium> candidates;
    for (const Vec2& seed : seeds) {
        auto eq = solve_from_seed(mp, seed, opts);
        if (!eq) continue;
        const Vec2& x = eq->location;
        // Keep interior roots only: outside points are spurious, and roots on
        // (or numerically at) the walls are the drag-only boundary continuum.
        if (std::abs(x.r) > cs.half_width - opts.wall_margin ||
            std::abs(x.z) > cs.half_height - opts.wall_margin)
            continue;
        // Cheap pre-dedupe keeps the clustering below quadratic blowup.
        bool duplicate = false;
        for (const Equilibrium& kept : candidates)
            if (distance(kept.location, x) < opts.dedupe_radius &&
                kept.location.z == eq->location.z) {
                duplicate = true;
                break;
            }
        if (!duplicate) candidates.push_back(*eq);
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const Equilibrium& a, const Equilibrium& b) {
                  if (a.location.r != b.location.r) return a.location.r < b.location.r;
                  return a.location.z < b.location.z;
              });

    // Single-linkage clustering under the same-root relation (transitive
    // through the axis member when an unresolved pitchfork cluster spans the
    // symmetry axis), then one representative per cluster: the axis member
    // when there is one, otherwise the smallest residual.
    std::vector<bool> used(candidates.size(), false);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (used[i]) continue;
        used[i] = true;
        std::vector<std::size_t> cluster{i};
        for (std::size_t n = 0; n < cluster.size(); ++n)
            for (std::size_t j = 0; j < candidates.size(); ++j)
                if (!used[j] &&
                    numerically_same_root(mp, candidates[cluster[n]], candidates[j], opts)) {
                    used[j] = true;
                    cluster.push_back(j);
                }
        std::size_t rep = cluster.front();
        for (std::size_t idx : cluster) {
            const bool rep_axis = std::abs(candidates[rep].location.z) < 1e-9;
            const bool idx_axis = std::abs(candidates[idx].location.z) < 1e-9;
            if (idx_axis != rep_axis) {
                if (idx_axis) rep = idx;
            } else if (candidates[idx].residual < candidates[rep].residual) {
                rep = idx;
            }
        }
        out.points.push_back(candidates[rep]);
    }

    std::sort(out.points.begin(), out.points.end(), [](const Equilibrium& a, const Equilibrium& b) {
        if (a.location.r != b.location.r) return a.location.r < b.location.r;
        return a.location.z < b.location.z;
    });
    return out;
}

const char* to_string(EqKind kind) {
    switch (kind) {
        case EqKind::StableNode: return "stable_node";
        case EqKind::UnstableNode: return "unstable_node";
        case EqKind::Saddle: return "saddle";
        case EqKind::StableSpiral: return "stable_spiral";
        case EqKind::UnstableSpiral: return "unstable_spiral";
        case EqKind::Center: return "center";
        case EqKind::Degenerate: return "degenerate";
    }
    return "unknown";
}

} // namespace zelf
