#ifndef ZELF_CORE_EQUILIBRIA_HPP
#define ZELF_CORE_EQUILIBRIA_HPP

#include "core/model.hpp"

#include <complex>
#include <optional>
#include <vector>

namespace zelf {

enum class EqKind {
    StableNode,
    UnstableNode,
    Saddle,
    StableSpiral,
    UnstableSpiral,
    Center,
    Degenerate,
};

// A fixed point of the particle dynamics with its linearization.
struct Equilibrium {
    Vec2 location;
    Mat2 jac;                              // Jacobian of rhs at the fixed point
    std::complex<double> lambda1, lambda2; // sorted by descending real part
    Vec2 v1, v2;                           // unit eigenvectors (real pair only)
    bool real_eigenpair = false;
    bool defective = false;
    EqKind kind = EqKind::Degenerate;
    double residual = 0.0;                 // |rhs| at the returned location
};

struct FindOptions {
    int grid_r = 0;              // seeds per axis; 0 = cross-section default
    int grid_z = 0;
    double newton_tol = 1e-12;   // convergence threshold on |rhs|
    int max_iterations = 50;
    double dedupe_radius = 1e-6;
    double wall_margin = 1e-6;   // roots this close to a wall are discarded
    std::vector<Vec2> extra_seeds;
};

struct EquilibriumSet {
    std::vector<Equilibrium> points;       // sorted by (r, z)
    // In the drag-only limit the duct walls are a continuum of rest states;
    // they are excluded from `points` and reported through this flag.
    bool wall_continuum = false;
};

// Damped-Newton multistart from a uniform interior seed grid (plus the known
// large-bend-radius equilibria and any caller-provided seeds), deduplicated
// and classified. Throws std::invalid_argument when a grid density below 8 is
// requested.
EquilibriumSet find_equilibria(const ModelParams& mp, const FindOptions& opts = {});

// Same filtering and deduplication, but only from the given seeds. Used by
// the continuation warm starts.
EquilibriumSet find_from_seeds(const ModelParams& mp, const std::vector<Vec2>& seeds,
                               const FindOptions& opts = {});

// Classification from the eigenvalues of the linearization. Within the
// relative degeneracy band the sign of the real part is not trusted; a
// pure-imaginary pair is promoted to Center only in the drag-only limit,
// where the conserved trajectory invariant rules out spirals.
EqKind classify(std::complex<double> lambda1, std::complex<double> lambda2, ForceMode mode);

// Closed-form eigendecomposition of the linearization at an equilibrium.
// `location` must satisfy |rhs| <= residual_tol (std::invalid_argument
// otherwise). Populates everything but `residual` from scratch.
Equilibrium eigensystem(const ModelParams& mp, Vec2 location, double residual_tol = 1e-6);

// Single damped-Newton solve used by the multistart and the continuation
// warm starts. Returns the converged equilibrium or nullopt.
std::optional<Equilibrium> solve_from_seed(const ModelParams& mp, Vec2 seed,
                                           const FindOptions& opts = {});

const char* to_string(EqKind kind);

} // namespace zelf

#endif
