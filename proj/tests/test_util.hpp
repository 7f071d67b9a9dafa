#ifndef ZELF_TESTS_TEST_UTIL_HPP
#define ZELF_TESTS_TEST_UTIL_HPP

#include "core/fields.hpp"
#include "core/model.hpp"

#include <cmath>
#include <random>

namespace zelf::testutil {

// Deterministic interior point sampler (keeps a small margin off the walls).
class InteriorSampler {
public:
    InteriorSampler(const CrossSection& cs, unsigned seed, double margin = 1e-3)
        : rng_(seed),
          r_(-cs.half_width + margin, cs.half_width - margin),
          z_(-cs.half_height + margin, cs.half_height - margin) {}

    Vec2 next() { return {r_(rng_), z_(rng_)}; }

private:
    std::mt19937 rng_;
    std::uniform_real_distribution<double> r_;
    std::uniform_real_distribution<double> z_;
};

// Central finite differences of a field, the independent oracle for the
// analytic Jacobians.
template <typename Field>
FieldJacobian fd_jacobian(Field&& f, double r, double z, double h = 1e-5) {
    const FieldVector fr1 = f(r + h, z);
    const FieldVector fr0 = f(r - h, z);
    const FieldVector fz1 = f(r, z + h);
    const FieldVector fz0 = f(r, z - h);
    FieldJacobian j;
    j.d_fr_dr = (fr1.fr - fr0.fr) / (2.0 * h);
    j.d_fr_dz = (fz1.fr - fz0.fr) / (2.0 * h);
    j.d_fz_dr = (fr1.fz - fr0.fz) / (2.0 * h);
    j.d_fz_dz = (fz1.fz - fz0.fz) / (2.0 * h);
    return j;
}

inline double rel_err(double got, double want) {
    const double scale = std::max(std::abs(want), 1e-8);
    return std::abs(got - want) / scale;
}

inline double max_jac_rel_err(const FieldJacobian& got, const FieldJacobian& want) {
    double e = rel_err(got.d_fr_dr, want.d_fr_dr);
    e = std::max(e, rel_err(got.d_fr_dz, want.d_fr_dz));
    e = std::max(e, rel_err(got.d_fz_dr, want.d_fz_dr));
    e = std::max(e, rel_err(got.d_fz_dz, want.d_fz_dz));
    return e;
}

} // namespace zelf::testutil

#endif
