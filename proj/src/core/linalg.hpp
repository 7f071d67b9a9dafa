#ifndef ZELF_CORE_LINALG_HPP
#define ZELF_CORE_LINALG_HPP

#include <cmath>
#include <complex>

namespace zelf {

struct Vec2 {
    double r = 0.0;
    double z = 0.0;

    Vec2() = default;
    Vec2(double r_, double z_) : r(r_), z(z_) {}

    Vec2 operator+(const Vec2& o) const { return {r + o.r, z + o.z}; }
    Vec2 operator-(const Vec2& o) const { return {r - o.r, z - o.z}; }
    Vec2 operator*(double s) const { return {r * s, z * s}; }
    Vec2 operator-() const { return {-r, -z}; }
    double norm() const { return std::hypot(r, z); }
    double dot(const Vec2& o) const { return r * o.r + z * o.z; }
    // z-component of the 2D cross product.
    double cross(const Vec2& o) const { return r * o.z - z * o.r; }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

// 2x2 matrix acting on (r, z) vectors; a_rz is the d(row r)/d(z) entry.
struct Mat2 {
    double a_rr = 0.0, a_rz = 0.0;
    double a_zr = 0.0, a_zz = 0.0;

    double trace() const { return a_rr + a_zz; }
    double det() const { return a_rr * a_zz - a_rz * a_zr; }

    Vec2 apply(const Vec2& v) const {
        return {a_rr * v.r + a_rz * v.z, a_zr * v.r + a_zz * v.z};
    }

    Mat2 operator+(const Mat2& o) const {
        return {a_rr + o.a_rr, a_rz + o.a_rz, a_zr + o.a_zr, a_zz + o.a_zz};
    }
    Mat2 operator*(double s) const { return {a_rr * s, a_rz * s, a_zr * s, a_zz * s}; }
};

inline Mat2 operator*(double s, const Mat2& m) { return m * s; }

// Solves A x = b by Cramer's rule. Returns false when the system is singular
// to working precision.
inline bool solve2(const Mat2& A, const Vec2& b, Vec2& x) {
    const double d = A.det();
    if (d == 0.0) return false;
    x.r = (b.r * A.a_zz - A.a_rz * b.z) / d;
    x.z = (A.a_rr * b.z - b.r * A.a_zr) / d;
    return std::isfinite(x.r) && std::isfinite(x.z);
}

// Closed-form eigendecomposition of a real 2x2 matrix.
//
// Eigenvalues are sorted by descending real part (ties by descending imaginary
// part). Real eigenvectors are unit length with the first nonzero component
// positive; for a complex pair no eigenvectors are reported. `defective` marks
// a repeated eigenvalue whose eigenspace is one-dimensional.
struct Eigen2 {
    std::complex<double> lambda1, lambda2;
    Vec2 v1, v2;            // meaningful only when the pair is real
    bool real_pair = false;
    bool defective = false;
};

inline Vec2 normalize_direction(Vec2 v) {
    const double n = v.norm();
    if (n > 0.0) v = v * (1.0 / n);
    if (v.r < 0.0 || (v.r == 0.0 && v.z < 0.0)) v = -v;
    return v;
}

inline Eigen2 eigen2(const Mat2& A) {
    Eigen2 out;
    const double tr = A.trace();
    const double det = A.det();
    const double disc = tr * tr - 4.0 * det;
    const double scale = std::abs(A.a_rr) + std::abs(A.a_rz) + std::abs(A.a_zr) + std::abs(A.a_zz);

    auto eigvec = [&A](double lambda) -> Vec2 {
        // Pick the better-conditioned row of (A - lambda I).
        const Vec2 cand1{A.a_rz, lambda - A.a_rr};
        const Vec2 cand2{lambda - A.a_zz, A.a_zr};
        return (cand1.norm() >= cand2.norm()) ? cand1 : cand2;
    };

    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        double l1 = 0.5 * (tr + s);
        double l2 = 0.5 * (tr - s);
        out.lambda1 = l1;
        out.lambda2 = l2;
        out.real_pair = true;
        Vec2 w1 = eigvec(l1);
        Vec2 w2 = eigvec(l2);
        if (w1.norm() <= 1e-14 * std::max(1.0, scale)) w1 = {1.0, 0.0};
        if (w2.norm() <= 1e-14 * std::max(1.0, scale)) w2 = {0.0, 1.0};
        out.v1 = normalize_direction(w1);
        out.v2 = normalize_direction(w2);
        if (s <= 1e-14 * std::max(1.0, std::abs(tr))) {
            // Repeated eigenvalue: defective unless A is already a multiple of I.
            const double off = std::abs(A.a_rz) + std::abs(A.a_zr) + std::abs(A.a_rr - A.a_zz);
            if (off > 1e-14 * std::max(1.0, scale)) {
                out.defective = true;
                out.v2 = out.v1;
            } else {
                out.v1 = {1.0, 0.0};
                out.v2 = {0.0, 1.0};
            }
        }
    } else {
        const double s = std::sqrt(-disc);
        out.lambda1 = {0.5 * tr, 0.5 * s};
        out.lambda2 = {0.5 * tr, -0.5 * s};
        out.real_pair = false;
    }
    return out;
}

} // namespace zelf

#endif
