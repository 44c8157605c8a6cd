#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "kleinorbit/lorentz.hpp"

namespace kleinorbit {

// Parameters of the one-parameter polyhedron family: t in (1, (5+sqrt39)/3),
// u = sqrt((t+1)/2), and the auxiliary root v entering the face normals.
struct LunchboxParams {
    double t;
    double u;
    double v;

    static LunchboxParams from_t(double t) {
        double tMax = (5.0 + std::sqrt(39.0)) / 3.0;
        if (!(t > 1.0) || !(t < tMax) || !std::isfinite(t)) {
            throw std::domain_error("outside geometric regime");
        }
        LunchboxParams p{};
        p.t = t;
        p.u = std::sqrt((t + 1.0) / 2.0);
        double rad = (p.u * p.u + 2.0) * (16.0 * p.u * p.u - 3.0);
        p.v = (3.0 * p.u + std::sqrt(rad)) / (8.0 * p.u * p.u - 2.0);
        return p;
    }
};

namespace detail {

// Radicand of the face-normal square root; nonnegative only for t <= 2.
inline double face_radicand(const LunchboxParams& p) {
    double u2 = p.u * p.u, v2 = p.v * p.v;
    return 4.0 * u2 + 4.0 * v2 - 3.0 - 4.0 * u2 * v2;
}

}  // namespace detail

struct FaceNormals {
    LorentzVec n2, n4, n7, n8;
};

// Unit spacelike normals of the two symmetric face pairs. The pairs differ
// only in the sign of the x1 component.
inline FaceNormals face_normals(const LunchboxParams& p) {
    double u = p.u, v = p.v;
    double A = detail::face_radicand(p);
    if (A < -1e-12) throw std::domain_error("outside geometric regime");
    if (A < 0.0) A = 0.0;
    double sqrtA = std::sqrt(A);
    double den = 2.0 * u * u - 2.0;
    double s3 = std::sqrt(3.0);
    double su2 = std::sqrt(u * u + 2.0);

    FaceNormals f{};
    f.n2 = LorentzVec{(u - sqrtA) / den, v, 0.0, (-1.0 + u * sqrtA) / den};
    f.n4 = LorentzVec{(u - sqrtA) / den, -v, 0.0, (-1.0 + u * sqrtA) / den};
    f.n7 = LorentzVec{(u * u * s3 - su2) / den, -s3 / 2.0, s3 / 2.0, (u * su2 - u * s3) / den};
    f.n8 = LorentzVec{(u * u * s3 - su2) / den, s3 / 2.0, s3 / 2.0, (u * su2 - u * s3) / den};
    return f;
}

// Unit normal of the horoball boundary plane tangent at infinity.
inline LorentzVec pprime_normal(const LunchboxParams& p) {
    double den = std::sqrt(p.u * p.u - 1.0);
    return LorentzVec{1.0 / den, 0.0, 0.0, -p.u / den};
}

// The x1 = 0 plane normal orthogonal to all four face normals and meeting
// the horoball plane tangentially; its Minkowski norm is not 1 in general —
// unitResidual measures the gap and vanishes exactly at the distinguished
// parameter t0.
struct PlaneNormalSolution {
    double x0;
    double x2;
    double x3;
    double tangencyResidual;
    double unitResidual;

    LorentzVec vec() const { return LorentzVec{x0, 0.0, x2, x3}; }
};

inline PlaneNormalSolution solve_plane_normal(const LunchboxParams& p) {
    if (!(p.t > 1.0) || !(p.t < 2.0)) throw std::domain_error("outside geometric regime");
    double u = p.u;
    double A = detail::face_radicand(p);
    if (A < -1e-12) throw std::domain_error("outside geometric regime");
    if (A < 0.0) A = 0.0;
    double sqrtA = std::sqrt(A);
    double root = std::sqrt(u * u - 1.0);

    PlaneNormalSolution s{};
    s.x0 = (1.0 - u * sqrtA) / root;
    s.x2 = (std::sqrt(u * u + 2.0) - u * std::sqrt(3.0) * sqrtA) / (std::sqrt(3.0) * root);
    s.x3 = (sqrtA - u) / root;
    s.tangencyResidual = -s.x0 / root - s.x3 * u / root - 1.0;
    s.unitResidual = -s.x0 * s.x0 + s.x2 * s.x2 + s.x3 * s.x3 - 1.0;
    return s;
}

// ---------------------------------------------------------------------------
// Polynomials of the tangency condition (Horner forms).

inline double h_poly(double t) {
    return ((((72.0 * t + 20.0) * t + 916.0) * t - 3237.0) * t - 2330.0) * t - 625.0;
}

inline double h_second_derivative(double t) {
    return ((1440.0 * t + 240.0) * t + 5496.0) * t - 6474.0;
}

inline double cubic(double t) { return ((72.0 * t - 28.0) * t + 200.0) * t - 325.0; }

inline double cubic_derivative(double t) { return (216.0 * t - 56.0) * t + 200.0; }

// The quadratic derivative has negative discriminant 56^2 - 4*216*200, so the
// cubic is strictly increasing and its real root is unique.
inline bool cubic_root_is_unique() {
    double disc = 56.0 * 56.0 - 4.0 * 216.0 * 200.0;
    return disc < 0.0 && cubic_derivative(0.0) > 0.0;
}

inline double f_poly(double u) {
    double u2 = u * u;
    return -625.0 +
           u2 * (11153.0 +
                 u2 * (-53284.0 + u2 * (65632.0 + u2 * (-38720.0 + u2 * (22144.0 - 9216.0 * u2)))));
}

inline double g_poly(double u) {
    double u2 = u * u;
    return u * (900.0 + u2 * (-7092.0 + u2 * (9072.0 + u2 * (-4032.0 + 1152.0 * u2))));
}

inline double p6_poly(double u) {
    double u2 = u * u;
    return -625.0 + u2 * (944.0 + u2 * (-976.0 + 576.0 * u2));
}

inline double p10_poly(double u) {
    double u2 = u * u;
    return -625.0 + u2 * (3586.0 + u2 * (-6585.0 + u2 * (3112.0 + u2 * (-1360.0 + 576.0 * u2))));
}

// ---------------------------------------------------------------------------
// The reduction chain from the tangency condition to the factored polynomial.
//
// Stage one: with A the face radicand, the combination
//     9A^2 + (u^2+2)^2 + 6A(u^2+2) - 12u^2(u^2+2)A
// collapses, after substituting v, to (u^2-1)(f(u) + g(u) sqrt(S))/(4u^2-1)^4
// with S = 16u^4 + 29u^2 - 6 = (u^2+2)(16u^2-3).
//
// Stage two: f^2 - g^2 S = (4u^2-1)^4 p6(u) p10(u), and in the t variable
// (u^2 = (t+1)/2) this is (1/4)(1+2t)^4 cubic(t) h(t).
//
// The sign of the 29u^2 term is ambiguous in the source material (one
// display has -29); the report evaluates both variants and flags the one
// that actually matches the factored form.
struct FactorIdentityReport {
    double chain_residual;     // stage one, relative
    double factor_residual;    // stage two with +29, relative
    double minus_variant_residual;  // stage two with -29, relative
    bool plus_variant_matches;
};

inline FactorIdentityReport factor_identity_report(double t) {
    LunchboxParams p = LunchboxParams::from_t(t);
    double u = p.u, u2 = u * u;
    double A = detail::face_radicand(p);

    auto rel = [](double a, double b) {
        return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-30});
    };

    double Splus = 16.0 * u2 * u2 + 29.0 * u2 - 6.0;
    double Sminus = 16.0 * u2 * u2 - 29.0 * u2 - 6.0;
    double pow4 = std::pow(4.0 * u2 - 1.0, 4);

    double lhs1 = 9.0 * A * A + (u2 + 2.0) * (u2 + 2.0) + 6.0 * A * (u2 + 2.0) -
                  12.0 * u2 * (u2 + 2.0) * A;
    double rhs1 = (u2 - 1.0) * (f_poly(u) + g_poly(u) * std::sqrt(Splus)) / pow4;

    double fac = 0.25 * std::pow(1.0 + 2.0 * t, 4) * cubic(t) * h_poly(t);
    double lhs2plus = f_poly(u) * f_poly(u) - g_poly(u) * g_poly(u) * Splus;
    double lhs2minus = f_poly(u) * f_poly(u) - g_poly(u) * g_poly(u) * Sminus;

    FactorIdentityReport r{};
    r.chain_residual = rel(lhs1, rhs1);
    r.factor_residual = rel(lhs2plus, fac);
    r.minus_variant_residual = rel(lhs2minus, fac);
    r.plus_variant_matches = r.factor_residual < r.minus_variant_residual;
    return r;
}

inline double factor_identity_check(double t) {
    FactorIdentityReport r = factor_identity_report(t);
    return std::max(r.chain_residual, r.factor_residual);
}

// ---------------------------------------------------------------------------
// The distinguished parameter t0: unique real root of the cubic.

struct RootCertificate {
    double t0;
    double bracket_lo;
    double bracket_hi;
};

inline RootCertificate find_t0_certified() {
    double lo = 1.0, hi = 2.0;
    // cubic(1) < 0 < cubic(2); bisect to 1e-14, then polish.
    while (hi - lo > 1e-14) {
        double mid = 0.5 * (lo + hi);
        if (cubic(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    double t0 = 0.5 * (lo + hi);
    for (int i = 0; i < 4; ++i) t0 -= cubic(t0) / cubic_derivative(t0);
    return RootCertificate{t0, lo, hi};
}

inline double find_t0() { return find_t0_certified().t0; }

inline double closed_form_t0() {
    double s = 25515.0 * std::sqrt(773.0);
    return (7.0 - std::cbrt((s - 654761.0) / 2.0) + std::cbrt((s + 654761.0) / 2.0)) / 54.0;
}

// ---------------------------------------------------------------------------
// Integration check: at t0 the solved plane normal is unit, orthogonal to all
// four face normals, and its plane is tangent to the horoball plane, both in
// the Minkowski pairing and as boundary circles.

struct TangencyReport {
    double t;
    std::array<double, 4> orthogonality;  // |<x, n2/n4/n7/n8>|
    double unit;                          // |x|^2 - 1
    double tangency;                      // |<x, e'>| - 1
    double boundary_tangency;             // inversive distance of the circles - 1
    bool pass;
};

inline TangencyReport verify_exotic_tangency(double t0) {
    LunchboxParams p = LunchboxParams::from_t(t0);
    FaceNormals fn = face_normals(p);
    PlaneNormalSolution sol = solve_plane_normal(p);
    LorentzVec x = sol.vec();
    LorentzVec ep = pprime_normal(p);

    TangencyReport r{};
    r.t = t0;
    r.orthogonality = {std::abs(minkowski_inner(x, fn.n2)), std::abs(minkowski_inner(x, fn.n4)),
                       std::abs(minkowski_inner(x, fn.n7)), std::abs(minkowski_inner(x, fn.n8))};
    r.unit = sol.unitResidual;
    r.tangency = std::abs(minkowski_inner(x, ep)) - 1.0;

    // Boundary circles only exist for genuinely unit normals.
    if (std::abs(r.unit) < 1e-6) {
        GenCircle cx = normal_to_circle(PlaneNormal::from_spacelike(x));
        GenCircle ce = normal_to_circle(PlaneNormal(ep));
        r.boundary_tangency = inversive_distance(cx, ce) - 1.0;
    } else {
        r.boundary_tangency = std::numeric_limits<double>::infinity();
    }

    r.pass = r.orthogonality[0] < 1e-9 && r.orthogonality[1] < 1e-9 &&
             r.orthogonality[2] < 1e-9 && r.orthogonality[3] < 1e-9 &&
             std::abs(r.unit) < 1e-9 && std::abs(r.tangency) < 1e-9 &&
             std::abs(r.boundary_tangency) < 1e-8;
    return r;
}

}  // namespace kleinorbit
