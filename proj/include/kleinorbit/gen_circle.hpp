#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "kleinorbit/complex_point.hpp"

namespace kleinorbit {

// Generalized circle (circle or line) as a normalized Hermitian form
//
//     A z conj(z) + conj(B) z + B conj(z) + D = 0,   A, D real, B complex,
//
// with discriminant |B|^2 - A D = 1 and a canonical global sign
// (A >= 0, ties broken by Re B > 0, then Im B > 0, then D > 0).
// Lines are exactly the representatives with A = 0.
class GenCircle {
  public:
    static GenCircle from_hermitian(double A, Complex B, double D) {
        return GenCircle(A, B, D);
    }

    static GenCircle from_center_radius(Complex center, double radius) {
        if (!(radius > 0.0)) throw std::invalid_argument("not a real circle");
        // |z - c|^2 = r^2 expanded; rescale by 1/r to land on discriminant 1.
        return GenCircle(1.0 / radius, -center / radius,
                         (std::norm(center) - radius * radius) / radius);
    }

    // Line { z : 2 Re(conj(normal) z) + offset = 0 }; normal need not be unit.
    static GenCircle line(Complex normal, double offset) {
        return GenCircle(0.0, normal, offset);
    }

    static GenCircle unit() { return from_center_radius(Complex(0.0, 0.0), 1.0); }
    static GenCircle real_axis() { return line(Complex(0.0, 1.0), 0.0); }
    static GenCircle imaginary_axis() { return line(Complex(1.0, 0.0), 0.0); }

    // Circle given as a plane section { x in S^2 : n . x = h } of the unit
    // sphere under the stereographic identification (n unit, |h| < 1).
    static GenCircle from_sphere_plane(SpherePoint n, double h) {
        n = normalized(n);
        if (!(std::abs(h) < 1.0 - 5e-16)) throw std::invalid_argument("not a real circle");
        double g = std::sqrt(1.0 - h * h);
        double sum = -2.0 * h / g;     // A + D
        double len = 2.0 / g;          // |(2 Re B, 2 Im B, A - D)|
        double diff = len * n.z;       // A - D
        Complex B(0.5 * len * n.x, 0.5 * len * n.y);
        double A = 0.5 * (sum + diff);
        // Planes through the north pole are lines; snap the cancellation
        // residue so those get the exact line representative A = 0.
        if (std::abs(A) <= 1e-13 * std::max(std::abs(sum), std::abs(diff))) A = 0.0;
        return GenCircle(A, B, 0.5 * (sum - diff));
    }

    double a() const { return a_; }
    Complex b() const { return b_; }
    double d() const { return d_; }

    std::array<double, 4> coeffs() const { return {a_, b_.real(), b_.imag(), d_}; }

    bool is_line(double tol = 1e-12) const { return std::abs(a_) <= tol; }

    Complex center() const {
        if (is_line()) throw std::domain_error("line has no finite center");
        return -b_ / a_;
    }

    double radius() const {
        if (is_line()) throw std::domain_error("line has no finite radius");
        return 1.0 / std::abs(a_);  // sqrt(|B|^2 - AD) / A with discriminant 1
    }

    // Value of the Hermitian form at a finite point.
    double eval(Complex z) const {
        return a_ * std::norm(z) + 2.0 * (std::conj(b_) * z).real() + d_;
    }

    // Plane section data on the unit sphere: the circle is { x : n . x = h }.
    SpherePoint sphere_normal() const {
        return normalized(SpherePoint{2.0 * b_.real(), 2.0 * b_.imag(), a_ - d_});
    }

    double sphere_offset() const {
        double s = a_ + d_;
        return -s / std::sqrt(4.0 + s * s);
    }

    // Diameter of the circle in the chordal metric.
    double chordal_diameter() const {
        double s = a_ + d_;
        return 4.0 / std::sqrt(4.0 + s * s);
    }

    // Point of the circle at angle theta in a deterministic orthonormal frame
    // of its sphere section (may return the point at infinity for lines).
    ComplexPoint point_at(double theta) const {
        SpherePoint n = sphere_normal();
        double h = sphere_offset();
        double rho = std::sqrt(std::max(0.0, 1.0 - h * h));
        SpherePoint e1 = frame_axis(n);
        SpherePoint e2 = cross(n, e1);
        double c = std::cos(theta), s = std::sin(theta);
        SpherePoint x{h * n.x + rho * (c * e1.x + s * e2.x),
                      h * n.y + rho * (c * e1.y + s * e2.y),
                      h * n.z + rho * (c * e1.z + s * e2.z)};
        return from_sphere(x);
    }

    bool contains(const ComplexPoint& p, double tol = 1e-9) const;

  private:
    GenCircle(double A, Complex B, double D) : a_(A), b_(B), d_(D) { normalize(); }

    static SpherePoint frame_axis(const SpherePoint& n) {
        double ax = std::abs(n.x), ay = std::abs(n.y), az = std::abs(n.z);
        SpherePoint seed = (ax <= ay && ax <= az) ? SpherePoint{1.0, 0.0, 0.0}
                         : (ay <= az)             ? SpherePoint{0.0, 1.0, 0.0}
                                                  : SpherePoint{0.0, 0.0, 1.0};
        return normalized(cross(n, seed));
    }

    void normalize() {
        double disc = std::norm(b_) - a_ * d_;
        double scale2 = a_ * a_ + std::norm(b_) + d_ * d_;
        if (!(disc > scale2 * 1e-30) || !std::isfinite(disc)) {
            throw std::invalid_argument("not a real circle");
        }
        // Skip the rescale when already normalized so that normalization is
        // bit-for-bit idempotent. The window grows with the coefficient
        // scale: the discriminant of a nearly-degenerate circle cannot be
        // evaluated more accurately than scale2 * eps, so rescaling inside
        // that window would only churn the last bits.
        double window = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale2);
        if (std::abs(disc - 1.0) > window) {
            double s = std::sqrt(disc);
            a_ /= s;
            b_ /= s;
            d_ /= s;
        }
        const double sign_tol = 1e-13;
        const double probe[4] = {a_, b_.real(), b_.imag(), d_};
        for (double v : probe) {
            if (std::abs(v) > sign_tol) {
                if (v < 0.0) {
                    a_ = -a_;
                    b_ = -b_;
                    d_ = -d_;
                }
                break;
            }
        }
    }

    double a_;
    Complex b_;
    double d_;
};

// max-norm distance between coefficient vectors, modulo the global sign.
inline double coefficient_distance(const GenCircle& c1, const GenCircle& c2) {
    auto u = c1.coeffs(), v = c2.coeffs();
    double dm = 0.0, dp = 0.0;
    for (int i = 0; i < 4; ++i) {
        dm = std::max(dm, std::abs(u[i] - v[i]));
        dp = std::max(dp, std::abs(u[i] + v[i]));
    }
    return std::min(dm, dp);
}

inline bool approx_equal(const GenCircle& c1, const GenCircle& c2, double eps = 1e-9) {
    return coefficient_distance(c1, c2) <= eps;
}

// Signed inversive product of two normalized circles; the signature-(3,1)
// bilinear form on Hermitian coefficients, equal to +-cos(angle) for
// intersecting circles and +-cosh(distance) for disjoint ones.
inline double inversive_product(const GenCircle& c1, const GenCircle& c2) {
    return (std::conj(c1.b()) * c2.b()).real() - 0.5 * (c1.a() * c2.d() + c2.a() * c1.d());
}

inline double inversive_distance(const GenCircle& c1, const GenCircle& c2) {
    return std::abs(inversive_product(c1, c2));
}

// Chordal distance from a point to the circle (as a point set on the sphere).
// For x on the sphere at latitude t = x . n relative to the circle's plane,
// the squared distance to the circle is (sqrt(1-t^2) - rho)^2 + (t - h)^2
// with rho = sqrt(1 - h^2), independent of longitude.
inline double point_circle_distance(const ComplexPoint& p, const GenCircle& c) {
    SpherePoint x = to_sphere(p);
    SpherePoint n = c.sphere_normal();
    double h = c.sphere_offset();
    double rho = std::sqrt(std::max(0.0, 1.0 - h * h));
    double t = std::clamp(dot(x, n), -1.0, 1.0);
    double radial = std::sqrt(std::max(0.0, 1.0 - t * t)) - rho;
    double axial = t - h;
    return std::sqrt(std::max(0.0, radial * radial + axial * axial));
}

inline bool GenCircle::contains(const ComplexPoint& p, double tol) const {
    return point_circle_distance(p, *this) <= tol;
}

// The generalized circle through three distinct points (any may be infinity):
// the plane through their stereographic images.
inline GenCircle circle_through(ComplexPoint p1, ComplexPoint p2, ComplexPoint p3) {
    // Anchor an infinite point at the third slot: its sphere image is the
    // exact north pole, which makes lines come out with A = 0 exactly.
    if (p1.is_infinity()) std::swap(p1, p3);
    else if (p2.is_infinity()) std::swap(p2, p3);
    SpherePoint x1 = to_sphere(p1), x2 = to_sphere(p2), x3 = to_sphere(p3);
    SpherePoint u{x1.x - x3.x, x1.y - x3.y, x1.z - x3.z};
    SpherePoint v{x2.x - x3.x, x2.y - x3.y, x2.z - x3.z};
    SpherePoint n = cross(u, v);
    double nn = norm(n);
    if (!(nn > 1e-12 * std::max(norm(u) * norm(v), 1e-300))) {
        throw std::domain_error("degenerate triple");
    }
    SpherePoint nu = normalized(n);
    double h = dot(nu, x3);
    if (!(std::abs(h) < 1.0 - 5e-16)) throw std::domain_error("degenerate triple");
    return GenCircle::from_sphere_plane(nu, h);
}

namespace detail {
// sup over circle 1 of the distance to circle 2 (as sphere sections).
// The distance from a point at latitude t = x . n2 is F(t) as in
// point_circle_distance; over circle 1, t ranges in [m - w, m + w] with
// m = h1 (n1 . n2), w = rho1 sqrt(1 - (n1 . n2)^2), and F has a unique
// interior minimum, so the sup is attained at an endpoint.
inline double directed_circle_sup(const SpherePoint& n1, double h1, const SpherePoint& n2,
                                  double h2) {
    double rho1 = std::sqrt(std::max(0.0, 1.0 - h1 * h1));
    double rho2 = std::sqrt(std::max(0.0, 1.0 - h2 * h2));
    double c = std::clamp(dot(n1, n2), -1.0, 1.0);
    double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    double sup = 0.0;
    for (double t : {h1 * c + rho1 * s, h1 * c - rho1 * s}) {
        t = std::clamp(t, -1.0, 1.0);
        double radial = std::sqrt(std::max(0.0, 1.0 - t * t)) - rho2;
        double axial = t - h2;
        sup = std::max(sup, radial * radial + axial * axial);
    }
    return std::sqrt(sup);
}
}  // namespace detail

// Hausdorff distance between two generalized circles in the chordal metric.
inline double circle_distance(const GenCircle& c1, const GenCircle& c2) {
    SpherePoint n1 = c1.sphere_normal(), n2 = c2.sphere_normal();
    double h1 = c1.sphere_offset(), h2 = c2.sphere_offset();
    return std::max(detail::directed_circle_sup(n1, h1, n2, h2),
                    detail::directed_circle_sup(n2, h2, n1, h1));
}

// The circle through `other` tangent to `c` at `at` (a point of `c`).
inline GenCircle tangent_circle_at(const GenCircle& c, const ComplexPoint& at,
                                   const ComplexPoint& other) {
    if (at.is_infinity()) {
        // c is a line through infinity; the tangent "circle" is the parallel
        // line through the second point.
        if (!c.is_line(1e-9)) throw std::domain_error("degenerate triple");
        if (other.is_infinity()) throw std::domain_error("degenerate triple");
        Complex nrm = c.b() / std::abs(c.b());
        return GenCircle::line(nrm, -2.0 * (std::conj(nrm) * other.z).real());
    }
    Complex p = at.z;
    // Gradient direction of the Hermitian form: the normal of c at p.
    Complex N = c.a() * p + c.b();
    double nn = std::abs(N);
    if (!(nn > 1e-300)) throw std::domain_error("degenerate triple");
    if (other.is_infinity()) {
        // Line through p with normal N.
        Complex nrm = N / nn;
        return GenCircle::line(nrm, -2.0 * (std::conj(nrm) * p).real());
    }
    Complex delta = p - other.z;
    double den = (std::conj(delta) * N).real();
    if (std::abs(den) <= 1e-14 * std::abs(delta) * nn) {
        // Tangent line itself passes through `other`.
        return circle_through(at, other, ComplexPoint::infinity());
    }
    double w = -std::norm(delta) / (2.0 * den);
    Complex centre = p + w * N;
    return GenCircle::from_center_radius(centre, std::abs(w) * nn);
}

}  // namespace kleinorbit
