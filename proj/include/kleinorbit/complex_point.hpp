#pragma once

#include <cmath>
#include <complex>
#include <limits>

namespace kleinorbit {

using Complex = std::complex<double>;

// A point of the Riemann sphere: either a finite complex number or the
// single point at infinity.
struct ComplexPoint {
    Complex z{0.0, 0.0};
    bool at_infinity = false;

    ComplexPoint() = default;
    ComplexPoint(Complex value) : z(value) {}
    ComplexPoint(double re, double im) : z(re, im) {}

    static ComplexPoint infinity() {
        ComplexPoint p;
        p.at_infinity = true;
        return p;
    }

    bool is_infinity() const { return at_infinity; }
};

inline bool operator==(const ComplexPoint& a, const ComplexPoint& b) {
    if (a.at_infinity || b.at_infinity) return a.at_infinity && b.at_infinity;
    return a.z == b.z;
}

inline bool operator!=(const ComplexPoint& a, const ComplexPoint& b) { return !(a == b); }

// Point on the unit 2-sphere in R^3.
struct SpherePoint {
    double x = 0.0, y = 0.0, z = 0.0;
};

inline double dot(const SpherePoint& a, const SpherePoint& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline SpherePoint cross(const SpherePoint& a, const SpherePoint& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const SpherePoint& a) { return std::sqrt(dot(a, a)); }

inline SpherePoint normalized(const SpherePoint& a) {
    double n = norm(a);
    return {a.x / n, a.y / n, a.z / n};
}

inline double euclidean_distance(const SpherePoint& a, const SpherePoint& b) {
    return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                     (a.z - b.z) * (a.z - b.z));
}

// Stereographic embedding of the extended plane into the unit sphere,
// z = x + iy  ->  (2x, 2y, |z|^2 - 1) / (|z|^2 + 1), infinity -> north pole.
// For |z| > 1 the map is evaluated through w = 1/conj(z) to avoid overflow.
inline SpherePoint to_sphere(const ComplexPoint& p) {
    if (p.at_infinity) return {0.0, 0.0, 1.0};
    double m = std::abs(p.z);
    if (m > 1.0) {
        Complex w = 1.0 / std::conj(p.z);
        double d = 1.0 + std::norm(w);
        return {2.0 * w.real() / d, 2.0 * w.imag() / d, (1.0 - std::norm(w)) / d};
    }
    double d = 1.0 + std::norm(p.z);
    return {2.0 * p.z.real() / d, 2.0 * p.z.imag() / d, (std::norm(p.z) - 1.0) / d};
}

inline ComplexPoint from_sphere(const SpherePoint& s) {
    double denom = 1.0 - s.z;
    if (denom <= 1e-15) return ComplexPoint::infinity();
    return ComplexPoint(s.x / denom, s.y / denom);
}

// Chordal metric: Euclidean distance between stereographic images; every
// distance is <= 2 (antipodal points).
inline double chordal(const ComplexPoint& a, const ComplexPoint& b) {
    if (a.at_infinity && b.at_infinity) return 0.0;
    if (a.at_infinity) return 2.0 / std::hypot(1.0, std::abs(b.z));
    if (b.at_infinity) return 2.0 / std::hypot(1.0, std::abs(a.z));
    double ha = std::hypot(1.0, std::abs(a.z));
    double hb = std::hypot(1.0, std::abs(b.z));
    return 2.0 * std::abs(a.z - b.z) / (ha * hb);
}

}  // namespace kleinorbit
