#pragma once

#include <cmath>
#include <stdexcept>

#include "kleinorbit/complex_point.hpp"
#include "kleinorbit/gen_circle.hpp"

namespace kleinorbit {

// Vector of E^{3,1}, signature (-,+,+,+).
struct LorentzVec {
    double x0 = 0.0, x1 = 0.0, x2 = 0.0, x3 = 0.0;
};

inline double minkowski_inner(const LorentzVec& x, const LorentzVec& y) {
    return -x.x0 * y.x0 + x.x1 * y.x1 + x.x2 * y.x2 + x.x3 * y.x3;
}

inline LorentzVec operator+(const LorentzVec& x, const LorentzVec& y) {
    return {x.x0 + y.x0, x.x1 + y.x1, x.x2 + y.x2, x.x3 + y.x3};
}

inline LorentzVec operator-(const LorentzVec& x, const LorentzVec& y) {
    return {x.x0 - y.x0, x.x1 - y.x1, x.x2 - y.x2, x.x3 - y.x3};
}

inline LorentzVec operator*(double s, const LorentzVec& x) {
    return {s * x.x0, s * x.x1, s * x.x2, s * x.x3};
}

// Unit spacelike normal of a geodesic plane V+ ∩ (R e)^perp.
struct PlaneNormal {
    LorentzVec e;

    explicit PlaneNormal(const LorentzVec& v) : e(v) {
        double q = minkowski_inner(e, e);
        if (std::abs(q - 1.0) > 1e-10) throw std::invalid_argument("not a unit spacelike normal");
    }

    // Normalize an arbitrary spacelike vector to a unit normal.
    static PlaneNormal from_spacelike(const LorentzVec& v) {
        double q = minkowski_inner(v, v);
        if (!(q > 0.0)) throw std::invalid_argument("not a unit spacelike normal");
        return PlaneNormal((1.0 / std::sqrt(q)) * v);
    }

    // Both signs describe the same plane; pick x0 >= 0, ties broken by the
    // first coordinate that is away from zero.
    PlaneNormal canonicalized() const {
        const double tol = 1e-13;
        const double probe[4] = {e.x0, e.x1, e.x2, e.x3};
        for (double v : probe) {
            if (std::abs(v) > tol) {
                if (v < 0.0) return PlaneNormal(LorentzVec{-e.x0, -e.x1, -e.x2, -e.x3});
                break;
            }
        }
        return *this;
    }
};

// Lorentz reflection in the hyperplane orthogonal to e.
inline LorentzVec reflect(const PlaneNormal& n, const LorentzVec& x) {
    return x - (2.0 * minkowski_inner(x, n.e)) * n.e;
}

// Dictionary between plane normals and boundary circles. The identification
// of the hyperboloid's sphere at infinity with the extended plane is fixed by
//
//     A = x3 - x0,  B = x1 + i x2,  D = -x0 - x3
//
// (inverse x0 = -(A+D)/2, x1 = Re B, x2 = Im B, x3 = (A-D)/2). This is the
// unique pairing (up to the irrelevant overall sign of e) for which a
// boundary point z lies on the circle of e exactly when its null ray is
// Minkowski-orthogonal to e:  <nu(z), e> = eval(z) * (1+|z|^2)/2.  Under it
// the Minkowski inner product of unit normals equals the signed inversive
// product of the corresponding circles identically, the plane x1 = 0
// corresponds to the imaginary axis, and Lorentz reflection in e covers
// inversion in the circle of e on null rays.
inline GenCircle normal_to_circle(const PlaneNormal& n) {
    return GenCircle::from_hermitian(n.e.x3 - n.e.x0, Complex(n.e.x1, n.e.x2), -n.e.x0 - n.e.x3);
}

inline PlaneNormal circle_normal(const GenCircle& c) {
    return PlaneNormal(
        LorentzVec{-0.5 * (c.a() + c.d()), c.b().real(), c.b().imag(), 0.5 * (c.a() - c.d())});
}

// Future-pointing null ray of a boundary point: (1, s) with s the point's
// stereographic image, which is ((1+|z|^2)/2, Re z, Im z, (|z|^2-1)/2) up to
// positive scale.
inline LorentzVec null_vector(const ComplexPoint& p) {
    SpherePoint s = to_sphere(p);
    return {1.0, s.x, s.y, s.z};
}

}  // namespace kleinorbit
