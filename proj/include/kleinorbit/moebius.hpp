#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "kleinorbit/complex_point.hpp"
#include "kleinorbit/gen_circle.hpp"

namespace kleinorbit {

enum class MapKind { identity, elliptic, parabolic, hyperbolic, loxodromic };

// Fractional-linear map of the Riemann sphere with an orientation flag:
// holomorphic maps act as z -> (az+b)/(cz+d), antiholomorphic ones as
// z -> (a conj(z)+b)/(c conj(z)+d). The matrix is normalized to det = 1
// (principal square root), so it is determined up to global sign.
class MoebiusMap {
  public:
    MoebiusMap() : a_(1.0), b_(0.0), c_(0.0), d_(1.0), anti_(false) {}

    static MoebiusMap from_matrix(Complex a, Complex b, Complex c, Complex d,
                                  bool antiholomorphic = false) {
        return MoebiusMap(a, b, c, d, antiholomorphic);
    }

    static MoebiusMap identity() { return MoebiusMap(); }
    static MoebiusMap translation(Complex t) { return MoebiusMap(1.0, t, 0.0, 1.0, false); }
    static MoebiusMap scaling(Complex k) { return MoebiusMap(k, 0.0, 0.0, 1.0, false); }
    static MoebiusMap conjugation() { return MoebiusMap(1.0, 0.0, 0.0, 1.0, true); }

    Complex a() const { return a_; }
    Complex b() const { return b_; }
    Complex c() const { return c_; }
    Complex d() const { return d_; }
    bool is_anti() const { return anti_; }

    Complex trace() const { return a_ + d_; }

    ComplexPoint operator()(const ComplexPoint& p) const {
        if (p.is_infinity()) {
            if (c_ == Complex(0.0, 0.0)) return ComplexPoint::infinity();
            return guard(a_ / c_);
        }
        Complex w = anti_ ? std::conj(p.z) : p.z;
        Complex den = c_ * w + d_;
        if (den == Complex(0.0, 0.0)) return ComplexPoint::infinity();
        return guard((a_ * w + b_) / den);
    }

    MoebiusMap inverse() const {
        // det = 1, so the inverse matrix is [d, -b; -c, a]; for an
        // antiholomorphic map the inverse acts through the conjugated matrix.
        if (!anti_) return MoebiusMap(d_, -b_, -c_, a_, false);
        return MoebiusMap(std::conj(d_), -std::conj(b_), -std::conj(c_), std::conj(a_), true);
    }

    bool is_identity(double tol = 1e-12) const {
        if (anti_) return false;
        double dp = std::max(std::max(std::abs(a_ - 1.0), std::abs(d_ - 1.0)),
                             std::max(std::abs(b_), std::abs(c_)));
        double dm = std::max(std::max(std::abs(a_ + 1.0), std::abs(d_ + 1.0)),
                             std::max(std::abs(b_), std::abs(c_)));
        return std::min(dp, dm) <= tol;
    }

  private:
    MoebiusMap(Complex a, Complex b, Complex c, Complex d, bool anti)
        : a_(a), b_(b), c_(c), d_(d), anti_(anti) {
        Complex det = a_ * d_ - b_ * c_;
        if (!(std::abs(det) > 1e-300) || !std::isfinite(std::abs(det))) {
            throw std::invalid_argument("singular matrix");
        }
        Complex s = std::sqrt(det);
        a_ /= s;
        b_ /= s;
        c_ /= s;
        d_ /= s;
    }

    static ComplexPoint guard(Complex value) {
        if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
            return ComplexPoint::infinity();
        }
        return ComplexPoint(value);
    }

    Complex a_, b_, c_, d_;
    bool anti_;
};

// f after g. When f is antiholomorphic, conjugating g's output first means
// the composed matrix is F * conj(G); orientation flags add mod 2.
inline MoebiusMap compose(const MoebiusMap& f, const MoebiusMap& g) {
    Complex ga = g.a(), gb = g.b(), gc = g.c(), gd = g.d();
    if (f.is_anti()) {
        ga = std::conj(ga);
        gb = std::conj(gb);
        gc = std::conj(gc);
        gd = std::conj(gd);
    }
    return MoebiusMap::from_matrix(f.a() * ga + f.b() * gc, f.a() * gb + f.b() * gd,
                                   f.c() * ga + f.d() * gc, f.c() * gb + f.d() * gd,
                                   f.is_anti() != g.is_anti());
}

inline bool is_involution(const MoebiusMap& m, double tol = 1e-10) {
    return compose(m, m).is_identity(tol);
}

// Image circle under a Moebius map, by congruence of the Hermitian matrix
// H = [A, B; conj(B), D]: with P = m^{-1}, the image is P^dagger H P for
// holomorphic m and P^dagger H^T P for antiholomorphic m.
inline GenCircle apply_circle(const MoebiusMap& m, const GenCircle& circle) {
    // Plain matrix inverse (det = 1), for either orientation.
    Complex p = m.d(), q = -m.b(), r = -m.c(), s = m.a();
    double A = circle.a(), D = circle.d();
    Complex B = m.is_anti() ? std::conj(circle.b()) : circle.b();
    double A2 = A * std::norm(p) + 2.0 * (std::conj(p) * B * r).real() + D * std::norm(r);
    double D2 = A * std::norm(q) + 2.0 * (std::conj(q) * B * s).real() + D * std::norm(s);
    Complex B2 = std::conj(p) * (A * q + B * s) + std::conj(r) * (std::conj(B) * q + D * s);
    return GenCircle::from_hermitian(A2, B2, D2);
}

// Inversion (reflection) in a generalized circle: the antiholomorphic
// involution fixing it pointwise. In Hermitian coefficients the matrix is
// [-B, -D; A, conj(B)], uniform across circles and lines.
inline MoebiusMap inversion_in(const GenCircle& c) {
    return MoebiusMap::from_matrix(-c.b(), -c.d(), c.a(), std::conj(c.b()), true);
}

inline MapKind classify(const MoebiusMap& m, double tol = 1e-9) {
    if (m.is_anti()) throw std::invalid_argument("classification requires a holomorphic map");
    if (m.is_identity(tol)) return MapKind::identity;
    Complex t2 = m.trace() * m.trace();
    if (std::abs(t2.imag()) <= tol * (1.0 + std::abs(t2))) {
        double x = t2.real();
        if (std::abs(x - 4.0) <= tol) return MapKind::parabolic;
        if (x >= 0.0 && x < 4.0) return MapKind::elliptic;
        if (x > 4.0) return MapKind::hyperbolic;
    }
    return MapKind::loxodromic;
}

namespace detail {
// Eigenvalues of the normalized matrix, larger modulus first.
inline std::pair<Complex, Complex> eigenvalues(const MoebiusMap& m) {
    Complex tr = m.trace();
    Complex s = std::sqrt(tr * tr - 4.0);
    Complex l1 = 0.5 * (tr + s), l2 = 0.5 * (tr - s);
    if (std::abs(l1) < std::abs(l2)) std::swap(l1, l2);
    return {l1, l2};
}
}  // namespace detail

// Fixed points of a non-identity holomorphic map, ordered (attracting,
// repelling) by eigenvalue modulus; elliptic maps get a deterministic order
// and parabolic maps return their single fixed point twice.
inline std::pair<ComplexPoint, ComplexPoint> fixed_points(const MoebiusMap& m) {
    if (m.is_anti()) throw std::invalid_argument("fixed points require a holomorphic map");
    if (m.is_identity()) throw std::domain_error("undefined fixed-point set");
    double scale = std::max({std::abs(m.a()), std::abs(m.b()), std::abs(m.d()), 1.0});
    if (std::abs(m.c()) <= 1e-13 * scale) {
        ComplexPoint inf = ComplexPoint::infinity();
        if (std::abs(m.a() - m.d()) <= 1e-13 * (std::abs(m.a()) + std::abs(m.d()))) {
            return {inf, inf};  // parabolic translation
        }
        ComplexPoint finite(m.b() / (m.d() - m.a()));
        // multiplier at infinity is a/d; |a/d| > 1 makes infinity attracting
        if (std::abs(m.a()) >= std::abs(m.d())) return {inf, finite};
        return {finite, inf};
    }
    auto [l1, l2] = detail::eigenvalues(m);
    if (std::abs(l1 - l2) <= 1e-13 * std::abs(l1)) {
        ComplexPoint fp((l1 - m.d()) / m.c());
        return {fp, fp};  // parabolic
    }
    return {ComplexPoint((l1 - m.d()) / m.c()), ComplexPoint((l2 - m.d()) / m.c())};
}

// Derivative of the map at one of its finite fixed points (multiplier);
// for the fixed point at infinity the multiplier is taken in the 1/z chart.
inline Complex multiplier_at(const MoebiusMap& m, const ComplexPoint& fp) {
    if (m.is_anti()) throw std::invalid_argument("multiplier requires a holomorphic map");
    if (fp.is_infinity()) {
        // w = 1/z chart: w -> (d w + c)/(b w + a), derivative at 0 is
        // (da - cb)/a^2 = 1/a^2 for det 1.
        return 1.0 / (m.a() * m.a());
    }
    Complex den = m.c() * fp.z + m.d();
    return 1.0 / (den * den);
}

inline double translation_length(const MoebiusMap& m) {
    MapKind kind = classify(m);
    if (kind == MapKind::hyperbolic) {
        return 2.0 * std::acosh(std::max(1.0, 0.5 * std::abs(m.trace())));
    }
    if (kind == MapKind::loxodromic) {
        return 2.0 * std::log(std::abs(detail::eigenvalues(m).first));
    }
    throw std::domain_error("no translation length");
}

}  // namespace kleinorbit
