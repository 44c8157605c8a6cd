#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kleinorbit/gen_circle.hpp"
#include "kleinorbit/moebius.hpp"

namespace kleinorbit {

// A symmetric right-angled-at-the-axes quadrilateral reflection datum: four
// circles meeting at interior angle pi/n, with the C1/C3 pair centered at
// +-1 on the real axis and the C2/C4 pair at +-b i, carrying the inversions
// tau1..tau4, the compositions xi = tau1 tau3 and eta = tau2 tau4, their
// fixed points, and (away from the degenerate boundary case) the circle
// through q, q', p together with the circle it accumulates on.
struct QuadGroupData {
    int n;
    double s;
    double t;
    GenCircle c1, c2, c3, c4;
    MoebiusMap tau1, tau2, tau3, tau4;
    MoebiusMap xi;   // tau1 after tau3; hyperbolic, axis endpoints q, q'
    MoebiusMap eta;  // tau2 after tau4; hyperbolic, axis endpoints p, p'
    ComplexPoint p;       // repelling fixed point of eta (imaginary axis)
    ComplexPoint pPrime;  // attracting fixed point of eta
    ComplexPoint q;       // fixed points of xi (real axis)
    ComplexPoint qPrime;
    std::optional<GenCircle> exoticC;  // circle through q, q', p
    std::optional<GenCircle> limitC;   // accumulation circle through p, p'
};

// Slack in the discreteness inequality (s-1)(t-1) <= 4 cos^2(pi/n); zero
// exactly on the boundary where the group preserves a round circle.
inline double fuchsian_defect_of(int n, double s, double t) {
    double c = std::cos(M_PI / n);
    double defect = 4.0 * c * c - (s - 1.0) * (t - 1.0);
    // Boundary data hit rounding-level residue (cos(pi/n) is inexact); snap
    // so that exact-boundary parameters report a defect of exactly zero.
    double scale = 4.0 * c * c + std::abs((s - 1.0) * (t - 1.0));
    return std::abs(defect) <= 1e-12 * scale ? 0.0 : defect;
}

inline double fuchsian_defect(const QuadGroupData& d) {
    return fuchsian_defect_of(d.n, d.s, d.t);
}

inline constexpr double kFuchsianTol = 1e-9;

inline bool is_fuchsian(const QuadGroupData& d, double tol = kFuchsianTol) {
    return fuchsian_defect(d) <= tol;
}

namespace detail {

// Closed-form solution of the three constraints
//   inversive_distance(C1, C3) = s,
//   inversive_distance(C2, C4) = t,
//   adjacent pairs meet at angle pi/n,
// for centers +-1, +-b i and radii r1 = sqrt(alpha), r2 = b sqrt(beta).
// Writing alpha = 2/(s+1), beta = 2/(t+1), the angle constraint becomes a
// quadratic in b whose smaller root is the convex configuration:
//   b = (cos(pi/n) sqrt(alpha beta) - sqrt(disc)) / (1 - beta),
//   disc = (4 cos^2(pi/n) - (s-1)(t-1)) / ((s+1)(t+1)).
struct QuadSolution {
    double c, alpha, beta, disc, b, r1, r2;
};

inline QuadSolution solve_quad_closed_form(int n, double s, double t) {
    QuadSolution sol{};
    sol.c = std::cos(M_PI / n);
    sol.alpha = 2.0 / (s + 1.0);
    sol.beta = 2.0 / (t + 1.0);
    // Snap rounding-level defects to the exact boundary: b depends on
    // sqrt(defect), so an eps-sized defect would otherwise shift the
    // configuration by sqrt(eps) and spoil the boundary orthogonality.
    double defect = fuchsian_defect_of(n, s, t);
    double scale = 4.0 * sol.c * sol.c + std::abs((s - 1.0) * (t - 1.0));
    if (std::abs(defect) <= 1e-12 * scale) defect = 0.0;
    sol.disc = defect / ((s + 1.0) * (t + 1.0));
    if (sol.disc < 0.0) sol.disc = 0.0;  // caller has already range-checked
    sol.b = (sol.c * std::sqrt(sol.alpha * sol.beta) - std::sqrt(sol.disc)) / (1.0 - sol.beta);
    sol.r1 = std::sqrt(sol.alpha);
    sol.r2 = sol.b * std::sqrt(sol.beta);
    return sol;
}

}  // namespace detail

inline QuadGroupData solve_quadrilateral(int n, double s, double t) {
    if (n < 3 || !(s > 1.0) || !(t > 1.0) || !std::isfinite(s) || !std::isfinite(t)) {
        throw std::domain_error("not a discrete quadrilateral datum");
    }
    double defect = fuchsian_defect_of(n, s, t);
    if (defect < -1e-12) {
        throw std::domain_error(
            "not a discrete quadrilateral datum: requires (s-1)(t-1) <= 4cos^2(pi/n)");
    }

    detail::QuadSolution sol = detail::solve_quad_closed_form(n, s, t);
    if (!(sol.b > 0.0) || !(sol.r2 > 0.0) || !std::isfinite(sol.b)) {
        throw std::domain_error("not a discrete quadrilateral datum");
    }

    GenCircle c1 = GenCircle::from_center_radius(Complex(1.0, 0.0), sol.r1);
    GenCircle c3 = GenCircle::from_center_radius(Complex(-1.0, 0.0), sol.r1);
    GenCircle c2 = GenCircle::from_center_radius(Complex(0.0, sol.b), sol.r2);
    GenCircle c4 = GenCircle::from_center_radius(Complex(0.0, -sol.b), sol.r2);

    // The closed form must reproduce the defining constraints; treat failure
    // as a solver bug rather than a caller error.
    auto residual = [](double got, double want) {
        return std::abs(got - want) / (1.0 + std::abs(want));
    };
    bool ok = residual(inversive_distance(c1, c3), s) < 1e-10 &&
              residual(inversive_distance(c2, c4), t) < 1e-10 &&
              residual(inversive_distance(c1, c2), sol.c) < 1e-10 &&
              residual(inversive_distance(c2, c3), sol.c) < 1e-10 &&
              residual(inversive_distance(c3, c4), sol.c) < 1e-10 &&
              residual(inversive_distance(c4, c1), sol.c) < 1e-10;
    if (!ok) throw std::runtime_error("quadrilateral constraint residuals did not vanish");

    MoebiusMap tau1 = inversion_in(c1);
    MoebiusMap tau2 = inversion_in(c2);
    MoebiusMap tau3 = inversion_in(c3);
    MoebiusMap tau4 = inversion_in(c4);
    MoebiusMap xi = compose(tau1, tau3);
    MoebiusMap eta = compose(tau2, tau4);

    auto [qAtt, qRep] = fixed_points(xi);
    auto [pAtt, pRep] = fixed_points(eta);

    QuadGroupData d{n,    s,    t,    c1,   c2,   c3,  c4,   tau1, tau2,
                    tau3, tau4, xi,   eta,  pRep, pAtt, qAtt, qRep, std::nullopt,
                    std::nullopt};

    if (defect > kFuchsianTol) {
        GenCircle exotic = circle_through(d.q, d.qPrime, d.p);
        d.exoticC = exotic;
        d.limitC = tangent_circle_at(exotic, d.p, d.pPrime);
    }
    return d;
}

inline GenCircle exotic_circle(const QuadGroupData& d) {
    if (!d.exoticC) throw std::domain_error("exotic circle degenerates to limit set");
    return *d.exoticC;
}

inline GenCircle limit_circle(const QuadGroupData& d) {
    if (!d.limitC) throw std::domain_error("exotic circle degenerates to limit set");
    return *d.limitC;
}

struct AccumulationReport {
    std::vector<std::pair<int, double>> distances;  // (k, d(eta^k C, C'))
    bool converged = false;
    double isolation_radius = 0.0;
};

namespace detail {

// Orbit of the point p under the group generated by the two inversions
// tau1, tau3 (both involutions, so reduced words alternate).
inline std::vector<ComplexPoint> alternating_orbit(const MoebiusMap& tau1, const MoebiusMap& tau3,
                                                   const ComplexPoint& p, int depth) {
    std::vector<ComplexPoint> out{p};
    ComplexPoint head1 = p, head3 = p;  // current end of the words 1..., 3...
    int parity1 = 0, parity3 = 1;
    for (int level = 1; level <= depth; ++level) {
        head1 = (parity1 == 0 ? tau1 : tau3)(head1);
        head3 = (parity3 == 0 ? tau1 : tau3)(head3);
        parity1 ^= 1;
        parity3 ^= 1;
        out.push_back(head1);
        out.push_back(head3);
    }
    return out;
}

}  // namespace detail

// Track circle_distance(eta^k . C, C') for k = 1..kMax. The iterates are
// evaluated in the diagonalizing coordinate of eta: with V sending (inf, 0)
// to (p, p') and kappa the multiplier of eta at p', the k-th iterate is
// V applied to the exact line V^{-1}(C) with its coefficients contracted by
// kappa^k. This avoids compounding the expansion at the repelling point,
// which otherwise swamps the geometrically shrinking distances.
inline AccumulationReport verify_accumulation(const QuadGroupData& d, int kMax, double tol,
                                              int isolationDepth = 10) {
    if (!d.exoticC) throw std::domain_error("exotic circle degenerates to limit set");
    if (kMax < 3) throw std::invalid_argument("kMax must be at least 3");

    Complex p = d.p.z, pPrime = d.pPrime.z;
    MoebiusMap V = MoebiusMap::from_matrix(p, pPrime, 1.0, 1.0);
    MoebiusMap Vinv = V.inverse();
    Complex kappa = multiplier_at(d.eta, d.pPrime);
    if (!(std::abs(kappa) < 1.0)) throw std::runtime_error("eta is not contracting at pPrime");
    if (static_cast<double>(kMax) * std::log10(1.0 / std::abs(kappa)) > 280.0) {
        throw std::domain_error("dynamic range exceeded");
    }

    // Exact line through the Vinv-images of the two real points of C.
    Complex w1 = Vinv(d.q).z, w2 = Vinv(d.qPrime).z;
    Complex dir = w2 - w1;
    Complex normal = Complex(-dir.imag(), dir.real()) / std::abs(dir);
    GenCircle K = GenCircle::line(normal, -2.0 * (std::conj(normal) * w1).real());

    GenCircle limitC = *d.limitC;
    AccumulationReport report;
    report.distances.reserve(kMax);
    double r = std::abs(kappa);
    Complex phase = std::abs(kappa) / std::conj(kappa);  // unit modulus
    double rk = 1.0;
    Complex phasek = 1.0;
    for (int k = 1; k <= kMax; ++k) {
        rk *= r;
        phasek *= phase;
        phasek /= std::abs(phasek);
        // Contracted line, already in normalized Hermitian form.
        GenCircle Kk = GenCircle::from_hermitian(0.0, K.b() * phasek, K.d() * rk);
        report.distances.emplace_back(k, circle_distance(apply_circle(V, Kk), limitC));
    }
    report.converged = report.distances.back().second < tol;

    // Isolation of p inside the approximated intersection of the limit set
    // with C: the only candidate points are the alternating orbit of p and
    // the pair q, q'; the radius is the gap to the nearest non-orbit point.
    std::vector<ComplexPoint> orbit =
        detail::alternating_orbit(d.tau1, d.tau3, d.p, isolationDepth);
    double nearestForeign = std::min(chordal(d.p, d.q), chordal(d.p, d.qPrime));
    for (const ComplexPoint& z : orbit) {
        // A collision of the orbit with q or q' would make the isolation
        // radius meaningless; it cannot happen for a valid datum.
        if (chordal(z, d.q) < 1e-12 || chordal(z, d.qPrime) < 1e-12) {
            throw std::runtime_error("orbit of p collides with the xi fixed points");
        }
    }
    report.isolation_radius = nearestForeign;
    return report;
}

}  // namespace kleinorbit
