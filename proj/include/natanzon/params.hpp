#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "natanzon/integrate.hpp"
#include "natanzon/rational.hpp"

namespace natanzon {

// The six-parameter family of potentials handled by this library is built on
// the quadratic
//
//     R(z) = a z^2 + tau z + c0,        tau = c1 - c0 - a,
//
// which must stay positive on the open interval z in (0, 1).  Note R(0) = c0
// and R(1) = c1, so an endpoint zero of R is controlled directly by c0/c1 and
// decides whether that end of the potential sits at finite radius.

enum class PresetKind { pt2, rm };

// Provenance annotation for parameter sets produced by a preset constructor.
// Carrying (A, B, alpha) along lets downstream code report satellite steps in
// the preset's own labels.
struct PresetInfo {
    PresetKind kind;
    double A;
    double B;
    double alpha;
};

struct NatanzonParams {
    double a = 0.0;
    double c0 = 0.0;
    double c1 = 0.0;
    double f = 0.0;
    double h0 = 0.0;
    double h1 = 0.0;
    std::optional<PresetInfo> preset;
};

inline double tau(const NatanzonParams& p) { return p.c1 - p.c0 - p.a; }

// Discriminant of R: tau^2 - 4 a c0.
inline double discriminant(const NatanzonParams& p) {
    const double t = tau(p);
    return t * t - 4.0 * p.a * p.c0;
}

// Both derived quantities of R at once: (tau, discriminant).
inline std::pair<double, double> tau_delta(const NatanzonParams& p) {
    return {tau(p), discriminant(p)};
}

inline double eval_R(const NatanzonParams& p, double z) {
    return (p.a * z + tau(p)) * z + p.c0;
}

inline double eval_R_dz(const NatanzonParams& p, double z) {
    return 2.0 * p.a * z + tau(p);
}

// Radial measure of the change of variable: dr/dz = sqrt(R) / (2 z (1-z)).
inline double dr_dz(const NatanzonParams& p, double z) {
    return std::sqrt(eval_R(p, z)) / (2.0 * z * (1.0 - z));
}

struct Admissibility {
    bool ok = false;
    std::string reason;
    explicit operator bool() const { return ok; }
};

// A parameter set is admissible when R > 0 on the open interval (0, 1).
// Endpoint zeros (c0 = 0 and/or c1 = 0) are allowed; they mark finite-radius
// endpoints.  The degenerate case a = c0 = c1 = 0 makes R vanish identically
// and is rejected.
inline Admissibility admissible(const NatanzonParams& p) {
    const double t = tau(p);
    if (p.a == 0.0 && p.c0 == 0.0 && p.c1 == 0.0)
        return {false, "a, c0 and c1 are all zero, so R(z) vanishes identically"};
    if (p.c0 < 0.0) return {false, "c0 < 0 makes R(0) negative"};
    if (p.c1 < 0.0) return {false, "c1 < 0 makes R(1) negative"};
    if (p.c0 == 0.0) {
        // R ~ tau z near z = 0 (or a z^2 when tau also vanishes).
        if (t < 0.0 || (t == 0.0 && p.a <= 0.0))
            return {false, "R(z) turns negative just inside z = 0"};
    }
    if (p.c1 == 0.0) {
        // R ~ -R'(1) (1-z) near z = 1, with R'(1) = 2a + tau.
        const double rp1 = 2.0 * p.a + t;
        if (rp1 > 0.0 || (rp1 == 0.0 && p.a <= 0.0))
            return {false, "R(z) turns negative just inside z = 1"};
    }
    if (p.a > 0.0) {
        // Convex parabola: check the vertex when it falls inside (0, 1).
        const double zv = -t / (2.0 * p.a);
        if (zv > 0.0 && zv < 1.0 && discriminant(p) >= 0.0)
            return {false, "R(z) has a zero inside (0, 1)"};
    }
    // Concave or linear R that is nonnegative at both ends stays positive on
    // the open interval.
    return {true, ""};
}

// Closed form of the potential as a function of z (units hbar = 2m = 1):
//
//   V(z) = [f z^2 - (h0 - h1 + f) z + h0 + 1] / R
//        + { a + [a + (c1 - c0)(2z - 1)] / (z (z - 1)) - 5 Delta / (4 R) }
//          * [z (1 - z) / R]^2
//
// Limits: V -> (h0+1)/c0 as z -> 0 and V -> (h1+1)/c1 as z -> 1 when the
// corresponding coefficient is nonzero (the infinite-radius asymptotes);
// a vanishing coefficient turns that endpoint into a finite-radius wall.
inline double potential_z(const NatanzonParams& p, double z) {
    const double R = eval_R(p, z);
    const double num = p.f * z * z - (p.h0 - p.h1 + p.f) * z + p.h0 + 1.0;
    const double bracket = p.a + (p.a + (p.c1 - p.c0) * (2.0 * z - 1.0)) / (z * (z - 1.0)) -
                           5.0 * discriminant(p) / (4.0 * R);
    const double g = z * (1.0 - z) / R;
    return num / R + bracket * g * g;
}

struct PotentialDomain {
    bool left_finite = false;   // z = 0 endpoint at finite radius (c0 = 0)
    bool right_finite = false;  // z = 1 endpoint at finite radius (c1 = 0)
    double r_min = -std::numeric_limits<double>::infinity();
    double r_max = std::numeric_limits<double>::infinity();
};

namespace detail {

// Arc length in r across z in [z_lo, z_hi] for an admissible parameter set,
// with the endpoint zeros of R removed analytically: substituting z = s^2
// (left) or z = 1 - s^2 (right) turns the integrable 1/sqrt(z)-type endpoint
// singularity of dr/dz into a smooth integrand.
inline double arc_length_left_endpoint(const NatanzonParams& p, double z_hi) {
    // integral over z in [0, z_hi], valid when c0 = 0: integrand becomes
    // sqrt(tau + a s^2) / (1 - s^2) with z = s^2.
    const double t = tau(p);
    const double s_hi = std::sqrt(z_hi);
    return adaptive_simpson(
        [&](double s) { return std::sqrt(t + p.a * s * s) / (1.0 - s * s); },
        0.0, s_hi, 1e-14);
}

inline double arc_length_right_endpoint(const NatanzonParams& p, double z_lo) {
    // integral over z in [z_lo, 1], valid when c1 = 0: with z = 1 - s^2 the
    // integrand becomes sqrt(-(2a + tau) + a s^2) / (1 - s^2).
    const double g0 = -(2.0 * p.a + tau(p));
    const double s_hi = std::sqrt(1.0 - z_lo);
    return adaptive_simpson(
        [&](double s) { return std::sqrt(g0 + p.a * s * s) / (1.0 - s * s); },
        0.0, s_hi, 1e-14);
}

inline double arc_length_interior(const NatanzonParams& p, double z_lo, double z_hi) {
    return adaptive_simpson([&](double z) { return dr_dz(p, z); }, z_lo, z_hi, 1e-14);
}

}  // namespace detail

// Endpoint classification and the radial span of the potential.  Conventions:
// a finite left endpoint sits at r = 0; with both endpoints at infinity the
// radial origin is anchored at z = 1/2, so a finite right endpoint paired
// with an infinite left one sits at the arc length measured from z = 1/2.
inline PotentialDomain classify_domain(const NatanzonParams& p) {
    const Admissibility adm = admissible(p);
    if (!adm) throw std::invalid_argument("classify_domain: " + adm.reason);
    PotentialDomain d;
    d.left_finite = (p.c0 == 0.0);
    d.right_finite = (p.c1 == 0.0);
    d.r_min = d.left_finite ? 0.0 : -std::numeric_limits<double>::infinity();
    if (!d.right_finite) {
        d.r_max = std::numeric_limits<double>::infinity();
        return d;
    }
    if (d.left_finite) {
        d.r_max = detail::arc_length_left_endpoint(p, 0.5) +
                  detail::arc_length_right_endpoint(p, 0.5);
    } else {
        d.r_max = detail::arc_length_right_endpoint(p, 0.5);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Preset parameter sets.
//
// preset_pt2: V(r) = (A-B)^2 - A(A+alpha) sech^2(alpha r) + B(B-alpha)
// csch^2(alpha r) on r > 0.  Its change of variable is z = tanh^2(alpha r).
//
// preset_rm:  V(r) = A^2 + B^2/A^2 + 2B tanh(alpha r)
// - A(A+alpha) sech^2(alpha r) on the whole line, z = 1/2 + tanh(alpha r)/2.
//
// The constructors accept any alpha > 0 (and A > 0 where the formulas divide
// by A); whether bound levels exist is decided by the spectrum solver, not
// here, so boundary parameter sets produced by satellite steps remain
// constructible.

inline NatanzonParams preset_pt2(double A, double B, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("preset_pt2: alpha must be positive");
    const double a2 = alpha * alpha;
    NatanzonParams p;
    p.a = 0.0;
    p.c0 = 0.0;
    p.c1 = 1.0 / a2;
    p.f = (2.0 * A - alpha) * (2.0 * A + 3.0 * alpha) / (4.0 * a2);
    p.h0 = (2.0 * B - 3.0 * alpha) * (2.0 * B + alpha) / (4.0 * a2);
    p.h1 = (A - B + alpha) * (A - B - alpha) / a2;
    p.preset = PresetInfo{PresetKind::pt2, A, B, alpha};
    return p;
}

inline NatanzonParams preset_rm(double A, double B, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("preset_rm: alpha must be positive");
    if (!(A > 0.0)) throw std::invalid_argument("preset_rm: A must be positive");
    const double a2 = alpha * alpha;
    const double A2 = A * A;
    NatanzonParams p;
    p.a = 0.0;
    p.c0 = 1.0 / a2;
    p.c1 = 1.0 / a2;
    p.f = 4.0 * A * (A + alpha) / a2;
    p.h0 = (-B + A * alpha + A2) * (-B - A * alpha + A2) / (a2 * A2);
    p.h1 = (B + A * alpha + A2) * (B - A * alpha + A2) / (a2 * A2);
    p.preset = PresetInfo{PresetKind::rm, A, B, alpha};
    return p;
}

// Exact-rational images of the preset maps, for oracle-grade checks.
struct RationalParams {
    Rational a, c0, c1, f, h0, h1;
};

inline RationalParams preset_pt2_exact(const Rational& A, const Rational& B, const Rational& alpha) {
    const Rational a2 = alpha * alpha;
    RationalParams p;
    p.a = Rational(0);
    p.c0 = Rational(0);
    p.c1 = Rational(1) / a2;
    p.f = (Rational(2) * A - alpha) * (Rational(2) * A + Rational(3) * alpha) / (Rational(4) * a2);
    p.h0 = (Rational(2) * B - Rational(3) * alpha) * (Rational(2) * B + alpha) / (Rational(4) * a2);
    p.h1 = (A - B + alpha) * (A - B - alpha) / a2;
    return p;
}

inline RationalParams preset_rm_exact(const Rational& A, const Rational& B, const Rational& alpha) {
    const Rational a2 = alpha * alpha;
    const Rational A2 = A * A;
    RationalParams p;
    p.a = Rational(0);
    p.c0 = Rational(1) / a2;
    p.c1 = Rational(1) / a2;
    p.f = Rational(4) * A * (A + alpha) / a2;
    p.h0 = (-B + A * alpha + A2) * (-B - A * alpha + A2) / (a2 * A2);
    p.h1 = (B + A * alpha + A2) * (B - A * alpha + A2) / (a2 * A2);
    return p;
}

}  // namespace natanzon
