#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "natanzon/params.hpp"

namespace natanzon {

struct Abd {
    double alpha, beta, delta;
};

// Positive square roots of the energy-shifted radicands
//   alpha^2 = -a E + f + 1,  beta^2 = -c0 E + h0 + 1,  delta^2 = -c1 E + h1 + 1;
// empty when any radicand is negative (complex branch, no bound state there).
inline std::optional<Abd> abd_of_energy(const NatanzonParams& p, double E) {
    const double ra = -p.a * E + p.f + 1.0;
    const double rb = -p.c0 * E + p.h0 + 1.0;
    const double rd = -p.c1 * E + p.h1 + 1.0;
    if (!(ra >= 0.0) || !(rb >= 0.0) || !(rd >= 0.0)) return std::nullopt;
    return Abd{std::sqrt(ra), std::sqrt(rb), std::sqrt(rd)};
}

// One bound level: index, energy, exponent triple, and the algebra labels
// p = (alpha+beta)/2, m = (alpha-beta)/2, q = (delta^2-1)/4.
struct Level {
    int nu = 0;
    double E = 0.0;
    double alpha = 0.0, beta = 0.0, delta = 0.0;
    double p = 0.0, q = 0.0, m = 0.0;
};

inline Level make_level(const NatanzonParams& np, int nu, double E) {
    const auto abd = abd_of_energy(np, E);
    if (!abd) throw std::invalid_argument("make_level: exponents are complex at this energy");
    Level l;
    l.nu = nu;
    l.E = E;
    l.alpha = abd->alpha;
    l.beta = abd->beta;
    l.delta = abd->delta;
    l.p = 0.5 * (l.alpha + l.beta);
    l.m = 0.5 * (l.alpha - l.beta);
    l.q = 0.25 * (l.delta * l.delta - 1.0);
    return l;
}

// Residual of the quantization condition alpha - beta - delta = 2 nu + 1;
// NaN on the complex branch.
inline double quantization_residual(const NatanzonParams& p, double E, int nu) {
    const auto abd = abd_of_energy(p, E);
    if (!abd) return std::numeric_limits<double>::quiet_NaN();
    return abd->alpha - abd->beta - abd->delta - (2.0 * nu + 1.0);
}

// Lowest continuum edge, i.e. the smaller of the potential asymptotes over
// the infinite-radius ends; empty when both ends are finite walls (purely
// discrete spectrum).
inline std::optional<double> continuum_threshold(const NatanzonParams& p) {
    std::optional<double> t;
    if (p.c0 > 0.0) t = (p.h0 + 1.0) / p.c0;
    if (p.c1 > 0.0) {
        const double v = (p.h1 + 1.0) / p.c1;
        if (!t || v < *t) t = v;
    }
    return t;
}

// Grid minimum of the potential over a logistically clustered z sample; used
// only to floor the energy search window, so moderate accuracy suffices.
inline double min_potential(const NatanzonParams& p, int n = 4097) {
    const double eps = 1e-9;
    const double umax = std::log((1.0 - eps) / eps);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double u = -umax + 2.0 * umax * static_cast<double>(i) / (n - 1);
        const double z = 1.0 / (1.0 + std::exp(-u));
        const double v = potential_z(p, z);
        if (std::isfinite(v) && v < best) best = v;
    }
    return best;
}

// Solves the quantization condition for level nu.  The search window is
// [min V - 1, min over positive coefficients of the radicand zeros); when no
// coefficient bounds the window from above (hard walls on both sides) the
// bracket is grown geometrically instead.  The window is scanned with 1e4
// samples and every sign change is bisected; among multiple roots the lowest
// energy wins (node-count consistency with the oscillation oracle).  Returns
// empty when no root exists: that parameter set has no such bound state.
inline std::optional<Level> solve_level(const NatanzonParams& np, int nu) {
    if (nu < 0) throw std::invalid_argument("solve_level: nu must be >= 0");
    const Admissibility adm = admissible(np);
    if (!adm) throw std::invalid_argument("solve_level: " + adm.reason);

    const auto F = [&](double E) { return quantization_residual(np, E, nu); };

    double lo = min_potential(np) - 1.0;
    double hi = std::numeric_limits<double>::infinity();
    if (np.a > 0.0) hi = std::min(hi, (np.f + 1.0) / np.a);
    if (np.c0 > 0.0) hi = std::min(hi, (np.h0 + 1.0) / np.c0);
    if (np.c1 > 0.0) hi = std::min(hi, (np.h1 + 1.0) / np.c1);
    if (np.a < 0.0) lo = std::max(lo, (np.f + 1.0) / np.a);  // alpha radicand reality

    std::pair<double, double> bracket{0.0, 0.0};
    bool have_bracket = false;
    if (std::isfinite(hi)) {
        const double hi_eff = hi - 1e-12 * std::max(1.0, std::fabs(hi));
        if (!(hi_eff > lo)) return std::nullopt;
        const int N = 10000;
        double x0 = lo, f0 = F(x0);
        for (int i = 1; i <= N && !have_bracket; ++i) {
            // The last sample is pinned: accumulated rounding on a huge window
            // must not push it past hi, where radicands turn negative.
            const double x1 = (i == N) ? hi_eff : lo + (hi_eff - lo) * static_cast<double>(i) / N;
            const double f1 = F(x1);
            if (std::isfinite(f0) && std::isfinite(f1) &&
                (f0 == 0.0 || (f0 < 0.0) != (f1 < 0.0))) {
                bracket = {x0, x1};
                have_bracket = true;
            }
            x0 = x1;
            f0 = f1;
        }
    } else {
        double x0 = lo, f0 = F(x0);
        if (!std::isfinite(f0)) return std::nullopt;
        double width = 1.0;
        for (int i = 0; i < 80; ++i) {
            const double x1 = x0 + width;
            const double f1 = F(x1);
            if (!std::isfinite(f1)) break;
            if (f0 == 0.0 || (f0 < 0.0) != (f1 < 0.0)) {
                bracket = {x0, x1};
                have_bracket = true;
                break;
            }
            x0 = x1;
            f0 = f1;
            width *= 2.0;
        }
    }
    if (!have_bracket) return std::nullopt;

    double xa = bracket.first, xb = bracket.second;
    double fa = F(xa);
    if (fa != 0.0) {
        for (int it = 0; it < 200; ++it) {
            const double xm = 0.5 * (xa + xb);
            const double fm = F(xm);
            if (fm == 0.0) {
                xa = xb = xm;
                break;
            }
            if ((fm < 0.0) == (fa < 0.0)) {
                xa = xm;
                fa = fm;
            } else {
                xb = xm;
            }
            if (xb - xa < 1e-15 * std::max(1.0, std::fabs(xa))) break;
        }
    } else {
        xb = xa;
    }
    const double E = 0.5 * (xa + xb);
    if (!abd_of_energy(np, E)) return std::nullopt;
    return make_level(np, nu, E);
}

// Levels nu = 0, 1, ... with strictly increasing energy; stops at the first
// missing index.
inline std::vector<Level> enumerate_levels(const NatanzonParams& np, int max_levels = 64) {
    std::vector<Level> out;
    for (int nu = 0; nu < max_levels; ++nu) {
        const auto l = solve_level(np, nu);
        if (!l) break;
        if (!out.empty() && !(l->E > out.back().E)) break;
        out.push_back(*l);
    }
    return out;
}

// Do two levels of the same potential carry the same (p, q) labels — i.e. do
// consecutive eigenfunctions live in one irreducible representation?
struct IrrepAlignment {
    bool aligned = false;
    double p0 = 0.0, q0 = 0.0;
    double p1 = 0.0, q1 = 0.0;
};

inline IrrepAlignment irrep_alignment(const NatanzonParams& np, int nu0, int nu1) {
    const auto l0 = solve_level(np, nu0);
    const auto l1 = solve_level(np, nu1);
    if (!l0 || !l1) throw std::invalid_argument("irrep_alignment: requested level does not exist");
    IrrepAlignment r;
    r.p0 = l0->p;
    r.q0 = l0->q;
    r.p1 = l1->p;
    r.q1 = l1->q;
    const double tol = 1e-9;
    const auto close = [&](double x, double y) {
        return std::fabs(x - y) <= tol * std::max({1.0, std::fabs(x), std::fabs(y)});
    };
    r.aligned = close(r.p0, r.p1) && close(r.q0, r.q1);
    return r;
}

inline IrrepAlignment irrep_alignment(const NatanzonParams& np, int nu0) {
    return irrep_alignment(np, nu0, nu0 + 1);
}

}  // namespace natanzon
