#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <vector>

#include "natanzon/hypergeometric.hpp"
#include "natanzon/integrate.hpp"
#include "natanzon/spectrum.hpp"
#include "natanzon/zmap.hpp"

namespace natanzon {

// A normalized bound state
//
//   Phi(z) = K z^(beta/2) (1-z)^(delta/2) R(z)^(1/4) 2F1(-nu, alpha-nu; 1+beta; z)
//
// carried together with the geometry it lives on.  `params` may differ from
// map->params() in (f, h0, h1) — satellite partners share the (a, c0, c1)
// geometry and hence the map — but never in the geometry coefficients.
struct BoundState {
    NatanzonParams params;
    std::shared_ptr<const ZMap> map;
    Level level;
    TerminatingHyp hyp;
    double K = 1.0;
};

struct PhiEval {
    double value = 0.0;
    double d1 = 0.0;  // dPhi/dr
    double d2 = 0.0;  // d2Phi/dr2
};

namespace detail {

struct PhiZEval {
    double value = 0.0, dz = 0.0, dzz = 0.0;
};

// Phi and its z-derivatives via the logarithmic derivative of the prefactor
//   A(z) = z^(beta/2) (1-z)^(delta/2) R^(1/4),
//   L = (ln A)' = beta/(2z) - delta/(2(1-z)) + R'/(4R),
//   L' = -beta/(2z^2) - delta/(2(1-z)^2) + (2aR - R'^2)/(4R^2),
// so Phi_z = K A (L F + F') and Phi_zz = K A ((L^2 + L') F + 2 L F' + F'').
inline PhiZEval phi_eval_z(const BoundState& st, double z) {
    if (!(z > 0.0 && z < 1.0)) return {};  // endpoint limits: the state vanishes
    const NatanzonParams& p = st.params;
    const double beta = st.level.beta, delta = st.level.delta;
    const double R = eval_R(p, z);
    const double Rp = eval_R_dz(p, z);
    const double A = std::pow(z, 0.5 * beta) * std::pow(1.0 - z, 0.5 * delta) * std::pow(R, 0.25);
    const double F = hyp_eval(st.hyp, z);
    const double F1 = hyp_eval_deriv(st.hyp, z, 1);
    const double F2 = hyp_eval_deriv(st.hyp, z, 2);
    const double L = 0.5 * beta / z - 0.5 * delta / (1.0 - z) + 0.25 * Rp / R;
    const double Lp = -0.5 * beta / (z * z) - 0.5 * delta / ((1.0 - z) * (1.0 - z)) +
                      (2.0 * p.a * R - Rp * Rp) / (4.0 * R * R);
    PhiZEval e;
    e.value = st.K * A * F;
    e.dz = st.K * A * (L * F + F1);
    e.dzz = st.K * A * ((L * L + Lp) * F + 2.0 * L * F1 + F2);
    return e;
}

}  // namespace detail

// State value and radial derivatives at radius r, using the analytic chain
// rule through the change of variable (z' = w, z'' = w w_z).
inline PhiEval eval_state(const BoundState& st, double r) {
    const double z = st.map->z_of_r(r);
    if (!(z > 0.0 && z < 1.0)) return {};
    const auto e = detail::phi_eval_z(st, z);
    double w, wz, wzz;
    detail::w_derivs(st.params, z, w, wz, wzz);
    PhiEval out;
    out.value = e.value;
    out.d1 = e.dz * w;
    out.d2 = e.dzz * w * w + e.dz * w * wz;
    return out;
}

inline double state_derivative(const BoundState& st, double r) { return eval_state(st, r).d1; }

namespace detail {

// Power of r (left) or wall distance (right) with which the state vanishes at
// a finite endpoint; used for the analytic tail of the norm integral.
inline double left_vanishing_power(const BoundState& st) {
    const double t = tau(st.params);
    return (t > 0.0) ? st.level.beta + 0.5 : 0.5 * st.level.beta + 0.5;
}

inline double right_vanishing_power(const BoundState& st) {
    const double kappa = -(2.0 * st.params.a + tau(st.params));
    return (kappa > 0.0) ? st.level.delta + 0.5 : 0.5 * st.level.delta + 0.5;
}

}  // namespace detail

// L2 inner product <x, y> over the full radial domain: adaptive quadrature on
// the overlap of the tabulated ranges plus analytic endpoint tails.  At an
// infinite end the integrand decays like exp(2 beta r / sqrt(c0)) (left) or
// exp(-2 delta r / sqrt(c1)) (right); at a finite end it vanishes like a
// power of the wall distance.  Both states must share the (a, c0, c1)
// geometry.
inline double inner_product(const BoundState& x, const BoundState& y) {
    const NatanzonParams& px = x.params;
    const NatanzonParams& py = y.params;
    if (px.a != py.a || px.c0 != py.c0 || px.c1 != py.c1)
        throw std::invalid_argument("inner_product: states live on different geometries");

    const double ra = std::max(x.map->r_lo(), y.map->r_lo());
    const double rb = std::min(x.map->r_hi(), y.map->r_hi());
    if (!(rb > ra)) throw std::invalid_argument("inner_product: tabulated ranges do not overlap");

    const auto f = [&](double r) { return eval_state(x, r).value * eval_state(y, r).value; };

    double scale = 0.0;
    for (int i = 0; i <= 32; ++i)
        scale = std::max(scale, std::fabs(f(ra + (rb - ra) * static_cast<double>(i) / 32)));
    double total = adaptive_simpson(f, ra, rb, 1e-12 * std::max(1.0, scale));

    const bool left_finite = (px.c0 == 0.0);
    const bool right_finite = (px.c1 == 0.0);

    if (left_finite) {
        const double e = detail::left_vanishing_power(x) + detail::left_vanishing_power(y);
        total += f(ra) * ra / (e + 1.0);
    } else {
        total += f(ra) * std::sqrt(px.c0) / (x.level.beta + y.level.beta);
    }
    if (right_finite) {
        const double wall = std::min(x.map->wall_r(), y.map->wall_r());
        const double d = wall - rb;
        const double e = detail::right_vanishing_power(x) + detail::right_vanishing_power(y);
        total += f(rb) * d / (e + 1.0);
    } else {
        total += f(rb) * std::sqrt(px.c1) / (x.level.delta + y.level.delta);
    }
    return total;
}

// Builds the level-nu bound state of parameter set p on a shared geometry.
// Normalization fixes K > 0 with <Phi, Phi> = 1.
inline BoundState build_state(std::shared_ptr<const ZMap> map, const NatanzonParams& p, int nu) {
    if (!map) throw std::invalid_argument("build_state: null map");
    const NatanzonParams& mg = map->params();
    if (p.a != mg.a || p.c0 != mg.c0 || p.c1 != mg.c1)
        throw std::invalid_argument("build_state: parameter set does not match the map geometry");
    const auto lev = solve_level(p, nu);
    if (!lev) throw std::invalid_argument("build_state: no bound level with this index");
    BoundState st;
    st.params = p;
    st.map = std::move(map);
    st.level = *lev;
    st.hyp = make_hyp(nu, lev->alpha - nu, 1.0 + lev->beta);
    st.K = 1.0;
    const double n2 = inner_product(st, st);
    if (!(n2 > 0.0) || !std::isfinite(n2))
        throw std::runtime_error("build_state: normalization integral failed");
    st.K = 1.0 / std::sqrt(n2);
    return st;
}

inline BoundState build_state(std::shared_ptr<const ZMap> map, int nu) {
    if (!map) throw std::invalid_argument("build_state: null map");
    const NatanzonParams p = map->params();
    return build_state(std::move(map), p, nu);
}

// Interior sign changes of the polynomial factor over z in (0, 1); for a
// bound state this equals the level index.
inline int node_count(const BoundState& st) {
    const int M = 4096;
    int changes = 0;
    double prev = 0.0;
    for (int i = 1; i < M; ++i) {
        const double z = static_cast<double>(i) / M;
        const double v = hyp_eval(st.hyp, z);
        if (v == 0.0) continue;
        if (prev != 0.0 && (v < 0.0) != (prev < 0.0)) ++changes;
        prev = v;
    }
    return changes;
}

// Residuals of the two three-term relations among terminating 2F1's with
// shifted parameters (F below always at the same argument z, upper parameter
// a_h = -nu a nonpositive integer):
//
//   lowering:  (c-1) F(a-1, b; c-1) + (b - c + 1) F(a, b; c)
//              + b (z-1) F(a, b+1; c)                                   = 0
//   raising:   a b z (z-1) F(a+1, b+1; c+1) + c (c-1) F(a-1, b; c-1)
//              + c (b z - c + 1) F(a, b; c)                             = 0
//
// The (c-1) F(a-1, b; c-1) products are evaluated through their finite limit
// when c = 1.  Residuals are scaled by the largest participating term.
struct ContiguousResiduals {
    double lowering = 0.0;
    double raising = 0.0;
};

inline ContiguousResiduals contiguous_residuals(double a_h, double b, double c, double z) {
    const double nu_round = std::round(-a_h);
    if (!(nu_round >= 0.0) || std::fabs(-a_h - nu_round) > 1e-9)
        throw std::invalid_argument("contiguous_residuals: upper parameter must be a nonpositive integer");
    const int nu = static_cast<int>(nu_round);

    const double F0 = hyp_poly(nu, b, c, z);
    const double Fb1 = hyp_poly(nu, b + 1.0, c, z);
    const double cm1_Fm1 = hyp_poly_times_c(nu + 1, b, c - 1.0, z);
    const double Fp1 = (nu >= 1) ? hyp_poly(nu - 1, b + 1.0, c + 1.0, z) : 0.0;

    ContiguousResiduals r;
    {
        const double t1 = cm1_Fm1;
        const double t2 = (b - c + 1.0) * F0;
        const double t3 = b * (z - 1.0) * Fb1;
        const double s = std::max({1.0, std::fabs(t1), std::fabs(t2), std::fabs(t3)});
        r.lowering = (t1 + t2 + t3) / s;
    }
    {
        const double t1 = (-nu) * b * z * (z - 1.0) * Fp1;
        const double t2 = c * cm1_Fm1;
        const double t3 = c * (b * z - c + 1.0) * F0;
        const double s = std::max({1.0, std::fabs(t1), std::fabs(t2), std::fabs(t3)});
        r.raising = (t1 + t2 + t3) / s;
    }
    return r;
}

}  // namespace natanzon
