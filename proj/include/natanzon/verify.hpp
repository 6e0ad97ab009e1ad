#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "natanzon/params.hpp"
#include "natanzon/spectrum.hpp"
#include "natanzon/wavefunction.hpp"
#include "natanzon/zmap.hpp"

namespace natanzon {

struct ResidualReport {
    std::string which;
    double l2_relative = 0.0;
    double max_node = 0.0;
    std::string grid;
};

namespace detail {

inline std::string grid_descriptor(int n, double lo, double hi) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "n=%d r=[%.6g,%.6g]", n, lo, hi);
    return buf;
}

// Casimir operator applied to a radial function u with compact label m and
// realization label p (the azimuthal derivative already replaced by i m):
//
//   Q u = (z-1)^2 [ (z/z'^2) u'' - (m^2/4z) u - p m (1+z)/(2z(z-1)) u
//                   + ((1-p^2)/4z) u + (z z'''/(2 z'^3) - 3 z z''^2/(4 z'^4)) u ]
//
// with the derivatives of the change of variable taken analytically.
inline double casimir_apply(const NatanzonParams& geom, double z, double p, double m, double u,
                            double u_rr) {
    double w, wz, wzz;
    w_derivs(geom, z, w, wz, wzz);
    const double zp = w;
    const double zpp = w * wz;
    const double zppp = w * wz * wz + w * w * wzz;
    const double inner = (z / (zp * zp)) * u_rr - (m * m / (4.0 * z)) * u -
                         p * m * (1.0 + z) / (2.0 * z * (z - 1.0)) * u +
                         (1.0 - p * p) / (4.0 * z) * u +
                         (z * zppp / (2.0 * zp * zp * zp) -
                          3.0 * z * zpp * zpp / (4.0 * zp * zp * zp * zp)) *
                             u;
    return (z - 1.0) * (z - 1.0) * inner;
}

}  // namespace detail

// Residual of the radial equation -Phi'' + V Phi - E Phi on an interior grid,
// with the second derivative analytic.  energy_shift perturbs E for the
// negative control.
inline ResidualReport schrodinger_residual(const NatanzonParams& params, const ZMap& map,
                                           const BoundState& st, int n = 2001,
                                           double energy_shift = 0.0) {
    const double lo = map.r_lo(), hi = map.r_hi();
    const double E = st.level.E + energy_shift;
    double sum_res = 0.0, sum_phi = 0.0, max_res = 0.0, max_phi = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double r = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const PhiEval e = eval_state(st, r);
        const double V = potential_z(params, map.z_of_r(r));
        const double res = -e.d2 + (V - E) * e.value;
        sum_res += res * res;
        sum_phi += e.value * e.value;
        max_res = std::max(max_res, std::fabs(res));
        max_phi = std::max(max_phi, std::fabs(e.value));
    }
    ResidualReport rep;
    rep.which = "schrodinger";
    rep.l2_relative = std::sqrt(sum_res / sum_phi) / (1.0 + std::fabs(E));
    rep.max_node = max_res / ((1.0 + std::fabs(E)) * max_phi);
    rep.grid = detail::grid_descriptor(n, lo, hi);
    return rep;
}

// Residual of (Q - q) Phi relative to ||Phi||.  q_shift perturbs q for the
// negative control.
inline ResidualReport casimir_residual(const NatanzonParams& params, const ZMap& map,
                                       const BoundState& st, int n = 2001, double q_shift = 0.0) {
    const double lo = map.r_lo(), hi = map.r_hi();
    const double q = st.level.q + q_shift;
    double sum_res = 0.0, sum_phi = 0.0, max_res = 0.0, max_phi = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double r = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const double z = map.z_of_r(r);
        const PhiEval e = eval_state(st, r);
        const double res =
            detail::casimir_apply(params, z, st.level.p, st.level.m, e.value, e.d2) - q * e.value;
        sum_res += res * res;
        sum_phi += e.value * e.value;
        max_res = std::max(max_res, std::fabs(res));
        max_phi = std::max(max_phi, std::fabs(e.value));
    }
    ResidualReport rep;
    rep.which = "casimir";
    rep.l2_relative = std::sqrt(sum_res / sum_phi);
    rep.max_node = max_res / max_phi;
    rep.grid = detail::grid_descriptor(n, lo, hi);
    return rep;
}

// Maximum relative mismatch between the two closed forms of the master-
// equation factor, G = 4z/R and G = z'^2/(z(z-1)^2); they are one identity
// apart and both are computed before G is trusted.
inline double master_g_consistency(const NatanzonParams& params, const ZMap& map, int n = 2001) {
    const double lo = map.r_lo(), hi = map.r_hi();
    double worst = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double r = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const double z = map.z_of_r(r);
        const double g1 = 4.0 * z / eval_R(params, z);
        const double w = dzdr(params, z);
        const double g2 = w * w / (z * (z - 1.0) * (z - 1.0));
        worst = std::max(worst, std::fabs(g1 - g2) / std::fabs(g1));
    }
    return worst;
}

// Residual of the operator identity G (Q - q) u = u'' + (E - V) u with
// G = 4z/R.  The identity holds for arbitrary u once the level's labels are
// fixed, so it is evaluated on the modified function u = Phi (1 + z/2):
// on Phi itself both sides vanish separately and a wrong G would go
// unnoticed, whereas off the kernel the G = 1 control (unit_G) degrades by
// orders of magnitude.
inline ResidualReport master_residual(const NatanzonParams& params, const ZMap& map,
                                      const BoundState& st, int n = 2001, bool unit_G = false) {
    const double lo = map.r_lo(), hi = map.r_hi();
    const double E = st.level.E;
    double sum_res = 0.0, sum_u = 0.0, max_res = 0.0, max_u = 0.0;
    for (int i = 1; i + 1 < n; ++i) {
        const double r = lo + (hi - lo) * static_cast<double>(i) / (n - 1);
        const double z = map.z_of_r(r);
        const PhiEval e = eval_state(st, r);
        double w, wz, wzz;
        detail::w_derivs(params, z, w, wz, wzz);
        const double zpp = w * wz;
        const double u = e.value * (1.0 + 0.5 * z);
        const double u_rr = e.d2 * (1.0 + 0.5 * z) + e.d1 * w + e.value * 0.5 * zpp;
        const double Qu = detail::casimir_apply(params, z, st.level.p, st.level.m, u, u_rr);
        const double G = unit_G ? 1.0 : 4.0 * z / eval_R(params, z);
        const double V = potential_z(params, map.z_of_r(r));
        const double res = G * (Qu - st.level.q * u) - (u_rr + (E - V) * u);
        sum_res += res * res;
        sum_u += u * u;
        max_res = std::max(max_res, std::fabs(res));
        max_u = std::max(max_u, std::fabs(u));
    }
    ResidualReport rep;
    rep.which = "master";
    rep.l2_relative = std::sqrt(sum_res / sum_u) / (1.0 + std::fabs(E));
    rep.max_node = max_res / ((1.0 + std::fabs(E)) * max_u);
    rep.grid = detail::grid_descriptor(n, lo, hi);
    return rep;
}

// ---------------------------------------------------------------------------
// Finite-difference eigensolver: the independent oracle.  Three-point central
// discretization of -d2/dr2 + V with Dirichlet ends, eigenvalues located by
// Sturm-sequence bisection on the tridiagonal matrix, Richardson-extrapolated
// over grids h and h/2.  Nothing here calls the analytic spectrum or
// wavefunction machinery.

struct FdSpectrum {
    std::vector<double> energies;
    bool found_requested = true;
};

// The discretized problem: potential callable, hard-wall flags, and for each
// infinite side the asymptote the potential is clamped to outside the
// tabulated range plus the range edge the domain is grown from.
struct FdProblem {
    std::function<double(double)> V;
    bool left_finite = false;
    double left_edge = 0.0;  // wall position, or tabulated edge for infinite side
    bool right_finite = false;
    double right_edge = 0.0;
    std::optional<double> thr_left;   // potential asymptote, infinite left side
    std::optional<double> thr_right;  // potential asymptote, infinite right side
};

namespace detail {

// Number of eigenvalues below lambda (LDL^T pivot signs).
inline int sturm_count(const std::vector<double>& d, double off2, double lambda) {
    int count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        q = (i == 0) ? d[0] - lambda : d[i] - lambda - off2 / q;
        if (q == 0.0) q = 1e-300;
        if (q < 0.0) ++count;
    }
    return count;
}

inline double sturm_eigenvalue(const std::vector<double>& d, double off2, int j, double lo,
                               double hi) {
    for (int it = 0; it < 240 && hi - lo > 1e-13 * std::max(1.0, std::fabs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(d, off2, mid) > j) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline std::vector<double> fd_once(const std::function<double(double)>& V, double ra, double rb,
                                   int n, int k, std::optional<double> thr) {
    const double h = (rb - ra) / n;
    std::vector<double> d(static_cast<std::size_t>(n) - 1);
    for (int i = 1; i < n; ++i) {
        double v = V(ra + i * h);
        if (!std::isfinite(v) || v > 1e15) v = 1e15;
        d[static_cast<std::size_t>(i) - 1] = 2.0 / (h * h) + v;
    }
    const double off2 = 1.0 / (h * h * h * h);
    const double glo = *std::min_element(d.begin(), d.end()) - 2.0 / (h * h);
    const double ghi_g = *std::max_element(d.begin(), d.end()) + 2.0 / (h * h);

    int k_eff = std::min<int>(k, static_cast<int>(d.size()));
    if (thr) k_eff = std::min(k_eff, sturm_count(d, off2, *thr));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(k_eff));
    for (int j = 0; j < k_eff; ++j)
        out.push_back(sturm_eigenvalue(d, off2, j, glo, thr ? std::min(*thr, ghi_g) : ghi_g));
    return out;
}

}  // namespace detail

inline FdSpectrum fd_eigensolve_problem(const FdProblem& pb, int k, int n_final = 16000) {
    if (k < 1) throw std::invalid_argument("fd_eigensolve: k must be >= 1");
    std::optional<double> thr;
    if (pb.thr_left) thr = *pb.thr_left;
    if (pb.thr_right) thr = thr ? std::min(*thr, *pb.thr_right) : *pb.thr_right;

    double la = pb.left_edge;
    double lb = pb.right_edge;
    if (!pb.left_finite || !pb.right_finite) {
        // Grow the truncated domain until it covers at least 40 decay lengths
        // of the shallowest bound level past the tabulated range on every
        // infinite side.
        for (int iter = 0; iter < 12; ++iter) {
            const auto ev = detail::fd_once(pb.V, la, lb, 4000, k, thr);
            if (ev.empty()) break;
            const double etop = ev.back();
            bool settled = true;
            if (!pb.left_finite) {
                const double kap = std::sqrt(std::max(*pb.thr_left - etop, 1e-12));
                const double need = pb.left_edge - 40.0 / kap;
                if (la > need + 1e-9) {
                    la = need;
                    settled = false;
                }
            }
            if (!pb.right_finite) {
                const double kap = std::sqrt(std::max(*pb.thr_right - etop, 1e-12));
                const double need = pb.right_edge + 40.0 / kap;
                if (lb < need - 1e-9) {
                    lb = need;
                    settled = false;
                }
            }
            if (settled) break;
        }
    }

    const auto e1 = detail::fd_once(pb.V, la, lb, n_final, k, thr);
    const auto e2 = detail::fd_once(pb.V, la, lb, 2 * n_final, k, thr);
    FdSpectrum out;
    const std::size_t m = std::min(e1.size(), e2.size());
    for (std::size_t i = 0; i < m; ++i) {
        const double lam = (4.0 * e2[i] - e1[i]) / 3.0;
        if (thr && lam >= *thr) break;
        out.energies.push_back(lam);
    }
    if (static_cast<int>(out.energies.size()) > k) out.energies.resize(static_cast<std::size_t>(k));
    out.found_requested = static_cast<int>(out.energies.size()) >= k;
    return out;
}

// The returned callable holds a reference to `map`; the map must outlive the
// problem object.
inline FdProblem fd_problem_for(const NatanzonParams& params, const ZMap& map) {
    FdProblem pb;
    const PotentialDomain& dom = map.domain();
    pb.left_finite = dom.left_finite;
    pb.right_finite = dom.right_finite;
    if (!dom.left_finite) pb.thr_left = (params.h0 + 1.0) / params.c0;
    if (!dom.right_finite) pb.thr_right = (params.h1 + 1.0) / params.c1;
    pb.left_edge = dom.left_finite ? 0.0 : map.r_lo();
    pb.right_edge = dom.right_finite ? map.wall_r() : map.r_hi();
    const double table_lo = map.r_lo(), table_hi = map.r_hi();
    const double thr_l = pb.thr_left.value_or(0.0), thr_r = pb.thr_right.value_or(0.0);
    const bool lf = dom.left_finite, rf = dom.right_finite;
    pb.V = [params, &map, table_lo, table_hi, thr_l, thr_r, lf, rf](double r) {
        if (!lf && r <= table_lo) return thr_l;
        if (!rf && r >= table_hi) return thr_r;
        return potential_z(params, map.z_of_r(r));
    };
    return pb;
}

inline FdSpectrum fd_eigensolve(const NatanzonParams& params, const ZMap& map, int k,
                                int n_final = 16000) {
    return fd_eigensolve_problem(fd_problem_for(params, map), k, n_final);
}

// ---------------------------------------------------------------------------
// Pass/fail battery behind the `verify` CLI subcommand.

struct VerifyRow {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool larger_is_pass = false;  // negative controls must EXCEED the threshold
    bool pass = false;
};

struct VerifyReport {
    std::vector<VerifyRow> rows;
    bool all_pass = true;
};

inline void verify_push(VerifyReport& rep, std::string name, double value, double threshold,
                        bool larger_is_pass = false) {
    VerifyRow row;
    row.name = std::move(name);
    row.value = value;
    row.threshold = threshold;
    row.larger_is_pass = larger_is_pass;
    row.pass = larger_is_pass ? (value > threshold) : (value < threshold);
    rep.rows.push_back(row);
    rep.all_pass = rep.all_pass && row.pass;
}

inline VerifyReport run_verify(const NatanzonParams& params, int grid_n = 0) {
    VerifyReport rep;
    auto map = grid_n > 0 ? std::make_shared<const ZMap>(params, grid_n)
                          : std::make_shared<const ZMap>(params);
    const auto levels = enumerate_levels(params);
    if (levels.empty()) {
        verify_push(rep, "bound levels found", 0.0, 0.5, true);
        return rep;
    }

    for (const Level& lev : levels) {
        const std::string tag = " nu=" + std::to_string(lev.nu);
        verify_push(rep, "quantization residual" + tag,
                    std::fabs(quantization_residual(params, lev.E, lev.nu)), 1e-10);
        const BoundState st = build_state(map, lev.nu);
        const ResidualReport sr = schrodinger_residual(params, *map, st);
        verify_push(rep, "schrodinger residual" + tag, sr.l2_relative, 1e-6);
        const ResidualReport cr = casimir_residual(params, *map, st);
        verify_push(rep, "casimir residual" + tag, cr.l2_relative, 1e-5);
        const ResidualReport mr = master_residual(params, *map, st);
        verify_push(rep, "master residual" + tag, mr.l2_relative, 1e-5);
        if (lev.nu == 0) {
            const double sc = schrodinger_residual(params, *map, st, 2001, 0.01).l2_relative;
            verify_push(rep, "schrodinger control (E+0.01)" + tag, sc,
                        1000.0 * std::max(sr.l2_relative, 1e-300), true);
            const double cc = casimir_residual(params, *map, st, 2001, 1.0).l2_relative;
            verify_push(rep, "casimir control (q+1)" + tag, cc,
                        1000.0 * std::max(cr.l2_relative, 1e-300), true);
            const double mc = master_residual(params, *map, st, 2001, true).l2_relative;
            verify_push(rep, "master control (G=1)" + tag, mc,
                        1000.0 * std::max(mr.l2_relative, 1e-300), true);
        }
    }

    verify_push(rep, "master G forms mismatch", master_g_consistency(params, *map), 1e-12);

    const FdSpectrum fd = fd_eigensolve(params, *map, static_cast<int>(levels.size()));
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (i < fd.energies.size()) {
            verify_push(rep, "fd energy deviation nu=" + std::to_string(levels[i].nu),
                        std::fabs(fd.energies[i] - levels[i].E), 1e-3);
        } else {
            verify_push(rep, "fd found level nu=" + std::to_string(levels[i].nu), 0.0, 0.5, true);
        }
    }
    return rep;
}

}  // namespace natanzon
