#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "natanzon/integrate.hpp"
#include "natanzon/params.hpp"

namespace natanzon {

// First three r-derivatives of the change of variable, expressed through z
// itself.  With w(z) := dz/dr = 2 z (1-z) / sqrt(R) the chain rule gives
//   z''  = w w_z,
//   z''' = w w_z^2 + w^2 w_zz.

inline double dzdr(const NatanzonParams& p, double z) {
    return 2.0 * z * (1.0 - z) / std::sqrt(eval_R(p, z));
}

namespace detail {

inline void w_derivs(const NatanzonParams& p, double z, double& w, double& wz, double& wzz) {
    const double R = eval_R(p, z);
    const double Rp = eval_R_dz(p, z);
    const double iR12 = 1.0 / std::sqrt(R);
    const double iR32 = iR12 / R;
    const double iR52 = iR32 / R;
    w = 2.0 * z * (1.0 - z) * iR12;
    wz = 2.0 * (1.0 - 2.0 * z) * iR12 - z * (1.0 - z) * Rp * iR32;
    wzz = -4.0 * iR12 - 2.0 * (1.0 - 2.0 * z) * Rp * iR32 +
          z * (1.0 - z) * (1.5 * Rp * Rp * iR52 - 2.0 * p.a * iR32);
}

}  // namespace detail

inline double d2zdr2(const NatanzonParams& p, double z) {
    double w, wz, wzz;
    detail::w_derivs(p, z, w, wz, wzz);
    return w * wz;
}

inline double d3zdr3(const NatanzonParams& p, double z) {
    double w, wz, wzz;
    detail::w_derivs(p, z, w, wz, wzz);
    return w * wz * wz + w * w * wzz;
}

// Grid size used when building maps.  Overridable through NATANZON_GRID_N;
// forced odd so that the z = 1/2 node is represented exactly.
inline int default_grid_n() {
    const char* env = std::getenv("NATANZON_GRID_N");
    if (env && *env) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end == nullptr || *end != '\0' || v < 129 || v > 2000001)
            throw std::invalid_argument("NATANZON_GRID_N must be an integer in [129, 2000001]");
        return static_cast<int>(v) | 1;
    }
    return 4097;
}

// Numerical realization of the change of variable r <-> z.
//
// The map solves dz/dr = 2 z (1-z) / sqrt(R) with the anchoring conventions
// of classify_domain: a finite left endpoint pins z -> 0 at r = 0, otherwise
// z(0) = 1/2.  It is built by quadrature of dr/dz = sqrt(R) / (2 z (1-z))
// over a logistically clustered z-grid (uniform in log(z/(1-z))), which
// resolves both endpoint layers; the integrable endpoint singularities at
// vanishing R are removed analytically with z = s^2 substitutions.  Forward
// evaluation interpolates the table with cubic Hermite pieces using the
// analytic slope w(z); inversion uses a Hermite seed refined by Newton steps
// so the two directions agree to round-off.  Outside the tabulated range the
// map switches to the analytic endpoint asymptotics.
// Which closed form, if any, the map is known to coincide with.
enum class MapForm { pt2_tanh_sq, rm_shifted_tanh, numeric };

inline const char* map_form_name(MapForm f) {
    switch (f) {
        case MapForm::pt2_tanh_sq: return "pt2-tanh^2";
        case MapForm::rm_shifted_tanh: return "rm-shifted-tanh";
        default: return "numeric";
    }
}

class ZMap {
  public:
    explicit ZMap(const NatanzonParams& p) : ZMap(p, default_grid_n()) {}

    ZMap(const NatanzonParams& p, int n, double z_margin = 1e-10) : p_(p), eps_(z_margin) {
        const Admissibility adm = admissible(p);
        if (!adm) throw std::invalid_argument("ZMap: " + adm.reason);
        if (n < 100) throw std::invalid_argument("ZMap: grid must have at least 100 nodes");
        if (!(z_margin > 0.0 && z_margin <= 1e-4))
            throw std::invalid_argument("ZMap: z_margin must lie in (0, 1e-4]");
        dom_ = classify_domain(p);
        if (p.preset)
            form_ = (p.preset->kind == PresetKind::pt2) ? MapForm::pt2_tanh_sq
                                                        : MapForm::rm_shifted_tanh;
        build(n | 1);
    }

    const NatanzonParams& params() const { return p_; }
    const PotentialDomain& domain() const { return dom_; }
    MapForm form() const { return form_; }
    const std::vector<double>& z_nodes() const { return z_; }
    const std::vector<double>& r_nodes() const { return r_; }
    double r_lo() const { return r_.front(); }
    double r_hi() const { return r_.back(); }
    double wall_r() const { return wall_r_; }

    double z_of_r(double r) const {
        if (dom_.left_finite && r < 0.0)
            throw std::out_of_range("z_of_r: r below the domain start");
        if (dom_.right_finite && r > wall_r_)
            throw std::out_of_range("z_of_r: r beyond the confining wall");
        if (r <= r_.front()) return z_left(r);
        if (r >= r_.back()) return z_right(r);
        return hermite_z(r);
    }

    double r_of_z(double z) const {
        if (!(z > 0.0 && z < 1.0)) throw std::invalid_argument("r_of_z: z must lie in (0, 1)");
        if (z <= z_.front()) return r_left_of_z(z);
        if (z >= z_.back()) return r_right_of_z(z);
        const auto it = std::upper_bound(z_.begin(), z_.end(), z);
        const std::size_t i = static_cast<std::size_t>(it - z_.begin()) - 1;
        // Hermite seed on the inverse table (slopes dr/dz = 1/w), then Newton
        // against the forward interpolant.
        const double h = z_[i + 1] - z_[i];
        const double t = (z - z_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        double r = r_[i] * (2.0 * t3 - 3.0 * t2 + 1.0) + h * (1.0 / s_[i]) * (t3 - 2.0 * t2 + t) +
                   r_[i + 1] * (-2.0 * t3 + 3.0 * t2) + h * (1.0 / s_[i + 1]) * (t3 - t2);
        for (int k = 0; k < 3; ++k) {
            const double zr = hermite_z(std::clamp(r, r_[i], r_[i + 1]));
            const double step = (zr - z) / dzdr(p_, zr);
            r -= step;
            if (std::fabs(step) < 1e-15 * (1.0 + std::fabs(r))) break;
        }
        return std::clamp(r, r_[i], r_[i + 1]);
    }

    double potential(double r) const { return potential_z(p_, z_of_r(r)); }

  private:
    void build(int n) {
        const double eps = eps_;
        const double umax = std::log((1.0 - eps) / eps);
        const int mid = n / 2;
        z_.resize(n);
        for (int i = 0; i < n; ++i) {
            const double u = -umax + 2.0 * umax * static_cast<double>(i) / (n - 1);
            z_[i] = 1.0 / (1.0 + std::exp(-u));
        }
        z_[mid] = 0.5;
        z_.front() = eps;
        z_.back() = 1.0 - eps;

        s_.resize(n);
        for (int i = 0; i < n; ++i) s_[i] = dzdr(p_, z_[i]);

        std::vector<double> seg(n - 1);
        for (int i = 0; i + 1 < n; ++i)
            seg[i] = adaptive_simpson([&](double z) { return dr_dz(p_, z); }, z_[i], z_[i + 1], 1e-15);

        r_.resize(n);
        if (dom_.left_finite) {
            r_[0] = detail::arc_length_left_endpoint(p_, z_[0]);
            for (int i = 1; i < n; ++i) r_[i] = r_[i - 1] + seg[i - 1];
        } else {
            r_[mid] = 0.0;
            for (int i = mid + 1; i < n; ++i) r_[i] = r_[i - 1] + seg[i - 1];
            for (int i = mid - 1; i >= 0; --i) r_[i] = r_[i + 1] - seg[i];
        }
        if (dom_.right_finite)
            wall_r_ = r_.back() + detail::arc_length_right_endpoint(p_, z_.back());
        else
            wall_r_ = std::numeric_limits<double>::infinity();
    }

    double hermite_z(double r) const {
        const auto it = std::upper_bound(r_.begin(), r_.end(), r);
        std::size_t i = static_cast<std::size_t>(it - r_.begin());
        if (i == 0) i = 1;
        if (i >= r_.size()) i = r_.size() - 1;
        --i;
        const double h = r_[i + 1] - r_[i];
        const double t = (r - r_[i]) / h;
        const double t2 = t * t, t3 = t2 * t;
        return z_[i] * (2.0 * t3 - 3.0 * t2 + 1.0) + h * s_[i] * (t3 - 2.0 * t2 + t) +
               z_[i + 1] * (-2.0 * t3 + 3.0 * t2) + h * s_[i + 1] * (t3 - t2);
    }

    // Analytic asymptotics past the tabulated range.
    double z_left(double r) const {
        const double z0 = z_.front(), r0 = r_.front();
        if (dom_.left_finite) {
            if (r <= 0.0) return 0.0;
            const double t = tau(p_);
            if (t > 0.0) return std::min(z0, r * r / t);  // r ~ sqrt(tau z)
            // double zero of R at z = 0: R = a z^2, map exactly exponential
            return 1.0 - (1.0 - z0) * std::exp(-2.0 * (r - r0) / std::sqrt(p_.a));
        }
        // z -> 0 exponentially with rate 2/sqrt(c0)
        return z0 * std::exp(2.0 * (r - r0) / std::sqrt(p_.c0));
    }

    double z_right(double r) const {
        const double z1 = z_.back(), r1 = r_.back();
        if (dom_.right_finite) {
            if (r >= wall_r_) return 1.0;
            const double kappa = -(2.0 * p_.a + tau(p_));  // -R'(1)
            if (kappa > 0.0) {
                const double d = wall_r_ - r;
                return std::max(z1, 1.0 - d * d / kappa);
            }
            // double zero of R at z = 1: R = a (z-1)^2, map exactly exponential
            return std::exp(-2.0 * (wall_r_ - r) / std::sqrt(p_.a));
        }
        return 1.0 - (1.0 - z1) * std::exp(-2.0 * (r - r1) / std::sqrt(p_.c1));
    }

    double r_left_of_z(double z) const {
        const double z0 = z_.front(), r0 = r_.front();
        if (dom_.left_finite) {
            const double t = tau(p_);
            if (t > 0.0) return std::sqrt(t * z);
            return r0 + 0.5 * std::sqrt(p_.a) * std::log((1.0 - z0) / (1.0 - z));
        }
        return r0 + 0.5 * std::sqrt(p_.c0) * std::log(z / z0);
    }

    double r_right_of_z(double z) const {
        const double z1 = z_.back(), r1 = r_.back();
        if (dom_.right_finite) {
            const double kappa = -(2.0 * p_.a + tau(p_));
            if (kappa > 0.0) return wall_r_ - std::sqrt(kappa * (1.0 - z));
            return wall_r_ + 0.5 * std::sqrt(p_.a) * std::log(z);
        }
        return r1 + 0.5 * std::sqrt(p_.c1) * std::log((1.0 - z1) / (1.0 - z));
    }

    NatanzonParams p_;
    double eps_ = 1e-10;
    PotentialDomain dom_;
    MapForm form_ = MapForm::numeric;
    double wall_r_ = std::numeric_limits<double>::infinity();
    std::vector<double> z_, r_, s_;
};

// Potential of a (possibly different) parameter set evaluated through a
// shared geometry: p must agree with map.params() in (a, c0, c1) for the
// change of variable to apply.
inline double potential_value(const NatanzonParams& p, const ZMap& map, double r) {
    return potential_z(p, map.z_of_r(r));
}

inline double potential_value(const ZMap& map, double r) {
    return potential_value(map.params(), map, r);
}

}  // namespace natanzon
