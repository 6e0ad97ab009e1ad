#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace natanzon {

// Gauss hypergeometric function 2F1(-nu, b; c; z) for nonnegative integer nu:
// the series terminates, so every evaluation here is a degree-nu polynomial
//
//   sum_{k=0}^{nu} (-nu)_k (b)_k / ((c)_k k!) z^k.
//
// That covers all uses in this library (bound-state polynomials and their
// parameter-shifted relatives).

// Coefficients of the polynomial in ascending powers of z.
inline std::vector<double> hyp_poly_coeffs(int nu, double b, double c) {
    if (nu < 0) throw std::invalid_argument("hyp_poly_coeffs: nu must be >= 0");
    std::vector<double> coef(static_cast<std::size_t>(nu) + 1);
    double t = 1.0;
    coef[0] = 1.0;
    for (int k = 0; k < nu; ++k) {
        const double cden = (c + k) * (k + 1);
        if (cden == 0.0)
            throw std::invalid_argument("hyp_poly_coeffs: lower parameter hits a nonpositive integer");
        t *= (-nu + k) * (b + k) / cden;
        coef[static_cast<std::size_t>(k) + 1] = t;
    }
    return coef;
}

inline double hyp_poly(int nu, double b, double c, double z) {
    if (nu < 0) throw std::invalid_argument("hyp_poly: nu must be >= 0");
    double term = 1.0, sum = 1.0;
    for (int k = 0; k < nu; ++k) {
        const double cden = (c + k) * (k + 1);
        if (cden == 0.0)
            throw std::invalid_argument("hyp_poly: lower parameter hits a nonpositive integer");
        term *= (-nu + k) * (b + k) / cden * z;
        sum += term;
    }
    return sum;
}

// d^m/dz^m 2F1(-nu, b; c; z) via the parameter-shift rule
// d/dz F(a, b; c; z) = (a b / c) F(a+1, b+1; c+1; z).
inline double hyp_poly_deriv(int nu, double b, double c, double z, int order) {
    if (order < 0) throw std::invalid_argument("hyp_poly_deriv: order must be >= 0");
    double pre = 1.0;
    for (int j = 0; j < order; ++j) {
        if (nu - j <= 0) return 0.0;  // polynomial degree exhausted
        pre *= (-(nu - j)) * (b + j) / (c + j);
    }
    if (order > nu) return 0.0;
    return pre * hyp_poly(nu - order, b + order, c + order, z);
}

// lim_{c -> 0} c * 2F1(-nu, b; c; z) = sum_{k>=1} (-nu)_k (b)_k z^k / (k! (k-1)!).
// Needed where a contiguous relation multiplies a hypergeometric value by a
// lower parameter that vanishes: the product stays finite.
inline double hyp_poly_times_c_at_zero(int nu, double b, double z) {
    if (nu < 0) throw std::invalid_argument("hyp_poly_times_c_at_zero: nu must be >= 0");
    double sum = 0.0;
    double t = 1.0;  // (-nu)_k (b)_k z^k / k!, built incrementally
    for (int k = 1; k <= nu; ++k) {
        t *= (-nu + (k - 1)) * (b + (k - 1)) / k * z;
        double km1fact = 1.0;
        for (int j = 2; j < k; ++j) km1fact *= j;
        sum += t / km1fact;
    }
    return sum;
}

// Product c * 2F1(-nu, b; c; z), valid also at c = 0 (where the limit above
// applies).
inline double hyp_poly_times_c(int nu, double b, double c, double z) {
    if (c == 0.0) return hyp_poly_times_c_at_zero(nu, b, z);
    return c * hyp_poly(nu, b, c, z);
}

// A terminating 2F1(-nu, b; c; z) with its coefficients frozen, so repeated
// evaluation (wavefunction grids, quadrature) is a Horner pass.
struct TerminatingHyp {
    int nu = 0;
    double b = 0.0;
    double c = 1.0;
    std::vector<double> coef;  // ascending powers of z
};

inline TerminatingHyp make_hyp(int nu, double b, double c) {
    return TerminatingHyp{nu, b, c, hyp_poly_coeffs(nu, b, c)};
}

inline double hyp_eval(const TerminatingHyp& h, double z) {
    double acc = 0.0;
    for (std::size_t k = h.coef.size(); k-- > 0;) acc = acc * z + h.coef[k];
    return acc;
}

// m-th derivative from the stored coefficients:
// P^(m)(z) = sum_{k>=m} coef[k] k!/(k-m)! z^(k-m).
inline double hyp_eval_deriv(const TerminatingHyp& h, double z, int order) {
    if (order < 0) throw std::invalid_argument("hyp_eval_deriv: order must be >= 0");
    if (order == 0) return hyp_eval(h, z);
    const std::size_t n = h.coef.size();
    if (static_cast<std::size_t>(order) >= n) return 0.0;
    double acc = 0.0;
    for (std::size_t k = n; k-- > static_cast<std::size_t>(order);) {
        double fall = 1.0;
        for (int j = 0; j < order; ++j) fall *= static_cast<double>(k - j);
        acc = acc * z + fall * h.coef[k];
    }
    return acc;
}

}  // namespace natanzon
