#pragma once

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace natanzon {

// Small self-contained 1-D integration utilities shared across the library:
// an adaptive Simpson quadrature and an adaptive embedded Runge-Kutta 4(5)
// integrator (Cash-Karp coefficients).

namespace detail {

inline double simpson_panel(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <class F>
double adaptive_simpson_rec(F&& f, double a, double fa, double b, double fb,
                            double fm, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_panel(a, fa, m, fm, flm);
    const double right = simpson_panel(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_simpson_rec(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson integration of f over [a, b] to absolute tolerance tol.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int max_depth = 48) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = detail::simpson_panel(a, fa, b, fb, fm);
    return detail::adaptive_simpson_rec(f, a, fa, b, fb, fm, whole, tol, max_depth);
}

// Adaptive embedded RK4(5), Cash-Karp pair, for the scalar IVP y' = f(x, y).
// Integrates from x0 to x1 (either direction) and returns y(x1).
template <class F>
double rkf45_integrate(F&& f, double x0, double x1, double y0,
                       double rtol = 1e-12, double atol = 1e-14) {
    static const double a2 = 1.0 / 5, a3 = 3.0 / 10, a4 = 3.0 / 5, a5 = 1.0, a6 = 7.0 / 8;
    static const double b21 = 1.0 / 5;
    static const double b31 = 3.0 / 40, b32 = 9.0 / 40;
    static const double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
    static const double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
    static const double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                        b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
    static const double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594, c6 = 512.0 / 1771;
    static const double d1 = 2825.0 / 27648, d3 = 18575.0 / 48384, d4 = 13525.0 / 55296,
                        d5 = 277.0 / 14336, d6 = 1.0 / 4;

    if (x0 == x1) return y0;
    const double dir = (x1 > x0) ? 1.0 : -1.0;
    double x = x0, y = y0;
    double h = dir * std::max(1e-12, std::abs(x1 - x0) / 64.0);
    const double hmin = std::abs(x1 - x0) * 1e-15;
    int guard = 0;
    while (dir * (x1 - x) > 0.0) {
        if (++guard > 2000000) throw std::runtime_error("rkf45_integrate: step count exceeded");
        if (dir * (x + h - x1) > 0.0) h = x1 - x;
        const double k1 = f(x, y);
        const double k2 = f(x + a2 * h, y + h * b21 * k1);
        const double k3 = f(x + a3 * h, y + h * (b31 * k1 + b32 * k2));
        const double k4 = f(x + a4 * h, y + h * (b41 * k1 + b42 * k2 + b43 * k3));
        const double k5 = f(x + a5 * h, y + h * (b51 * k1 + b52 * k2 + b53 * k3 + b54 * k4));
        const double k6 = f(x + a6 * h, y + h * (b61 * k1 + b62 * k2 + b63 * k3 + b64 * k4 + b65 * k5));
        const double y5 = y + h * (c1 * k1 + c3 * k3 + c4 * k4 + c6 * k6);
        const double y4 = y + h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6);
        const double err = std::abs(y5 - y4);
        const double scale = atol + rtol * std::max(std::abs(y), std::abs(y5));
        if (err <= scale || std::abs(h) <= hmin) {
            x += h;
            y = y5;
        }
        const double grow = (err > 0.0) ? 0.9 * std::pow(scale / err, 0.2) : 5.0;
        h *= std::min(5.0, std::max(0.1, grow));
        if (std::abs(h) < hmin) h = dir * hmin;
    }
    return y;
}

}  // namespace natanzon
