#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

// Brute-force oracles for the test and acceptance suites.  Everything here is
// independent of the library's quadrature path: plain midpoint sums on the
// regularized integrands, and AGM-based complete elliptic integrals.

namespace oracle {

inline double midpoint(const std::function<double(double)>& f, double a, double b,
                       long panels) {
    const double h = (b - a) / panels;
    double s = 0.0;
    for (long k = 0; k < panels; ++k) s += f(a + (k + 0.5) * h);
    return s * h;
}

// int_a^upper f(u) du with a -1/2 singularity at a, via u = a + s^2 and a
// 10^6-panel midpoint rule; infinite tails truncated at a fixed large cutoff.
inline double sqrt_singular_midpoint(const std::function<double(double)>& f, double a,
                                     double upper, long panels = 1000000) {
    const double cut = std::isinf(upper) ? a + 45.0 : upper;
    const double smax = std::sqrt(cut - a);
    return midpoint([&](double s) { return 2.0 * s * f(a + s * s); }, 0.0, smax, panels);
}

// The three heights after the fold w = e^{-u}, which maps the infinite range
// onto (0, 1] and leaves smooth algebraic integrands:
//   G(d) = int_0^1 2d / sqrt((1+w^2)^2 - 4 d^2 w^2) dw            (0 < d < 1)
//   H(d) = same integrand on (0, e^{-acosh d}], singular upper endpoint
//          removed by w = e^{-a} - t^2
//   f(rho): with a = sinh(rho), int_0^1 2a / sqrt(4w^2 + a^2 (1+w^2)^2) dw.

inline double H_oracle(double d, long panels = 1000000) {
    const double a = std::acosh(d);
    const double wd = std::exp(-a);
    const double ea = std::exp(a);
    return midpoint(
        [d, wd, ea](double t) {
            const double w = wd - t * t;
            return 4.0 * d / std::sqrt((ea - w) * (1.0 + w * w + 2.0 * d * w));
        },
        0.0, std::sqrt(wd), panels);
}

inline double G_oracle(double d, long panels = 1000000) {
    return midpoint(
        [d](double w) {
            const double q = 1.0 + w * w;
            return 2.0 * d / std::sqrt(q * q - 4.0 * d * d * w * w);
        },
        0.0, 1.0, panels);
}

inline double f_oracle(double rho, long panels = 1000000) {
    const double a = std::sinh(rho);
    return midpoint(
        [a](double w) {
            const double q = 1.0 + w * w;
            return 2.0 * a / std::sqrt(4.0 * w * w + a * a * q * q);
        },
        0.0, 1.0, panels);
}

// Catenoid-type radial profile: int_1^s a / sqrt(sinh^2 r - a^2) dr for the
// rotational graph over the exterior of the radius-1 circle.
inline double radial_profile_oracle(double s, double a_param, long panels = 200000) {
    if (s <= 1.0) return 0.0;
    return midpoint(
        [a_param](double r) {
            const double sh = std::sinh(r);
            return a_param / std::sqrt(sh * sh - a_param * a_param);
        },
        1.0, s, panels);
}

// Complete elliptic integral K(k) by the arithmetic-geometric mean: an
// algebraically independent route to the same heights
// (H(d) = K(1/d), f(rho) = tanh(rho) K(sech rho)).
inline double elliptic_K(double k) {
    if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("elliptic_K: k in [0,1)");
    double a = 1.0, b = std::sqrt(1.0 - k * k);
    for (int it = 0; it < 60 && std::abs(a - b) > 1e-17 * a; ++it) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 1.5707963267948966 / a;
}

}  // namespace oracle
