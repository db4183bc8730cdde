#pragma once

#include <functional>
#include <limits>

// Certified quadrature for the two integral classes the library needs:
// inverse-square-root endpoint singularities and exponentially decaying
// tails.  Every result carries an a-posteriori error bound; callers treat
// the bound as a contract (tested against brute-force oracles).

namespace h2r {

struct QuadResult {
    double value = 0.0;
    double error_bound = 0.0;
};

inline constexpr double kDefaultQuadTol = 1e-10;
inline constexpr double kInfUpper = std::numeric_limits<double>::infinity();

// Adaptive Gauss-Kronrod (G7,K15) on a finite interval of a smooth integrand.
QuadResult adaptive_gk(const std::function<double(double)>& f, double a, double b,
                       double tol);

struct SingularIntegral {
    std::function<double(double)> integrand;  // positive, continuous on (a, upper)
    double a = 0.0;                           // singular endpoint, order -1/2
    double upper = kInfUpper;                 // finite or +infinity
    double tolerance = kDefaultQuadTol;
    // Decay certificate, required for an infinite upper limit:
    //   |integrand(u)| <= decay_C * exp(-decay_rate * u) for u >= decay_U0.
    double decay_C = 0.0;
    double decay_rate = 1.0;
    double decay_U0 = 0.0;
};

// Integrates a -1/2 endpoint singularity after the regularizing substitution
// u = a + s^2 (which turns c/sqrt(u-a) into a bounded integrand).  The stated
// singularity order is verified numerically on approach; an infinite tail is
// truncated under the decay certificate with the truncation error added to
// the bound.  Throws when the tolerance cannot be met or a precondition
// fails.
QuadResult integrate_sqrt_singular(const SingularIntegral& si);

// Integral of f over [a, +inf) given |f(u)| <= C e^{-rate u} for u >= U0.
// The truncation point is chosen so the certified tail is below tol/2; the
// certificate is spot-checked by sampling and violations raise an error.
QuadResult integrate_decaying_tail(const std::function<double(double)>& f, double a,
                                   double C, double rate, double U0,
                                   double tol = kDefaultQuadTol);

}  // namespace h2r
