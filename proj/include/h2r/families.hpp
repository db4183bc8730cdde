#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "h2r/jet.hpp"
#include "h2r/quadrature.hpp"

// Closed-form and profile-integral evaluation of the explicit minimal
// surfaces over the hyperbolic plane: the entire/half-plane graphs, the
// hyperbolic-translation-invariant family M_d, and the rotational catenoids.
//
// Profile normalizations (in each case "height zero at the natural base"):
//   d > 1 : lambda(acosh d) = 0 on the equidistant line
//   d = 1 : lambda(rho) = log((e^rho - 1)/(e^rho + 1)), asymptotic height 0
//   d < 1 : lambda(0) = 0, odd in rho
//   d = 0 : the horizontal slice lambda == 0 (admitted for testing)

namespace h2r {

inline constexpr double kFamilyTol = kDefaultQuadTol;

// Asymptotic height H(d) of the d > 1 branch; nonincreasing, range (pi/2, inf).
// Refuses d < 1 + 1e-6 with a divergence diagnostic.
QuadResult height_H(double d, double tol = kFamilyTol);

// Same integral evaluated through the regularizing substitution
// v = cosh(u)/d - 1 (independent algebraic route, used for cross-checks).
QuadResult height_H_substituted(double d, double tol = kFamilyTol);

// Asymptotic half-height G(d) of the entire branch 0 < d < 1; nondecreasing.
// Domain [1e-6, 1 - 1e-6].
QuadResult height_G(double d, double tol = kFamilyTol);

// Catenoid asymptotic height f(rho), increasing from 0 to pi/2.
QuadResult catenoid_height(double rho, double tol = kFamilyTol);

// Profile height lambda(rho; d) of the translation-invariant surface.
double profile_lambda(double rho, double d, double tol = kFamilyTol);

// d lambda / d rho = d / sqrt(cosh^2 rho - d^2) (the minimality ODE).
double profile_lambda_prime(double rho, double d);

// Catenoid profile height above the slice at distance s from the axis, for
// the catenoid with neck radius rho_neck (s >= rho_neck); tends to
// catenoid_height(rho_neck) as s -> inf.
double catenoid_lambda(double s, double rho_neck, double tol = kFamilyTol);

// Principal curvatures (k1, k2) of the translation-invariant surface at
// profile coordinate rho.  Evaluated from the stated formulas
//   k1 = lambda'' (1 + lambda'^2)^{-3/2},  k2 = lambda'(1+lambda'^2)^{-1/2} tanh rho
// with the analytic lambda''; at the profile endpoint (lambda' blow-up) the
// analytically cancelled limit values are reported instead.
std::pair<double, double> principal_curvatures_profile(double rho, double d);

// ---------------------------------------------------------------------------
// Explicit graphs in half-plane coordinates.

enum class EntireFamily { linear, logarithmic, scherk_wedge };

// Value (and full second-order jet) of the family at half-plane (x, y):
//   linear       : ell * x                      (entire)
//   logarithmic  : (ell/2) * log(x^2 + y^2)     (entire)
//   scherk_wedge : log((sqrt(x^2+y^2) + y)/x)   (x > 0; +inf data on {x=0})
double eval_entire_family(EntireFamily kind, double ell, double x, double y);
Jet2 entire_family_jet(EntireFamily kind, double ell, double x, double y);

// ---------------------------------------------------------------------------
// Sampled profile curves and parameter inversion.

struct ProfileCurve {
    enum class Family { hyperbolic, catenoid };
    Family family = Family::hyperbolic;
    double parameter = 0.0;  // d, or the neck radius
    std::vector<std::pair<double, double>> samples;  // (rho, lambda)
    double asymptotic_height = 0.0;
};

ProfileCurve sample_profile(ProfileCurve::Family fam, double parameter, double rho_max,
                            int n_samples);

// Inverts H (decreasing) / G (increasing) to the tolerance |H(d)-target|<tol.
// Throws when the target is outside the invertible range.
double invert_height_H(double target, double tol = 1e-10);
double invert_height_G(double target, double tol = 1e-10);

}  // namespace h2r
