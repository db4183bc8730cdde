#include "h2r/families.hpp"

#include <cmath>
#include <stdexcept>

namespace h2r {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDivergenceGuard = 1e-6;  // refuse d within this of 1 (H side)

// cosh^2 u - d^2 = sinh(u - a) sinh(u + a) for a = acosh(d): the product form
// stays accurate next to the singular endpoint.
double profile_denominator(double u, double a) {
    return std::sinh(u - a) * std::sinh(u + a);
}

}  // namespace

double profile_lambda_prime(double rho, double d) {
    const double den = std::cosh(rho) * std::cosh(rho) - d * d;
    if (den <= 0.0)
        throw std::domain_error("profile_lambda_prime: rho below the profile domain");
    return d / std::sqrt(den);
}

QuadResult height_H(double d, double tol) {
    if (!(d >= 1.0 + kDivergenceGuard))
        throw std::domain_error(
            "height_H diverges as d -> 1: refusing d < 1 + 1e-6 (requested d=" +
            std::to_string(d) + ")");
    const double a = std::acosh(d);
    SingularIntegral si;
    si.a = a;
    si.upper = kInfUpper;
    si.tolerance = tol;
    si.integrand = [d, a](double u) { return d / std::sqrt(profile_denominator(u, a)); };
    // For u >= U0 = acosh(2d): cosh^2 u - d^2 >= (3/4) cosh^2 u, and
    // 1/cosh u <= 2 e^{-u}, so the integrand is <= (4/sqrt(3)) d e^{-u}.
    si.decay_C = (4.0 / std::sqrt(3.0)) * d;
    si.decay_rate = 1.0;
    si.decay_U0 = std::acosh(2.0 * d);
    return integrate_sqrt_singular(si);
}

QuadResult height_H_substituted(double d, double tol) {
    if (!(d >= 1.0 + kDivergenceGuard))
        throw std::domain_error("height_H diverges as d -> 1 (substituted route)");
    // v = cosh(u)/d - 1 turns the integral into
    //   int_0^inf dv / (sqrt((v+1)^2 - 1) sqrt((v+1)^2 - 1/d^2)),
    // still with a -1/2 singularity at v = 0.  Head over [0, V]; the far part
    // is folded by w = 1/(v+1) onto a bounded smooth integral.
    const double V = 3.0;
    SingularIntegral si;
    si.a = 0.0;
    si.upper = V;
    si.tolerance = 0.5 * tol;
    si.integrand = [d](double v) {
        const double q = v + 1.0;
        return 1.0 / (std::sqrt(v * (q + 1.0)) * std::sqrt(q * q - 1.0 / (d * d)));
    };
    const QuadResult head = integrate_sqrt_singular(si);
    const QuadResult far = adaptive_gk(
        [d](double w) {
            return 1.0 / (std::sqrt(1.0 - w * w) * std::sqrt(1.0 - w * w / (d * d)));
        },
        0.0, 1.0 / (V + 1.0), 0.5 * tol);
    return {head.value + far.value, head.error_bound + far.error_bound};
}

QuadResult height_G(double d, double tol) {
    if (!(d >= 1e-6) || !(d <= 1.0 - 1e-6))
        throw std::domain_error("height_G: d must lie in [1e-6, 1 - 1e-6]");
    // No endpoint singularity: cosh^2 u - d^2 >= 1 - d^2 > 0.  For u >= 1.2
    // the integrand is below d/sinh(u) <= 2.2 d e^{-u}.
    return integrate_decaying_tail(
        [d](double u) {
            const double c = std::cosh(u);
            return d / std::sqrt(c * c - d * d);
        },
        0.0, 2.4 * d, 1.0, 1.2, tol);
}

QuadResult catenoid_height(double rho, double tol) {
    if (!(rho >= 1e-6)) throw std::domain_error("catenoid_height: rho >= 1e-6 required");
    // sinh^2 r - sinh^2 rho = sinh(r - rho) sinh(r + rho)
    const double sr = std::sinh(rho);
    SingularIntegral si;
    si.a = rho;
    si.upper = kInfUpper;
    si.tolerance = tol;
    si.integrand = [rho, sr](double r) {
        return sr / std::sqrt(std::sinh(r - rho) * std::sinh(r + rho));
    };
    const double U0 = std::max(1.0, std::asinh(2.0 * sr));
    si.decay_C = (4.0 / std::sqrt(3.0)) * sr / (1.0 - std::exp(-2.0 * U0)) * 1.1;
    si.decay_rate = 1.0;
    si.decay_U0 = U0;
    return integrate_sqrt_singular(si);
}

double profile_lambda(double rho, double d, double tol) {
    if (d < 0.0) throw std::domain_error("profile_lambda: d >= 0 required");
    if (d == 0.0) return 0.0;  // horizontal slice
    if (d == 1.0) {
        if (!(rho > 0.0)) throw std::domain_error("profile_lambda: rho > 0 required for d = 1");
        return std::log((std::exp(rho) - 1.0) / (std::exp(rho) + 1.0));
    }
    if (d < 1.0) {
        if (d > 1.0 - 1e-9)
            throw std::domain_error("profile_lambda diverges as d -> 1");
        const double r = std::abs(rho);
        if (r == 0.0) return 0.0;
        const QuadResult q = adaptive_gk(
            [d](double u) {
                const double c = std::cosh(u);
                return d / std::sqrt(c * c - d * d);
            },
            0.0, r, tol);
        return rho >= 0.0 ? q.value : -q.value;  // odd extension
    }
    // d > 1
    if (!(d >= 1.0 + kDivergenceGuard))
        throw std::domain_error("profile_lambda diverges as d -> 1 from above");
    const double a = std::acosh(d);
    if (rho < a - 1e-12)
        throw std::domain_error("profile_lambda: rho below acosh(d) for d > 1");
    // snap to the profile endpoint below its floating-point resolution
    if (rho <= a + 1e-12) return 0.0;
    SingularIntegral si;
    si.a = a;
    si.upper = rho;
    si.tolerance = tol;
    si.integrand = [d, a](double u) { return d / std::sqrt(profile_denominator(u, a)); };
    return integrate_sqrt_singular(si).value;
}

double catenoid_lambda(double s, double rho_neck, double tol) {
    if (!(rho_neck > 0.0)) throw std::domain_error("catenoid_lambda: neck radius > 0");
    if (s < rho_neck - 1e-12)
        throw std::domain_error("catenoid_lambda: s below the neck radius");
    if (s <= rho_neck + 1e-12) return 0.0;
    const double sr = std::sinh(rho_neck);
    SingularIntegral si;
    si.a = rho_neck;
    si.upper = s;
    si.tolerance = tol;
    si.integrand = [rho_neck, sr](double r) {
        return sr / std::sqrt(std::sinh(r - rho_neck) * std::sinh(r + rho_neck));
    };
    return integrate_sqrt_singular(si).value;
}

std::pair<double, double> principal_curvatures_profile(double rho, double d) {
    if (d == 0.0) return {0.0, 0.0};  // totally geodesic slice
    const double c = std::cosh(rho), s = std::sinh(rho);
    const double den = c * c - d * d;
    if (den <= 0.0)
        throw std::domain_error("principal_curvatures_profile: rho below the profile domain");
    const double lp = d / std::sqrt(den);
    if (lp * lp > 1e8) {
        // lambda' blow-up at the endpoint: the (cosh^2 rho - d^2) powers cancel
        // analytically between lambda'' and (1 + lambda'^2)^{3/2}.
        const double k1 = -d * s / (c * c);
        return {k1, -k1};
    }
    const double lpp = -d * c * s * std::pow(den, -1.5);
    const double w = 1.0 + lp * lp;
    const double k1 = lpp / std::pow(w, 1.5);
    const double k2 = lp / std::sqrt(w) * std::tanh(rho);
    return {k1, k2};
}

// ---------------------------------------------------------------------------

double eval_entire_family(EntireFamily kind, double ell, double x, double y) {
    return entire_family_jet(kind, ell, x, y).u;
}

Jet2 entire_family_jet(EntireFamily kind, double ell, double x, double y) {
    Jet2 j;
    switch (kind) {
        case EntireFamily::linear:
            j.u = ell * x;
            j.ux = ell;
            return j;
        case EntireFamily::logarithmic: {
            const double r2 = x * x + y * y;
            if (r2 <= 0.0) throw std::domain_error("logarithmic family: origin excluded");
            j.u = 0.5 * ell * std::log(r2);
            j.ux = ell * x / r2;
            j.uy = ell * y / r2;
            const double r4 = r2 * r2;
            j.uxx = ell * (y * y - x * x) / r4;
            j.uyy = -j.uxx;
            j.uxy = -2.0 * ell * x * y / r4;
            return j;
        }
        case EntireFamily::scherk_wedge: {
            if (!(x > 0.0))
                throw std::domain_error(
                    "scherk_wedge: defined for x > 0 (boundary value +inf as x -> 0+)");
            const double r = std::hypot(x, y);
            j.u = std::log((r + y) / x);
            j.ux = -y / (x * r);
            j.uy = 1.0 / r;
            const double r3 = r * r * r;
            j.uxx = y * (r * r + x * x) / (x * x * r3);
            j.uxy = -x / r3;
            j.uyy = -y / r3;
            return j;
        }
    }
    throw std::logic_error("entire_family_jet: unknown family");
}

ProfileCurve sample_profile(ProfileCurve::Family fam, double parameter, double rho_max,
                            int n) {
    if (n < 2) throw std::invalid_argument("sample_profile: need at least 2 samples");
    ProfileCurve pc;
    pc.family = fam;
    pc.parameter = parameter;
    if (fam == ProfileCurve::Family::catenoid) {
        const double lo = parameter;
        if (rho_max <= lo) throw std::invalid_argument("sample_profile: rho_max beyond the neck");
        for (int k = 0; k < n; ++k) {
            const double s = lo + (rho_max - lo) * k / (n - 1);
            pc.samples.emplace_back(s, catenoid_lambda(s, parameter));
        }
        pc.asymptotic_height = catenoid_height(parameter).value;
        return pc;
    }
    const double d = parameter;
    double lo = 0.0;
    if (d > 1.0) lo = std::acosh(d);
    else if (d < 1.0) lo = -rho_max;  // odd branch included
    else lo = 1e-3;                   // d = 1: -inf at rho = 0
    if (rho_max <= lo && d > 1.0)
        throw std::invalid_argument("sample_profile: rho_max below the profile domain");
    for (int k = 0; k < n; ++k) {
        const double r = lo + (rho_max - lo) * k / (n - 1);
        pc.samples.emplace_back(r, profile_lambda(r, d));
    }
    if (d > 1.0) pc.asymptotic_height = height_H(d).value;
    else if (d < 1.0 && d >= 1e-6) pc.asymptotic_height = height_G(d).value;
    else pc.asymptotic_height = 0.0;
    return pc;
}

namespace {

double bisect_monotone(const std::function<double(double)>& fn, double target, double lo,
                       double hi, bool increasing) {
    double flo = fn(lo) - target;
    double fhi = fn(hi) - target;
    if ((increasing && (flo > 0 || fhi < 0)) || (!increasing && (flo < 0 || fhi > 0)))
        throw std::domain_error("height inversion: target outside the invertible range");
    // Pure interval bisection: near-flat stretches of H make residual-based
    // stopping lose several digits of the parameter.
    for (int it = 0; it < 200 && hi - lo > 1e-9 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = fn(mid) - target;
        const bool go_right = increasing ? (fm < 0) : (fm > 0);
        if (go_right) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double invert_height_H(double target, double tol) {
    if (!(target > 0.5 * kPi))
        throw std::domain_error("invert_height_H: H takes values above pi/2 only");
    return bisect_monotone([tol](double d) { return height_H(d, tol).value; }, target,
                           1.0 + 2e-6, 1e8, /*increasing=*/false);
}

double invert_height_G(double target, double tol) {
    if (!(target > 0.0))
        throw std::domain_error("invert_height_G: G takes positive values only");
    return bisect_monotone([tol](double d) { return height_G(d, tol).value; }, target,
                           1e-6, 1.0 - 1e-6, /*increasing=*/true);
}

}  // namespace h2r
