#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "h2r/quadrature.hpp"
#include "oracles.hpp"

using namespace h2r;

TEST_CASE("inverse square root closed form") {
    SingularIntegral si;
    si.a = 0.0;
    si.upper = 1.0;
    si.integrand = [](double v) { return 1.0 / std::sqrt(v); };
    const QuadResult q = integrate_sqrt_singular(si);
    CHECK(std::abs(q.value - 2.0) < 1e-12);
    CHECK(q.error_bound <= si.tolerance);
}

TEST_CASE("arc-cosh integral matches the closed form") {
    for (const double X : {2.0, 10.0}) {
        SingularIntegral si;
        si.a = 1.0;
        si.upper = X;
        si.integrand = [](double s) { return 1.0 / std::sqrt(s * s - 1.0); };
        const QuadResult q = integrate_sqrt_singular(si);
        CHECK(std::abs(q.value - std::acosh(X)) < 1e-10);
    }
}

TEST_CASE("exponential tail closed form") {
    const QuadResult q =
        integrate_decaying_tail([](double u) { return std::exp(-u); }, 0.0, 1.0, 1.0, 0.0);
    CHECK(std::abs(q.value - 1.0) < 1e-12);
}

TEST_CASE("H(2) against the brute-force oracle") {
    SingularIntegral si;
    const double d = 2.0, a = std::acosh(d);
    si.a = a;
    si.upper = kInfUpper;
    si.integrand = [d, a](double u) {
        return d / std::sqrt(std::sinh(u - a) * std::sinh(u + a));
    };
    si.decay_C = (4.0 / std::sqrt(3.0)) * d;
    si.decay_U0 = std::acosh(2.0 * d);
    const QuadResult q = integrate_sqrt_singular(si);
    CHECK(std::abs(q.value - oracle::H_oracle(2.0)) < 1e-8);
}

TEST_CASE("tail truncation consistency for the height integrand") {
    // truncating at u = 20 vs u = 40 differs by at most the certificate bound
    const double d = 1.7, a = std::acosh(d);
    auto f = [d, a](double u) { return d / std::sqrt(std::sinh(u - a) * std::sinh(u + a)); };
    const double i20 = oracle::midpoint(f, a + 1.0, 20.0, 400000);
    const double i40 = oracle::midpoint(f, a + 1.0, 40.0, 800000);
    const double bound = (4.0 / std::sqrt(3.0)) * d * std::exp(-20.0);
    CHECK(std::abs(i40 - i20) <= bound);
}

TEST_CASE("G(0.5) infinite tail against the oracle") {
    const double d = 0.5;
    const QuadResult q = integrate_decaying_tail(
        [d](double u) {
            const double c = std::cosh(u);
            return d / std::sqrt(c * c - d * d);
        },
        0.0, 2.4 * d, 1.0, 1.2);
    CHECK(std::abs(q.value - oracle::G_oracle(0.5)) < 1e-9);
}

TEST_CASE("error bound honesty on random height integrals") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> dlog(std::log(1.02), std::log(30.0));
    std::uniform_real_distribution<double> tlog(std::log(1e-10), std::log(1e-7));
    for (int trial = 0; trial < 100; ++trial) {
        const double d = std::exp(dlog(rng));
        const double tol = std::exp(tlog(rng));
        const double a = std::acosh(d);
        SingularIntegral si;
        si.a = a;
        si.upper = kInfUpper;
        si.tolerance = tol;
        si.integrand = [d, a](double u) {
            return d / std::sqrt(std::sinh(u - a) * std::sinh(u + a));
        };
        si.decay_C = (4.0 / std::sqrt(3.0)) * d;
        si.decay_U0 = std::acosh(2.0 * d);
        const QuadResult q = integrate_sqrt_singular(si);
        const double ref = oracle::H_oracle(d);
        CHECK(q.error_bound <= tol);
        CHECK(std::abs(q.value - ref) <= q.error_bound);
    }
}

TEST_CASE("preconditions are enforced") {
    SUBCASE("wrong singularity order") {
        SingularIntegral si;
        si.a = 0.0;
        si.upper = 1.0;
        si.integrand = [](double) { return 1.0; };  // bounded, order 0
        CHECK_THROWS_AS(integrate_sqrt_singular(si), std::domain_error);
    }
    SUBCASE("decay certificate violation") {
        CHECK_THROWS_AS(integrate_decaying_tail(
                            [](double u) { return 1.0 / (1.0 + u * u); },  // ~ u^-2 only
                            0.0, 1.0, 1.0, 0.0),
                        std::domain_error);
    }
    SUBCASE("missing certificate for an infinite tail") {
        SingularIntegral si;
        si.a = 0.0;
        si.upper = kInfUpper;
        si.integrand = [](double v) { return std::exp(-v) / std::sqrt(v); };
        CHECK_THROWS(integrate_sqrt_singular(si));
    }
}
