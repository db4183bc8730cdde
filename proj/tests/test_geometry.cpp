#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "h2r/geometry.hpp"

using namespace h2r;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::mt19937& rng() {
    static std::mt19937 gen(20240811);
    return gen;
}

DiskPoint random_interior(double rmax = 0.95) {
    std::uniform_real_distribution<double> ur(0.0, rmax), ut(0.0, 2.0 * kPi);
    const double r = std::sqrt(ur(rng()) * rmax);  // area-ish spread
    const double t = ut(rng());
    return DiskPoint::interior(r * std::cos(t), r * std::sin(t));
}

Geodesic random_geodesic() {
    // endpoints kept apart: the canonical frame of a near-degenerate geodesic
    // is ill-conditioned and would only measure round-off amplification
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi), us(0.4, kPi);
    const double a = ut(rng());
    return Geodesic(a, a + us(rng()));
}

Isometry random_isometry() {
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi), ul(-2.0, 2.0);
    std::uniform_int_distribution<int> kind(0, 3);
    switch (kind(rng())) {
        case 0: return Isometry::rotation(ut(rng()));
        case 1: return Isometry::translation_along(random_geodesic(), ul(rng()));
        case 2: return Isometry::reflection_in(random_geodesic());
        default:
            return Isometry::rotation_about(random_interior(0.7), ut(rng()))
                .then(Isometry::translation_along(Geodesic(0.3, 2.9), ul(rng())));
    }
}

}  // namespace

TEST_CASE("hyperbolic distance basics") {
    CHECK(hyperbolic_distance(DiskPoint::interior(0, 0), DiskPoint::interior(0, 0)) == 0.0);
    CHECK(hyperbolic_distance(DiskPoint::interior(0, 0), DiskPoint::interior(0.5, 0)) ==
          doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-14));
    CHECK(hyperbolic_distance(DiskPoint::interior(0, 0),
                              DiskPoint::interior(std::tanh(1.0), 0)) ==
          doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(hyperbolic_distance(DiskPoint::at_angle(0.3), DiskPoint::interior(0, 0)),
                    std::domain_error);
    // symmetry + triangle inequality on random triples
    for (int k = 0; k < 200; ++k) {
        const DiskPoint a = random_interior(), b = random_interior(), c = random_interior();
        const double ab = hyperbolic_distance(a, b);
        CHECK(ab == hyperbolic_distance(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= hyperbolic_distance(a, c) + hyperbolic_distance(c, b) + 1e-12);
    }
}

TEST_CASE("signed distance to a geodesic") {
    // diameter {y=0}: endpoints at angles 0 and pi, c1 = upper semicircle
    const Geodesic g(0.0, kPi);
    CHECK(std::abs(signed_distance_to_geodesic(DiskPoint::interior(0.3, 0), g)) < 1e-14);
    CHECK(signed_distance_to_geodesic(DiskPoint::interior(0, 0.5), g) ==
          doctest::Approx(2.0 * std::atanh(0.5)).epsilon(1e-13));
    // reflection negates
    const Isometry refl = Isometry::reflection_in(g);
    for (int k = 0; k < 100; ++k) {
        const DiskPoint p = random_interior();
        const DiskPoint q = apply_isometry(p, refl);
        CHECK(signed_distance_to_geodesic(q, g) ==
              doctest::Approx(-signed_distance_to_geodesic(p, g)).epsilon(1e-11));
    }
    // invariance under translation along the geodesic
    const Geodesic g2(0.7, 2.1);
    for (int k = 0; k < 100; ++k) {
        std::uniform_real_distribution<double> ul(-3.0, 3.0);
        const Isometry t = Isometry::translation_along(g2, ul(rng()));
        const DiskPoint p = random_interior();
        CHECK(std::abs(signed_distance_to_geodesic(apply_isometry(p, t), g2) -
                       signed_distance_to_geodesic(p, g2)) < 1e-10);
    }
}

TEST_CASE("isometries preserve the metric and the ideal circle") {
    // identity translation
    const Geodesic g(0.0, kPi);
    const Isometry id = Isometry::translation_along(g, 0.0);
    const DiskPoint p0 = random_interior();
    CHECK(std::abs(id.map(p0.z()) - p0.z()) < 1e-15);
    // translation along {y=0} by ell moves the origin toward q1 = (1,0)
    const double ell = 0.8;
    const DiskPoint moved = apply_isometry(DiskPoint::interior(0, 0),
                                           Isometry::translation_along(g, ell));
    CHECK(moved.x == doctest::Approx(std::tanh(0.5 * ell)).epsilon(1e-14));
    CHECK(std::abs(moved.y) < 1e-14);
    // metric preservation, 1e4 random (p, q, iso) triples
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const DiskPoint p = random_interior(), q = random_interior();
        const Isometry iso = random_isometry();
        const double before = hyperbolic_distance(p, q);
        const double after = hyperbolic_distance(apply_isometry(p, iso), apply_isometry(q, iso));
        worst = std::max(worst, std::abs(before - after));
    }
    CHECK(worst < 1e-10);
    // ideal circle maps to itself
    for (int k = 0; k < 200; ++k) {
        std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi);
        const DiskPoint q = apply_isometry(DiskPoint::at_angle(ut(rng())), random_isometry());
        CHECK(q.ideal);
        CHECK(std::abs(q.r2() - 1.0) < 1e-12);
    }
}

TEST_CASE("model conversion") {
    // fixed normalization: disk origin <-> half-plane (0, 1)
    const HalfPlanePoint o = disk_to_halfplane(DiskPoint::interior(0, 0));
    CHECK(o.x == doctest::Approx(0.0));
    CHECK(o.y == doctest::Approx(1.0));
    const DiskPoint back = halfplane_to_disk(HalfPlanePoint{0.0, 1.0});
    CHECK(std::abs(back.z()) < 1e-15);
    // boundary to boundary: (1,0) lands on the half-plane x-axis
    const HalfPlanePoint b = disk_to_halfplane(DiskPoint::at_angle(0.0));
    CHECK(b.y == 0.0);
    CHECK(b.x == doctest::Approx(1.0));
    // the pole is flagged
    CHECK(disk_to_halfplane(DiskPoint::interior(0.0, 1.0)).at_infinity);
    // involution on 1e4 random interior points
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const DiskPoint p = random_interior(0.999);
        const DiskPoint rt = halfplane_to_disk(disk_to_halfplane(p));
        worst = std::max(worst, std::abs(rt.z() - p.z()));
    }
    CHECK(worst < 1e-13);
}

TEST_CASE("geodesic through points and canonical ordering") {
    // through origin and (0.5, 0): the {y=0} diameter
    const Geodesic g = geodesic_through(DiskPoint::interior(0, 0), DiskPoint::interior(0.5, 0));
    const EuclideanCarrier c = carrier_of(g);
    CHECK(c.is_line);
    // canonical ordering: counterclockwise sweep q1 -> q2 is the short arc
    const Geodesic h(2.0, 0.5);
    const double sweep = std::fmod(h.theta2 - h.theta1 + 2.0 * kPi, 2.0 * kPi);
    CHECK(sweep <= kPi + 1e-12);
    CHECK_THROWS_AS(Geodesic(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("carriers are orthogonal circles / correct loci") {
    const Geodesic g(0.4, 1.9);
    const EuclideanCarrier c = carrier_of(g);
    REQUIRE(!c.is_line);
    CHECK(std::norm(c.center) == doctest::Approx(1.0 + c.radius * c.radius).epsilon(1e-12));
    // points on the carrier have zero signed distance
    for (int k = 0; k < 32; ++k) {
        const complexd z = c.center + c.radius * std::polar(1.0, 2.0 * kPi * k / 32);
        if (std::abs(z) >= 0.999) continue;
        CHECK(std::abs(signed_distance_to_geodesic(DiskPoint::from_complex(z), g)) < 1e-10);
    }
    // equidistant carrier: signed distance equals the offset, curvature tanh r
    const EquidistantCurve e{g, 0.6, Side::right};
    CHECK(e.curvature() == doctest::Approx(std::tanh(0.6)));
    const EuclideanCarrier ce = carrier_of(e);
    for (int k = 0; k < 32; ++k) {
        const complexd z = ce.center + ce.radius * std::polar(1.0, 2.0 * kPi * k / 32);
        if (std::abs(z) >= 0.995) continue;
        CHECK(signed_distance_to_geodesic(DiskPoint::from_complex(z), g) ==
              doctest::Approx(0.6).epsilon(1e-9));
    }
    // hyperbolic circle carrier: all points at the stated distance
    const DiskPoint ctr = DiskPoint::interior(0.3, -0.2);
    const EuclideanCarrier cc = carrier_of_circle(ctr, 0.9);
    for (int k = 0; k < 32; ++k) {
        const complexd z = cc.center + cc.radius * std::polar(1.0, 2.0 * kPi * k / 32);
        CHECK(hyperbolic_distance(ctr, DiskPoint::from_complex(z)) ==
              doctest::Approx(0.9).epsilon(1e-12));
    }
}

namespace {

DomainSpec exterior_of_circle(DiskPoint center, double radius) {
    DomainSpec d;
    Component comp;
    comp.tag = Component::Tag::jordan;
    comp.shape = CircleComponent{center, radius, true};
    d.components.push_back(comp);
    return d;
}

}  // namespace

TEST_CASE("exterior circle radius") {
    SUBCASE("a circle is its own exterior circle") {
        const auto r = exterior_circle_radius(exterior_of_circle(DiskPoint::interior(0, 0), 1.0),
                                              128);
        CHECK(r.value >= 1.0 - 1e-4);
        CHECK(r.value <= 1.0 + 1e-4);
    }
    SUBCASE("geodesic half-planes report the probe cap") {
        DomainSpec d;
        Component comp;
        comp.tag = Component::Tag::two_ends;
        comp.shape = CurveComponent{Geodesic(0.0, kPi), 0.0, Side::right};
        d.components.push_back(comp);
        const auto r = exterior_circle_radius(d, 64);
        CHECK(r.capped);
        CHECK(r.value == doctest::Approx(10.0));
    }
    SUBCASE("reflex corner forces radius zero") {
        // boundary: two geodesic rays from an interior vertex with angular gap
        // 3pi/4 between them; interior-on-left of the stated order puts Omega
        // on the reflex (5pi/4) side
        DomainSpec d;
        Component comp;
        comp.tag = Component::Tag::one_end;
        ChainComponent ch;
        ch.closed = false;
        ch.vertices = {DiskPoint::at_angle(0.0), DiskPoint::interior(0.0, 0.0),
                       DiskPoint::at_angle(kPi * 0.75)};
        comp.shape = ch;
        d.components.push_back(comp);
        const auto r = exterior_circle_radius(d, 256);
        CHECK(r.value == 0.0);
        CHECK(!r.diagnostic.empty());
    }
    SUBCASE("monotone under domain shrinking at a shared tangency point") {
        // two internally tangent holes through p = origin side
        const DiskPoint p = DiskPoint::interior(0.0, 0.0);
        const DiskPoint c1 = geodesic_step(p, complexd{1.0, 0.0}, 1.0);
        const DiskPoint c2 = geodesic_step(p, complexd{1.0, 0.0}, 1.5);
        const auto r_big = exterior_circle_radius(exterior_of_circle(c1, 1.0), 96);
        const auto r_small = exterior_circle_radius(exterior_of_circle(c2, 1.5), 96);
        CHECK(r_small.value >= r_big.value - 1e-6);
    }
}

TEST_CASE("exterior equidistant curvature") {
    SUBCASE("convex side of a geodesic gives zero") {
        DomainSpec d;
        Component comp;
        comp.tag = Component::Tag::two_ends;
        comp.shape = CurveComponent{Geodesic(0.0, kPi), 0.0, Side::right};
        d.components.push_back(comp);
        CHECK(exterior_equidistant_curvature(d, 64).value == 0.0);
        // convex side of a genuine equidistant also reports zero
        DomainSpec d2;
        Component c2;
        c2.tag = Component::Tag::two_ends;
        c2.shape = CurveComponent{Geodesic(0.0, kPi), 0.7, Side::left};
        d2.components.push_back(c2);
        CHECK(exterior_equidistant_curvature(d2, 64).value == 0.0);
    }
    SUBCASE("concave side of an equidistant recovers its distance") {
        const double r0 = 0.7;
        DomainSpec d;
        Component comp;
        comp.tag = Component::Tag::two_ends;
        // domain on the far side of the equidistant at signed offset r0
        comp.shape = CurveComponent{Geodesic(0.0, kPi), r0, Side::right};
        d.components.push_back(comp);
        const auto r = exterior_equidistant_curvature(d, 96);
        CHECK(r.value == doctest::Approx(r0).epsilon(0.02));
    }
    SUBCASE("tag violation raises the E-admissibility error") {
        CHECK_THROWS_AS(
            exterior_equidistant_curvature(exterior_of_circle(DiskPoint::interior(0, 0), 1.0), 64),
            std::domain_error);
    }
}
