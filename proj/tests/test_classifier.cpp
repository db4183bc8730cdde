#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "h2r/classifier.hpp"
#include "h2r/families.hpp"

using namespace h2r;

namespace {
constexpr double kPi = 3.14159265358979323846;
using D = Verdict::Decision;
}  // namespace

TEST_CASE("slab extent") {
    CHECK(slab_extent(AsymptoticCurve::horizontal_circle(0.0)) ==
          std::pair<double, double>{0.0, 0.0});
    const double H2 = height_H(2.0).value;
    const auto c = AsymptoticCurve::model_homologous_zero(0.3, 1.7, H2);
    const auto [lo, hi] = slab_extent(c);
    CHECK(lo == doctest::Approx(-H2));
    CHECK(hi == doctest::Approx(H2));
    // two arcs at heights 0 and 1 joined by verticals
    AsymptoticCurve mix;
    mix.closed = true;
    CurveSegment a0{CurveSegment::Kind::arc, 0.0, kPi, 0.0, 0.0, {}};
    CurveSegment v1{CurveSegment::Kind::vertical, kPi, kPi, 0.0, 1.0, {}};
    CurveSegment a1{CurveSegment::Kind::arc, kPi, 2.0 * kPi, 1.0, 1.0, {}};
    CurveSegment v2{CurveSegment::Kind::vertical, 2.0 * kPi, 2.0 * kPi, 1.0, 0.0, {}};
    mix.segments = {a0, v1, a1, v2};
    const auto [l2, h2] = slab_extent(mix);
    CHECK(l2 == 0.0);
    CHECK(h2 == 1.0);
}

TEST_CASE("homology degree") {
    CHECK(homology_degree(AsymptoticCurve::horizontal_circle(0.4)) == 1);
    CHECK(homology_degree(AsymptoticCurve::model_homologous_zero(0.3, 1.7, 2.0)) == 0);
    CHECK(std::abs(homology_degree(AsymptoticCurve::model_entire(0.2, 2.2, 0.8))) == 1);
    AsymptoticCurve open;
    open.closed = false;
    open.segments = {CurveSegment{CurveSegment::Kind::arc, 0.0, 1.0, 0.5, 0.5, {}}};
    CHECK_THROWS_AS(homology_degree(open), std::domain_error);
}

TEST_CASE("projection gap") {
    // curve over a half-circle leaves the complementary half open
    AsymptoticCurve half;
    half.closed = false;
    half.segments = {CurveSegment{CurveSegment::Kind::arc, 0.0, kPi, 0.2, 0.2, {}}};
    const auto gap = projection_gap(half);
    REQUIRE(gap.has_value());
    CHECK(gap->length == doctest::Approx(kPi).epsilon(1e-9));
    CHECK(!projection_gap(AsymptoticCurve::horizontal_circle(0.0)).has_value());
    // the null-homologous model curve projects onto one arc only
    const auto model = AsymptoticCurve::model_homologous_zero(0.3, 1.7, 2.0);
    const auto g2 = projection_gap(model);
    REQUIRE(g2.has_value());
    CHECK(g2->length == doctest::Approx(2.0 * kPi - 1.4).epsilon(1e-9));
}

TEST_CASE("classification of the canonical examples") {
    ClassifyOptions fast;
    fast.invoke_solver = false;

    SUBCASE("narrow null-homologous curve cannot bound") {
        const auto c = AsymptoticCurve::model_homologous_zero(0.5, 2.5, 1.5);  // width 3 < pi
        const Verdict v = classify(c, fast);
        CHECK(v.decision == D::NonexistentProper);
        CHECK(v.rule == "slab_nonexistence");
        CHECK(v.width == doctest::Approx(3.0));
    }
    SUBCASE("translation-invariant model curve recovers its parameter") {
        const double H2 = height_H(2.0).value;
        const Verdict v = classify(AsymptoticCurve::model_homologous_zero(0.3, 1.7, H2), fast);
        CHECK(v.decision == D::ExistsConstructive);
        REQUIRE(v.d_hat.has_value());
        CHECK(std::abs(*v.d_hat - 2.0) < 1e-6);
        CHECK(std::abs(height_H(*v.d_hat).value - H2) < 1e-8);
    }
    SUBCASE("bounded graph over the whole circle is solvable") {
        std::vector<std::pair<double, double>> samples;
        for (int k = 0; k <= 128; ++k) {
            const double th = 2.0 * kPi * k / 128;
            samples.emplace_back(th, 0.2 * std::sin(th));
        }
        ClassifyOptions with_solver;
        with_solver.solver_resolution = 49;
        const Verdict v = classify(AsymptoticCurve::graph_over_circle(samples), with_solver);
        CHECK(v.decision == D::ExistsBySolver);
        CHECK(v.solver_confirmed);
    }
    SUBCASE("exact slab width pi is the boundary-continuity case") {
        const auto c = AsymptoticCurve::model_homologous_zero(0.4, 2.0, 0.5 * kPi);
        const Verdict v = classify(c, fast);
        CHECK(v.decision == D::NonexistentWithBoundaryContinuity);
        CHECK(v.rule == "slab_boundary_case");
    }
    SUBCASE("projection gap rule for open curves") {
        AsymptoticCurve half;
        half.closed = false;
        half.segments = {CurveSegment{CurveSegment::Kind::arc, 0.0, kPi, 0.2, 0.2, {}}};
        const Verdict v = classify(half, fast);
        CHECK(v.decision == D::NonexistentProper);
        CHECK(v.rule == "projection_gap");
    }
    SUBCASE("entire-family model curve") {
        const double G = height_G(0.5).value;
        const Verdict v = classify(AsymptoticCurve::model_entire(0.3, 2.8, G), fast);
        CHECK(v.decision == D::ExistsConstructive);
        REQUIRE(v.d_hat.has_value());
        CHECK(std::abs(*v.d_hat - 0.5) < 1e-6);
    }
    SUBCASE("wide unmatched curve stays undetermined") {
        const auto c = AsymptoticCurve::model_homologous_zero(0.3, 1.7, 2.0);
        AsymptoticCurve tweaked = c;
        tweaked.segments[0].t0 = tweaked.segments[0].t1 = 2.5;  // breaks the chain
        CHECK_THROWS_AS(classify(tweaked, fast), std::invalid_argument);
        AsymptoticCurve shifted = c;  // mismatched arc heights: +2.0 and -1.9
        for (auto& s : shifted.segments) {
            if (s.kind == CurveSegment::Kind::arc && s.t0 < 0) s.t0 = s.t1 = -1.9;
            if (s.kind == CurveSegment::Kind::vertical) {
                if (s.t0 < 0) s.t0 = -1.9;
                if (s.t1 < 0) s.t1 = -1.9;
            }
        }
        const Verdict v = classify(shifted, fast);
        CHECK(v.decision == D::Undetermined);
    }
}

TEST_CASE("classification invariances") {
    ClassifyOptions fast;
    fast.invoke_solver = false;
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi), uh(-2.0, 2.0);
    const double H3 = height_H(3.0).value;
    for (int k = 0; k < 10; ++k) {
        const double rot = ut(rng);
        const auto base = AsymptoticCurve::model_homologous_zero(0.3 + rot, 1.9 + rot, H3);
        const Verdict v = classify(base, fast);
        CHECK(v.decision == D::ExistsConstructive);
        CHECK(std::abs(*v.d_hat - 3.0) < 1e-6);
    }
    // vertical translation: heights move together, decisions stable
    for (int k = 0; k < 5; ++k) {
        const double dz = uh(rng);
        AsymptoticCurve c = AsymptoticCurve::model_homologous_zero(0.5, 2.5, 1.5);
        for (auto& s : c.segments) {
            s.t0 += dz;
            s.t1 += dz;
        }
        const Verdict v = classify(c, fast);
        CHECK(v.decision == D::NonexistentProper);
    }
}

TEST_CASE("no curve triggers both existence and nonexistence") {
    ClassifyOptions fast;
    fast.invoke_solver = false;
    for (const double d : {1.5, 2.0, 5.0, 20.0}) {
        const double H = height_H(d).value;
        const Verdict v = classify(AsymptoticCurve::model_homologous_zero(0.4, 2.1, H), fast);
        CHECK(v.decision == D::ExistsConstructive);
        CHECK(2.0 * H > kPi);  // the slab rules cannot also fire
    }
}

TEST_CASE("random narrow null-homologous curves are all rejected") {
    ClassifyOptions fast;
    fast.invoke_solver = false;
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> ut(0.0, 2.0 * kPi), uu(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        // random closed degree-0 chain of arcs and verticals inside a slab of
        // width < pi - 0.01
        const double width = (kPi - 0.011) * (0.2 + 0.8 * uu(rng));
        const int pieces = 2 + static_cast<int>(uu(rng) * 4);
        AsymptoticCurve c;
        c.closed = true;
        double th = ut(rng);
        double t = width * uu(rng);
        const double th0 = th, t0 = t;
        for (int k = 0; k < pieces; ++k) {
            const double sweep = (uu(rng) - 0.5) * 1.5;
            CurveSegment arc;
            arc.kind = CurveSegment::Kind::arc;
            arc.theta0 = th;
            arc.theta1 = th + sweep;
            arc.t0 = arc.t1 = t;
            c.segments.push_back(arc);
            th += sweep;
            const double tn = width * uu(rng);
            CurveSegment v;
            v.kind = CurveSegment::Kind::vertical;
            v.theta0 = v.theta1 = th;
            v.t0 = t;
            v.t1 = tn;
            c.segments.push_back(v);
            t = tn;
        }
        // close up: arc back to the start angle, vertical to the start height
        CurveSegment back;
        back.kind = CurveSegment::Kind::arc;
        back.theta0 = th;
        back.theta1 = th0;
        back.t0 = back.t1 = t;
        c.segments.push_back(back);
        CurveSegment vclose;
        vclose.kind = CurveSegment::Kind::vertical;
        vclose.theta0 = vclose.theta1 = th0;
        vclose.t0 = t;
        vclose.t1 = t0;
        c.segments.push_back(vclose);

        const Verdict v = classify(c, fast);
        CHECK(v.decision == D::NonexistentProper);
        CHECK(v.width < kPi - 0.01);
        CHECK(*v.degree == 0);
    }
}

TEST_CASE("height inversion round-trip across the classifier range") {
    for (double d = 1.1; d <= 50.0; d *= 1.9) {
        const double T = height_H(d).value;
        CHECK(std::abs(invert_height_H(T) - d) < 1e-6);
    }
}
