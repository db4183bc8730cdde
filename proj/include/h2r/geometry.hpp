#pragma once

#include <complex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

// Hyperbolic-plane primitives in the Poincare disk and half-plane models:
// distances, geodesics, equidistant curves, isometries, model conversion and
// the admissibility measurements used by the Dirichlet solver.
//
// The disk model is the canonical internal representation; the half-plane is
// reached through a fixed Cayley map normalized so that the disk origin maps
// to the half-plane point (0,1).

namespace h2r {

using complexd = std::complex<double>;

constexpr double kIdealTol = 1e-12;

struct DiskPoint {
    double x = 0.0;
    double y = 0.0;
    bool ideal = false;  // on the unit circle (asymptotic point)

    complexd z() const { return {x, y}; }
    double r2() const { return x * x + y * y; }
    static DiskPoint interior(double x, double y) { return {x, y, false}; }
    static DiskPoint at_angle(double theta);  // ideal point e^{i theta}
    static DiskPoint from_complex(complexd z, bool ideal = false) {
        return {z.real(), z.imag(), ideal};
    }
};

struct HalfPlanePoint {
    double x = 0.0;
    double y = 0.0;           // y >= 0; y == 0 is the asymptotic boundary
    bool at_infinity = false; // image of the Cayley pole

    complexd z() const { return {x, y}; }
};

double hyperbolic_distance(const DiskPoint& p, const DiskPoint& q);

// A complete geodesic, stored by its two ideal endpoints.  Endpoints are
// canonically ordered: q1 is the endpoint whose counterclockwise arc to q2
// is the shorter one (ties broken by smaller angle).  That arc is c1; the
// complementary arc is c2.  Sides: signed distances are positive toward c1.
struct Geodesic {
    double theta1 = 0.0;  // angle of q1
    double theta2 = 0.0;  // angle of q2

    Geodesic() = default;
    Geodesic(double a, double b);  // canonicalizes the order
    DiskPoint q1() const { return DiskPoint::at_angle(theta1); }
    DiskPoint q2() const { return DiskPoint::at_angle(theta2); }
    Geodesic flipped() const;  // swap endpoints (reverses side signs)
};

// Geodesic through two given points of the closed disk (distinct; at most
// one may be ideal together with an interior one, or both ideal).
Geodesic geodesic_through(const DiskPoint& p, const DiskPoint& q);

enum class Side { left, right };

// Equidistant curve of the base geodesic at hyperbolic distance `distance`.
// side::right is the side of arc c1 (positive signed distances).
// Its geodesic curvature equals tanh(distance).
struct EquidistantCurve {
    Geodesic base;
    double distance = 0.0;
    Side side = Side::right;

    double signed_offset() const { return side == Side::right ? distance : -distance; }
    double curvature() const { return std::tanh(distance); }
};

// Orientation-aware Moebius transformation of the closed disk:
//   z -> (a w + b) / (c w + d),  w = conj(z) if reflecting, else z.
struct Isometry {
    complexd a{1.0, 0.0}, b{0.0, 0.0}, c{0.0, 0.0}, d{1.0, 0.0};
    bool reflecting = false;

    static Isometry identity() { return {}; }
    static Isometry rotation(double phi);                       // about the origin
    static Isometry rotation_about(const DiskPoint& p, double phi);
    static Isometry translate_origin_to(const DiskPoint& p);    // 0 -> p along the ray
    // Hyperbolic translation along g by length ell; positive ell drifts
    // toward the first endpoint q1.
    static Isometry translation_along(const Geodesic& g, double ell);
    static Isometry reflection_in(const Geodesic& g);
    // Maps g to the vertical diameter with q1 -> -i, q2 -> +i (c1 becomes
    // the right semicircle).
    static Isometry canonical_frame(const Geodesic& g);

    Isometry inverse() const;
    Isometry then(const Isometry& next) const;  // next ∘ this
    complexd map(complexd z) const;
};

DiskPoint apply_isometry(const DiskPoint& p, const Isometry& iso);

// Signed distance from p to g: zero on g, positive on the c1 side.
double signed_distance_to_geodesic(const DiskPoint& p, const Geodesic& g);

// Point reached from p after geodesic flow of hyperbolic length dist in the
// Euclidean unit direction dir (as seen at p).
DiskPoint geodesic_step(const DiskPoint& p, complexd dir, double dist);

// Fixed Cayley normalization: disk origin <-> half-plane (0,1); the disk
// point (0,1) is the pole and maps to the flagged point at infinity.
HalfPlanePoint disk_to_halfplane(const DiskPoint& p);
DiskPoint halfplane_to_disk(const HalfPlanePoint& p);

// Euclidean circle (or line when is_line) carrier of a curve in the disk
// model; every geodesic, equidistant curve and hyperbolic circle is one.
struct EuclideanCarrier {
    bool is_line = false;
    complexd center{0.0, 0.0};  // circle center, or a point on the line
    double radius = 0.0;        // circle radius
    complexd dir{1.0, 0.0};     // line direction (unit)
};

EuclideanCarrier carrier_of(const Geodesic& g);
EuclideanCarrier carrier_of(const EquidistantCurve& e);
// Hyperbolic circle of radius rho about an interior center.
EuclideanCarrier carrier_of_circle(const DiskPoint& center, double rho);

// ---------------------------------------------------------------------------
// Domains

// Boundary components supported by the solver and the admissibility probes.
struct CircleComponent {
    DiskPoint center;
    double radius = 0.0;       // hyperbolic radius
    bool domain_outside = true;  // Omega on the exterior of the circle
};

// Full geodesic or equidistant curve; two asymptotic endpoints.
struct CurveComponent {
    Geodesic base;
    double offset = 0.0;       // signed equidistant offset (0 = geodesic)
    Side domain_side = Side::right;  // which side is Omega
};

// Chain of geodesic arcs; vertices may be interior or ideal.  Convex chains
// (interior on the stated side of every full geodesic) are solvable; general
// chains are still usable by the sampling probes.
struct ChainComponent {
    std::vector<DiskPoint> vertices;   // consecutive arc endpoints
    bool closed = false;               // Jordan polygon when true
    bool domain_inside = true;         // Omega inside the polygon (closed case)
};

struct Component {
    enum class Tag { jordan, one_end, two_ends };
    Tag tag = Tag::jordan;
    std::variant<CircleComponent, CurveComponent, ChainComponent> shape;
};

struct DomainSpec {
    std::vector<Component> components;  // empty: the whole hyperbolic plane

    bool contains(const DiskPoint& p) const;
    bool unbounded() const;             // has asymptotic boundary
    // Dense boundary sampling: positions, outward unit normals (Euclidean),
    // component index per sample.
    struct BoundarySample {
        DiskPoint p;
        complexd outward;  // unit, Euclidean, points out of Omega
        int component = 0;
        int arc = 0;
    };
    std::vector<BoundarySample> sample_boundary(int samples_per_component) const;
};

// Largest uniform radius rho (capped at probe_cap) such that at every sampled
// boundary point an exterior-tangent hyperbolic circle of radius rho avoids
// Omega; returns 0 with a diagnostic when no positive radius works.
struct AdmissibilityResult {
    double value = 0.0;
    bool capped = false;
    std::string diagnostic;
};
AdmissibilityResult exterior_circle_radius(const DomainSpec& d, int samples,
                                           double probe_cap = 10.0);

// Infimum of r such that every sampled boundary point has an exterior
// equidistant curve of curvature tanh(r); 0 for convex domains.  Requires
// every component to have exactly two asymptotic endpoints.
AdmissibilityResult exterior_equidistant_curvature(const DomainSpec& d, int samples,
                                                   double probe_cap = 10.0);

}  // namespace h2r
