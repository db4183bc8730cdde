#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

// Existence / nonexistence decision procedure for prescribed asymptotic
// boundary curves on the cylinder (ideal circle) x (height axis).  The rules
// are the slab, projection-gap and model-family criteria applied in a fixed
// priority order; anything outside their hypotheses is Undetermined.

namespace h2r {

struct CurveSegment {
    enum class Kind { arc, vertical, graph };
    Kind kind = Kind::arc;
    double theta0 = 0.0, theta1 = 0.0;  // signed angular sweep theta0 -> theta1
    double t0 = 0.0, t1 = 0.0;          // heights (arc: t0 == t1)
    std::vector<std::pair<double, double>> samples;  // graph: (theta, height)
};

struct AsymptoticCurve {
    std::vector<CurveSegment> segments;
    bool closed = false;

    // Model boundary curves of the translation-invariant family.
    static AsymptoticCurve model_homologous_zero(double theta1, double theta2, double height);
    static AsymptoticCurve model_entire(double theta1, double theta2, double height);
    static AsymptoticCurve horizontal_circle(double height);
    static AsymptoticCurve graph_over_circle(const std::vector<std::pair<double, double>>& samples);

    void validate() const;  // chain continuity when closed; finite heights
};

std::pair<double, double> slab_extent(const AsymptoticCurve& c);

// Angular winding degree of the closed curve around the cylinder; the curve
// is null-homologous exactly when the degree is 0.
int homology_degree(const AsymptoticCurve& c);

struct AngularArc {
    double start = 0.0;
    double length = 0.0;  // counterclockwise extent
};

// Maximal open angular arc omitted by the vertical projection, if any.
std::optional<AngularArc> projection_gap(const AsymptoticCurve& c);

struct Verdict {
    enum class Decision {
        NonexistentProper,
        NonexistentWithBoundaryContinuity,
        ExistsConstructive,
        ExistsBySolver,
        Undetermined,
    };
    Decision decision = Decision::Undetermined;
    std::string rule;       // stable rule identifier
    std::string statement;  // one-line human-readable form of the rule

    // certificates
    double t_min = 0.0, t_max = 0.0, width = 0.0;
    std::optional<int> degree;
    std::optional<AngularArc> gap;
    std::optional<double> d_hat;          // recovered family parameter
    std::optional<double> model_height;   // matched arc height
    bool solver_confirmed = false;
    std::string detail;
};

struct ClassifyOptions {
    double width_tol = 1e-9;       // |width - pi| <= tol counts as "equal to pi"
    bool invoke_solver = true;     // confirm full-circle graphs by solving
    int solver_resolution = 65;
};

Verdict classify(const AsymptoticCurve& c, const ClassifyOptions& opts = {});

std::string to_string(Verdict::Decision d);

}  // namespace h2r
