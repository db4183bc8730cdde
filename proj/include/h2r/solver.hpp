#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "h2r/geometry.hpp"
#include "h2r/grid.hpp"
#include "h2r/operator.hpp"

// Discrete Dirichlet solver for the minimal vertical equation on admissible
// domains with finite and asymptotic boundary data.
//
// Discretization: uniform Cartesian grid over the closed unit disk.  Nodes on
// or beyond |z| = 1 that are referenced by interior stencils are ordinary
// Dirichlet nodes carrying the asymptotic data (the equation is uniformly
// elliptic up to the circle).  Finite boundary curves are handled with cut
// cells: axis arms are shortened to the cut point (Shortley-Weller), diagonal
// arms take the boundary value at the segment crossing.
//
// Solution pipeline: a monotone stage of disk replacements started at the
// constant subsolution inf g (the discrete counterpart of the sup over
// subsolution lifts), then a damped Newton finishing stage.  Divergence is
// reported as evidence with the iterate trace, never as a nonexistence proof.

namespace h2r {

// ---------------------------------------------------------------------------
// Boundary data

struct AsymptoticData {
    struct Piece {
        enum class Kind { constant, linear_in_angle, table };
        Kind kind = Kind::constant;
        double theta0 = 0.0, theta1 = 2.0 * 3.14159265358979323846;
        double v0 = 0.0, v1 = 0.0;                       // constant / linear
        std::vector<std::pair<double, double>> points;   // table (theta, value)
    };
    std::vector<Piece> pieces;

    static AsymptoticData constant(double c);
    static AsymptoticData sawtooth(double at_theta, double lo, double hi);
    static AsymptoticData from_function(const std::function<double(double)>& g, int samples);
    double eval(double theta) const;
    double inf() const;
    double sup() const;
};

struct Discontinuity {
    double theta = 0.0;  // location on the ideal circle
    double A = 0.0;      // liminf of g at the point
    double B = 0.0;      // limsup
};

struct FiniteData {
    struct Entry {
        int component = 0;
        int arc = -1;  // -1: every arc of the component
        double value = 0.0;
    };
    std::vector<Entry> entries;
    double value_at(int component, int arc) const;
};

struct BoundaryData {
    AsymptoticData asymptotic;
    FiniteData finite;
    std::vector<Discontinuity> discontinuities;
};

// ---------------------------------------------------------------------------
// Problem assembly

struct SolverTolerances {
    double residual = 1e-8;  // normalized residual max-norm
    double change = 1e-10;   // iterate max-norm change
};

struct SolverOptions {
    int monotone_sweeps = 3;         // sweep cap before Newton
    double monotone_target = 0.0;    // >0: sweep until est. distance to limit < target
    bool newton = true;
    int max_newton = 60;
    double lift_radius_cells = 4.0;  // disk replacement radius, in cells
    bool force_without_barriers = false;  // skip the admissibility gate
    const GridFunction* initial = nullptr;  // warm start (else constant inf g)
};

struct NodeStencil {
    int id = -1;          // grid node id
    int nb[8] = {-1, -1, -1, -1, -1, -1, -1, -1};  // E W N S NE NW SE SW (grid id)
    double bval[8] = {0, 0, 0, 0, 0, 0, 0, 0};     // boundary value at the cut when nb < 0
    double arm_e = 1.0, arm_w = 1.0, arm_n = 1.0, arm_s = 1.0;  // fractions of h
    // diagonal cut fractions (of sqrt(2) h); the cross term is evaluated as
    // the half-difference of the two diagonal second differences with these
    // arms, values sitting exactly on the cut
    double diag_alpha[4] = {1.0, 1.0, 1.0, 1.0};   // NE NW SE SW
};

struct Problem {
    DomainSpec domain;
    BoundaryData data;
    int resolution = 65;
    SolverTolerances tol;
    SolverOptions opts;

    GridFunction skeleton;            // classes + boundary values, unknowns NaN
    std::vector<NodeStencil> stencils;  // one per unknown
    std::vector<int> unknown_of_node;   // grid id -> unknown index or -1
    double g_inf = 0.0, g_sup = 0.0;
    double rho_domain = 0.0;          // exterior-circle radius estimate (finite boundary)
};

// Classifies nodes, samples boundary data and builds the cut-cell stencils.
// Throws std::runtime_error on inadmissible domains unless
// opts.force_without_barriers is set.  resolution >= 33.
Problem build_problem(const DomainSpec& dom, const BoundaryData& data, int resolution,
                      SolverOptions opts = {}, SolverTolerances tol = {});

// ---------------------------------------------------------------------------
// Solving

struct SolveReport {
    bool converged = false;
    bool diverged = false;   // unbounded iterates: nonexistence evidence only
    int monotone_sweeps = 0;
    int newton_iterations = 0;
    double residual_norm = 0.0;   // final normalized max-norm
    double last_change = 0.0;
    double u_min = 0.0, u_max = 0.0;
    double g_min = 0.0, g_max = 0.0;
    bool bracketed = false;       // u range inside [inf g, sup g] (+ slack)
    std::vector<double> trace;    // per-stage max|u|
    std::string message;
};

struct Solution {
    GridFunction u;
    SolveReport report;
};

Solution solve(const Problem& p);

// Replaces the values inside the closed hyperbolic disk (center, radius) by
// the discrete solution with the current trace as Dirichlet ring; values
// outside are untouched.  Throws on inner nonconvergence.
GridFunction lift_on_disk(const Problem& p, const GridFunction& u, const DiskPoint& center,
                          double radius);

// ---------------------------------------------------------------------------
// Verification

struct VerifyOptions {
    double bracket_slack = 1e-6;
    double residual_tol = 1e-6;      // normalized interior residual
    double attainment_tol = 0.0;     // 0: automatic (scales with h and data range)
    double coverage_lo = 0.05;       // discontinuity span must reach A+lo*(B-A)
    double coverage_hi = 0.95;       // ... and B-(1-hi)*(B-A)
    double coverage_gap = 0.2;       // max normalized gap between approach values
};

struct VerificationReport {
    struct Check {
        std::string name;
        bool pass = false;
        double measured = 0.0;
        double bound = 0.0;
        std::string detail;
    };
    bool pass = false;
    std::vector<Check> checks;
    const Check* find(const std::string& name) const;
};

VerificationReport verify_solution(const GridFunction& u, const Problem& p,
                                   VerifyOptions vo = {});

// ---------------------------------------------------------------------------
// Barriers

enum class BarrierKind { catenoid_half, equidistant_surface, scherk_convex, asymptotic_scherk, constant };

struct BarrierCertificate {
    DiskPoint point;
    BarrierKind kind = BarrierKind::constant;
    struct Level {
        double gap = 0.0;  // omega(p) - g(p) for the superior member
        std::function<double(const DiskPoint&)> upper, lower;
        // asymptotic boundary trace of the superior member (angle -> value);
        // compared against the data over the validity arc
        std::function<double(double)> upper_trace;
        // exact-jet evaluator of the superior member when available (used for
        // the residual verification instead of finite differences)
        std::optional<ScalarField> upper_field;
        double theta_center = 0.0;
        double arc_halfwidth = 0.0;        // 0: the whole circle
        double neighborhood_radius = 0.0;  // Euclidean, 0 = all of Omega
    };
    std::vector<Level> levels;
    std::string note;
    bool verified = false;
    double max_barrier_residual = 0.0;
    double min_boundary_margin = 0.0;
};

// Error thrown when the geometric height hypothesis gating a barrier fails
// (asymptotic data taller than the half-catenoid / translation-surface cap).
struct BarrierError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

BarrierCertificate make_barrier(const DiskPoint& p, const Problem& prob, BarrierKind kind);

// ---------------------------------------------------------------------------
// Scherk-type graphs over geodesic triangles

struct ScherkTriangle {
    DiskPoint apex;   // common vertex of the two zero-data sides
    DiskPoint base1;  // endpoints of the side carrying the cap data
    DiskPoint base2;
};

// Solves the capped problems u_n (data n on the base side, 0 on the others)
// for each cap in the schedule, warm-starting each solve from the previous
// one.  The sequence is pointwise nondecreasing (discrete maximum principle).
std::vector<Solution> solve_scherk_triangle(const ScherkTriangle& tri,
                                            const std::vector<double>& caps,
                                            int resolution,
                                            SolverTolerances tol = {});

}  // namespace h2r
