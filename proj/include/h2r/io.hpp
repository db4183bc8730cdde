#pragma once

#include <string>

#include "h2r/classifier.hpp"
#include "h2r/families.hpp"
#include "h2r/geometry.hpp"
#include "h2r/solver.hpp"

// JSON schemas, CSV tables and OBJ meshes.
//
// Domain:  { "components": [ { "kind": "jordan"|"one_end"|"two_ends",
//                              "arcs": [ ...arc records... ] } ] }
//   arc records:
//     {"type":"circle","center":[x,y],"radius":r,"domain":"outside"|"inside"}
//     {"type":"geodesic_line","angles":[a,b],"domain_side":"left"|"right"}
//     {"type":"equidistant","angles":[a,b],"distance":d,"side":"left"|"right",
//      "domain_side":"left"|"right"}
//     {"type":"geodesic","from":[x,y],"to":[x,y]}   (chain edges)
//
// Problem: { "domain": {...} | "entire", "resolution": n,
//            "boundary_data": { "finite": [ {"component":i,"arc":k,"value":v} ],
//                               "asymptotic": { "pieces": [...] } },
//            "discontinuities": [ {"theta":t,"A":a,"B":b} ],
//            "tolerances": {"residual":..., "change":...},
//            "solver": {...} }
//
// Curve:   { "closed": bool, "segments": [
//              {"kind":"arc","theta":[a,b],"height":t},
//              {"kind":"vertical","theta":a,"height":[t0,t1]},
//              {"kind":"graph","points":[[theta,t],...]} ] }

namespace h2r {

std::string domain_to_json(const DomainSpec& d);
DomainSpec domain_from_json(const std::string& text);

struct ProblemSpecJson {
    DomainSpec domain;
    BoundaryData data;
    int resolution = 65;
    SolverTolerances tol;
    SolverOptions opts;
};
ProblemSpecJson problem_from_json(const std::string& text);

AsymptoticCurve curve_from_json(const std::string& text);
std::string curve_to_json(const AsymptoticCurve& c);
std::string verdict_to_json(const Verdict& v);

// CSV: (rho, lambda) rows
std::string profile_to_csv(const ProfileCurve& pc);
// CSV: (x, y, u) rows over non-excluded nodes
std::string solution_to_csv(const GridFunction& u);
// CSV: (x, y, residual, W) rows
std::string residual_report_csv(const std::vector<ResidualReport>& rows);

// OBJ meshes: vertices "v x y height", triangular faces, height on the third
// coordinate.
std::string profile_mesh_obj(const ProfileCurve& pc, int sweep_samples);
std::string solution_mesh_obj(const GridFunction& u);

}  // namespace h2r
