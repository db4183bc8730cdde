#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "h2r/classifier.hpp"
#include "h2r/families.hpp"
#include "h2r/io.hpp"
#include "h2r/operator.hpp"
#include "h2r/solver.hpp"

// Command-line front end: heights, profiles, residual checks, the Dirichlet
// solver, the existence classifier and CSV/OBJ exports.
//
// Exit codes: 0 success, 1 usage or malformed input, 2 verification failure,
// 3 classifier error.

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

int cmd_height(const std::string& family, double d, double rho, bool has_sweep,
               double s0, double s1, int sn, bool pretty) {
    auto eval = [&](double x) -> h2r::QuadResult {
        if (family == "H") return h2r::height_H(x);
        if (family == "G") return h2r::height_G(x);
        if (family == "f") return h2r::catenoid_height(x);
        throw std::invalid_argument("unknown family " + family + " (H, G or f)");
    };
    const bool uses_rho = family == "f";
    if (has_sweep) {
        if (pretty) std::printf("%12s %22s %12s\n", uses_rho ? "rho" : "d", "value", "bound");
        for (int k = 0; k < sn; ++k) {
            const double x = s0 + (s1 - s0) * (sn == 1 ? 0 : double(k) / (sn - 1));
            const h2r::QuadResult q = eval(x);
            if (pretty) std::printf("%12.6f %22.15f %12.3e\n", x, q.value, q.error_bound);
            else std::printf("%s %s %s\n", fmt(x).c_str(), fmt(q.value).c_str(),
                             fmt(q.error_bound).c_str());
        }
        return 0;
    }
    const double x = uses_rho ? rho : d;
    const h2r::QuadResult q = eval(x);
    if (pretty)
        std::printf("%s(%g) = %.15f  (error bound %.3e)\n", family.c_str(), x, q.value,
                    q.error_bound);
    else
        std::printf("%s %s\n", fmt(q.value).c_str(), fmt(q.error_bound).c_str());
    return 0;
}

int cmd_profile(double d, double rho_max, int samples, const std::string& out,
                bool catenoid, double neck) {
    h2r::ProfileCurve pc =
        catenoid ? h2r::sample_profile(h2r::ProfileCurve::Family::catenoid, neck, rho_max,
                                       samples)
                 : h2r::sample_profile(h2r::ProfileCurve::Family::hyperbolic, d, rho_max,
                                       samples);
    const std::string csv = h2r::profile_to_csv(pc);
    if (out.empty()) std::fputs(csv.c_str(), stdout);
    else write_file(out, csv);
    std::fprintf(stderr, "asymptotic height %s\n", fmt(pc.asymptotic_height).c_str());
    return 0;
}

int cmd_residual(const std::string& family, double ell, int samples, unsigned seed,
                 const std::string& out) {
    h2r::EntireFamily kind;
    if (family == "linear") kind = h2r::EntireFamily::linear;
    else if (family == "log") kind = h2r::EntireFamily::logarithmic;
    else if (family == "scherk") kind = h2r::EntireFamily::scherk_wedge;
    else throw std::invalid_argument("unknown family " + family + " (linear, log, scherk)");

    const h2r::ScalarField f = h2r::ScalarField::from_entire_family(kind, ell);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(-4.0, 4.0), upos(0.1, 4.0);
    std::vector<h2r::ResidualReport> rows;
    double worst = 0.0, worst_norm = 0.0;
    for (int k = 0; k < samples; ++k) {
        h2r::HalfPlanePoint p;
        if (kind == h2r::EntireFamily::scherk_wedge) p = {upos(rng), upos(rng), false};
        else p = {ux(rng), upos(rng), false};
        const h2r::ResidualReport r = h2r::residual_halfplane(f, p);
        rows.push_back(r);
        worst = std::max(worst, std::abs(r.residual));
        worst_norm = std::max(worst_norm, std::abs(r.normalized));
    }
    std::printf("max residual %s  max normalized %s over %d points\n", fmt(worst).c_str(),
                fmt(worst_norm).c_str(), samples);
    if (!out.empty()) write_file(out, h2r::residual_report_csv(rows));
    return 0;
}

int cmd_solve(const std::string& problem_path, const std::string& out_csv,
              const std::string& out_obj, bool pretty) {
    const h2r::ProblemSpecJson ps = h2r::problem_from_json(read_file(problem_path));
    h2r::Problem prob =
        h2r::build_problem(ps.domain, ps.data, ps.resolution, ps.opts, ps.tol);
    const h2r::Solution sol = h2r::solve(prob);
    const h2r::VerificationReport vr = h2r::verify_solution(sol.u, prob);
    if (pretty) {
        std::printf("converged %d  diverged %d  sweeps %d  newton %d\n",
                    sol.report.converged, sol.report.diverged, sol.report.monotone_sweeps,
                    sol.report.newton_iterations);
        std::printf("residual %.3e  u in [%.6f, %.6f]  data in [%.6f, %.6f]\n",
                    sol.report.residual_norm, sol.report.u_min, sol.report.u_max,
                    sol.report.g_min, sol.report.g_max);
        for (const auto& c : vr.checks)
            std::printf("%-20s %s  measured %.4e  bound %.4e %s\n", c.name.c_str(),
                        c.pass ? "pass" : "FAIL", c.measured, c.bound, c.detail.c_str());
    } else {
        std::printf("converged %d diverged %d residual %s\n", sol.report.converged,
                    sol.report.diverged, fmt(sol.report.residual_norm).c_str());
        for (const auto& c : vr.checks)
            std::printf("check %s %s %s %s\n", c.name.c_str(), c.pass ? "pass" : "fail",
                        fmt(c.measured).c_str(), fmt(c.bound).c_str());
    }
    if (!sol.report.message.empty()) std::printf("note: %s\n", sol.report.message.c_str());
    if (!out_csv.empty()) write_file(out_csv, h2r::solution_to_csv(sol.u));
    if (!out_obj.empty()) write_file(out_obj, h2r::solution_mesh_obj(sol.u));
    return (sol.report.converged && vr.pass) ? 0 : 2;
}

int cmd_scherk(double n_cap, const std::string& schedule, int resolution,
               const std::string& out) {
    h2r::ScherkTriangle tri;
    tri.apex = h2r::DiskPoint::interior(-0.45, 0.0);
    tri.base1 = h2r::DiskPoint::interior(0.35, 0.42);
    tri.base2 = h2r::DiskPoint::interior(0.35, -0.42);
    std::vector<double> caps;
    if (!schedule.empty()) {
        std::stringstream ss(schedule);
        std::string tok;
        while (std::getline(ss, tok, ',')) caps.push_back(std::stod(tok));
    } else {
        caps.push_back(n_cap);
    }
    const auto sols = h2r::solve_scherk_triangle(tri, caps, resolution);
    for (size_t k = 0; k < sols.size(); ++k)
        std::printf("cap %s: converged %d residual %s max %s\n", fmt(caps[k]).c_str(),
                    sols[k].report.converged, fmt(sols[k].report.residual_norm).c_str(),
                    fmt(sols[k].report.u_max).c_str());
    if (!out.empty()) write_file(out, h2r::solution_to_csv(sols.back().u));
    for (const auto& s : sols)
        if (!s.report.converged) return 2;
    return 0;
}

int cmd_classify(const std::string& curve_path, int resolution) {
    const h2r::AsymptoticCurve c = h2r::curve_from_json(read_file(curve_path));
    h2r::ClassifyOptions opts;
    opts.solver_resolution = resolution;
    const h2r::Verdict v = h2r::classify(c, opts);
    std::printf("%s\n", h2r::verdict_to_json(v).c_str());
    return 0;
}

int cmd_mesh(const std::string& family, double rho, double d, double ell, double rho_max,
             int resolution, const std::string& out) {
    std::string obj;
    if (family == "catenoid") {
        const h2r::ProfileCurve pc =
            h2r::sample_profile(h2r::ProfileCurve::Family::catenoid, rho,
                                rho + std::max(rho_max, 1.0), resolution);
        obj = h2r::profile_mesh_obj(pc, resolution);
    } else if (family == "hyperbolic") {
        const h2r::ProfileCurve pc =
            h2r::sample_profile(h2r::ProfileCurve::Family::hyperbolic, d, rho_max, resolution);
        obj = h2r::profile_mesh_obj(pc, resolution);
    } else if (family == "linear" || family == "log" || family == "scherk") {
        // graph mesh over the disk via the closed form
        h2r::EntireFamily kind = family == "linear" ? h2r::EntireFamily::linear
                                 : family == "log" ? h2r::EntireFamily::logarithmic
                                                   : h2r::EntireFamily::scherk_wedge;
        const h2r::ScalarField f = h2r::ScalarField::from_entire_family(kind, ell);
        h2r::GridFunction g(resolution);
        for (int j = 0; j < resolution; ++j)
            for (int i = 0; i < resolution; ++i) {
                const double x = g.x_of(i), y = g.y_of(j);
                if (x * x + y * y > 0.96 * 0.96) continue;
                if (kind == h2r::EntireFamily::scherk_wedge && x < 0.04) continue;
                try {
                    g.at(i, j) = f.eval(h2r::ScalarField::Model::disk, x, y).u;
                    g.cls[g.id(i, j)] = h2r::NodeClass::interior;
                } catch (const std::exception&) {
                }
            }
        obj = h2r::solution_mesh_obj(g);
    } else {
        throw std::invalid_argument("unknown mesh family " + family);
    }
    write_file(out, obj);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"minimal vertical graphs over the hyperbolic plane"};
    app.require_subcommand(1);

    // height
    auto* height = app.add_subcommand("height", "evaluate an asymptotic height function");
    std::string hfam = "H";
    double hd = 2.0, hrho = 1.0;
    std::string sweep;
    bool pretty = false;
    height->add_option("--family", hfam, "H, G or f");
    height->add_option("--d", hd, "parameter d (H, G)");
    height->add_option("--rho", hrho, "radius rho (f)");
    height->add_option("--sweep", sweep, "a:b:n parameter sweep");
    height->add_flag("--pretty", pretty, "human-readable table");

    // profile
    auto* profile = app.add_subcommand("profile", "sample a generating profile curve");
    double pd = 0.5, prho_max = 5.0, pneck = 1.0;
    int psamples = 200;
    bool pcat = false;
    std::string pout;
    profile->add_option("--d", pd, "translation-family parameter");
    profile->add_flag("--catenoid", pcat, "catenoid profile instead");
    profile->add_option("--neck", pneck, "catenoid neck radius");
    profile->add_option("--rho-max", prho_max, "profile extent");
    profile->add_option("--samples", psamples, "sample count");
    profile->add_option("--out", pout, "CSV output path (stdout otherwise)");

    // residual
    auto* residual = app.add_subcommand("residual", "check a closed-form family");
    std::string rfam = "linear";
    double rell = 1.0;
    int rsamples = 1000;
    unsigned rseed = 12345;
    std::string rout;
    residual->add_option("--family", rfam, "linear, log or scherk");
    residual->add_option("--ell", rell, "family parameter");
    residual->add_option("--samples", rsamples, "sample count");
    residual->add_option("--seed", rseed, "sampling seed");
    residual->add_option("--out", rout, "CSV of per-point reports");

    // solve
    auto* solvec = app.add_subcommand("solve", "run the Dirichlet solver on a problem file");
    std::string problem_path, sol_csv, sol_obj;
    solvec->add_option("problem", problem_path, "problem JSON")->required();
    solvec->add_option("--out", sol_csv, "solution CSV path");
    solvec->add_option("--obj", sol_obj, "solution OBJ path");
    solvec->add_flag("--pretty", pretty, "human-readable report");

    // scherk
    auto* scherk = app.add_subcommand("scherk", "capped graphs over a geodesic triangle");
    double scap = 5.0;
    std::string sschedule, ssout;
    int sres = 97;
    scherk->add_option("--n", scap, "cap value");
    scherk->add_option("--schedule", sschedule, "comma-separated cap schedule");
    scherk->add_option("--resolution", sres, "grid resolution");
    scherk->add_option("--out", ssout, "CSV of the last solution");

    // classify
    auto* classifyc = app.add_subcommand("classify", "decide a prescribed asymptotic curve");
    std::string curve_path;
    int cres = 65;
    classifyc->add_option("curve", curve_path, "curve JSON")->required();
    classifyc->add_option("--resolution", cres, "solver confirmation resolution");

    // mesh
    auto* mesh = app.add_subcommand("mesh", "export a surface mesh (OBJ)");
    std::string mfam = "catenoid", mout = "mesh.obj";
    double mrho = 1.0, md = 2.0, mell = 1.0, mrho_max = 4.0;
    int mres = 64;
    mesh->add_option("--family", mfam, "catenoid, hyperbolic, linear, log, scherk");
    mesh->add_option("--rho", mrho, "catenoid neck radius");
    mesh->add_option("--d", md, "translation-family parameter");
    mesh->add_option("--ell", mell, "entire-family parameter");
    mesh->add_option("--rho-max", mrho_max, "profile extent");
    mesh->add_option("--resolution", mres, "sweep resolution");
    mesh->add_option("--out", mout, "OBJ output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (height->parsed()) {
            bool has_sweep = !sweep.empty();
            double s0 = 0, s1 = 0;
            int sn = 0;
            if (has_sweep) {
                if (std::sscanf(sweep.c_str(), "%lf:%lf:%d", &s0, &s1, &sn) != 3 || sn < 1) {
                    std::fprintf(stderr, "bad --sweep (want a:b:n)\n");
                    return 1;
                }
            }
            return cmd_height(hfam, hd, hrho, has_sweep, s0, s1, sn, pretty);
        }
        if (profile->parsed()) return cmd_profile(pd, prho_max, psamples, pout, pcat, pneck);
        if (residual->parsed()) return cmd_residual(rfam, rell, rsamples, rseed, rout);
        if (solvec->parsed()) return cmd_solve(problem_path, sol_csv, sol_obj, pretty);
        if (scherk->parsed()) return cmd_scherk(scap, sschedule, sres, ssout);
        if (classifyc->parsed()) {
            try {
                return cmd_classify(curve_path, cres);
            } catch (const std::invalid_argument& e) {
                std::fprintf(stderr, "classifier error: %s\n", e.what());
                return 3;
            } catch (const std::domain_error& e) {
                std::fprintf(stderr, "classifier error: %s\n", e.what());
                return 3;
            }
        }
        if (mesh->parsed()) return cmd_mesh(mfam, mrho, md, mell, mrho_max, mres, mout);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
