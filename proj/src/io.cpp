#include "h2r/io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace h2r {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json point_json(const DiskPoint& p) { return json::array({p.x, p.y}); }

DiskPoint point_from(const json& j, bool ideal = false) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [x, y]");
    DiskPoint p{j[0].get<double>(), j[1].get<double>(), ideal};
    if (!ideal && std::abs(p.r2() - 1.0) < 1e-12) p.ideal = true;
    return p;
}

}  // namespace

std::string domain_to_json(const DomainSpec& d) {
    json out;
    out["components"] = json::array();
    for (const auto& comp : d.components) {
        json jc;
        jc["kind"] = comp.tag == Component::Tag::jordan
                         ? "jordan"
                         : (comp.tag == Component::Tag::one_end ? "one_end" : "two_ends");
        json arcs = json::array();
        if (const auto* c = std::get_if<CircleComponent>(&comp.shape)) {
            arcs.push_back({{"type", "circle"},
                            {"center", point_json(c->center)},
                            {"radius", c->radius},
                            {"domain", c->domain_outside ? "outside" : "inside"}});
        } else if (const auto* c = std::get_if<CurveComponent>(&comp.shape)) {
            json a;
            a["type"] = std::abs(c->offset) < 1e-15 ? "geodesic_line" : "equidistant";
            a["angles"] = json::array({c->base.theta1, c->base.theta2});
            if (std::abs(c->offset) >= 1e-15) {
                a["distance"] = std::abs(c->offset);
                a["side"] = c->offset >= 0 ? "right" : "left";
            }
            a["domain_side"] = c->domain_side == Side::right ? "right" : "left";
            arcs.push_back(a);
        } else if (const auto* ch = std::get_if<ChainComponent>(&comp.shape)) {
            const size_t edges = ch->closed ? ch->vertices.size() : ch->vertices.size() - 1;
            for (size_t e = 0; e < edges; ++e) {
                const DiskPoint& A = ch->vertices[e];
                const DiskPoint& B = ch->vertices[(e + 1) % ch->vertices.size()];
                arcs.push_back({{"type", "geodesic"},
                                {"from", point_json(A)},
                                {"to", point_json(B)},
                                {"from_ideal", A.ideal},
                                {"to_ideal", B.ideal}});
            }
            jc["closed"] = ch->closed;
            jc["domain_inside"] = ch->domain_inside;
        }
        jc["arcs"] = arcs;
        out["components"].push_back(jc);
    }
    return out.dump(2);
}

DomainSpec domain_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("domain JSON: ") + e.what());
    }
    DomainSpec d;
    if (j.is_string() && j.get<std::string>() == "entire") return d;
    for (const auto& jc : j.at("components")) {
        Component comp;
        const std::string kind = jc.at("kind").get<std::string>();
        comp.tag = kind == "jordan" ? Component::Tag::jordan
                                    : (kind == "one_end" ? Component::Tag::one_end
                                                         : Component::Tag::two_ends);
        const auto& arcs = jc.at("arcs");
        if (arcs.empty()) throw std::invalid_argument("component without arcs");
        const std::string type = arcs[0].at("type").get<std::string>();
        if (type == "circle") {
            CircleComponent c;
            c.center = point_from(arcs[0].at("center"));
            c.radius = arcs[0].at("radius").get<double>();
            c.domain_outside = arcs[0].value("domain", "outside") == "outside";
            comp.shape = c;
        } else if (type == "geodesic_line" || type == "equidistant") {
            CurveComponent c;
            const auto& ang = arcs[0].at("angles");
            c.base = Geodesic(ang[0].get<double>(), ang[1].get<double>());
            if (type == "equidistant") {
                const double dist = arcs[0].at("distance").get<double>();
                c.offset = arcs[0].value("side", "right") == "right" ? dist : -dist;
            }
            c.domain_side =
                arcs[0].value("domain_side", "right") == "right" ? Side::right : Side::left;
            comp.shape = c;
        } else if (type == "geodesic") {
            ChainComponent ch;
            for (size_t e = 0; e < arcs.size(); ++e) {
                const auto& a = arcs[e];
                DiskPoint from = point_from(a.at("from"), a.value("from_ideal", false));
                if (e == 0) ch.vertices.push_back(from);
                ch.vertices.push_back(point_from(a.at("to"), a.value("to_ideal", false)));
            }
            ch.closed = jc.value("closed", true);
            if (ch.closed && ch.vertices.size() >= 2 &&
                std::abs(ch.vertices.front().z() - ch.vertices.back().z()) < 1e-12)
                ch.vertices.pop_back();
            ch.domain_inside = jc.value("domain_inside", true);
            comp.shape = ch;
        } else {
            throw std::invalid_argument("unknown arc type: " + type);
        }
        d.components.push_back(comp);
    }
    return d;
}

ProblemSpecJson problem_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("problem JSON: ") + e.what());
    }
    ProblemSpecJson out;
    if (j.contains("domain") && !(j["domain"].is_string() && j["domain"] == "entire"))
        out.domain = domain_from_json(j["domain"].dump());
    out.resolution = j.value("resolution", 65);
    if (j.contains("boundary_data")) {
        const auto& bd = j["boundary_data"];
        if (bd.contains("finite"))
            for (const auto& e : bd["finite"])
                out.data.finite.entries.push_back({e.value("component", 0),
                                                   e.value("arc", -1),
                                                   e.value("value", 0.0)});
        if (bd.contains("asymptotic")) {
            for (const auto& p : bd["asymptotic"].at("pieces")) {
                AsymptoticData::Piece piece;
                const std::string kind = p.value("kind", "constant");
                if (p.contains("theta")) {
                    piece.theta0 = p["theta"][0].get<double>();
                    piece.theta1 = p["theta"][1].get<double>();
                }
                if (kind == "constant") {
                    piece.kind = AsymptoticData::Piece::Kind::constant;
                    piece.v0 = piece.v1 = p.value("value", 0.0);
                } else if (kind == "linear") {
                    piece.kind = AsymptoticData::Piece::Kind::linear_in_angle;
                    piece.v0 = p.value("from", 0.0);
                    piece.v1 = p.value("to", 0.0);
                } else if (kind == "table") {
                    piece.kind = AsymptoticData::Piece::Kind::table;
                    for (const auto& q : p.at("points"))
                        piece.points.emplace_back(q[0].get<double>(), q[1].get<double>());
                    piece.theta0 = piece.points.front().first;
                    piece.theta1 = piece.points.back().first;
                } else {
                    throw std::invalid_argument("unknown asymptotic piece kind: " + kind);
                }
                out.data.asymptotic.pieces.push_back(piece);
            }
        }
    }
    if (out.data.asymptotic.pieces.empty())
        out.data.asymptotic = AsymptoticData::constant(0.0);
    if (j.contains("discontinuities"))
        for (const auto& s : j["discontinuities"])
            out.data.discontinuities.push_back(
                {s.at("theta").get<double>(), s.value("A", 0.0), s.value("B", 0.0)});
    if (j.contains("tolerances")) {
        out.tol.residual = j["tolerances"].value("residual", out.tol.residual);
        out.tol.change = j["tolerances"].value("change", out.tol.change);
    }
    if (j.contains("solver")) {
        const auto& s = j["solver"];
        out.opts.monotone_sweeps = s.value("monotone_sweeps", out.opts.monotone_sweeps);
        out.opts.newton = s.value("newton", out.opts.newton);
        out.opts.max_newton = s.value("max_newton", out.opts.max_newton);
        out.opts.force_without_barriers =
            s.value("force_without_barriers", out.opts.force_without_barriers);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Curves and verdicts

AsymptoticCurve curve_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("curve JSON: ") + e.what());
    }
    AsymptoticCurve c;
    c.closed = j.value("closed", false);
    for (const auto& s : j.at("segments")) {
        CurveSegment seg;
        const std::string kind = s.at("kind").get<std::string>();
        if (kind == "arc") {
            seg.kind = CurveSegment::Kind::arc;
            seg.theta0 = s.at("theta")[0].get<double>();
            seg.theta1 = s.at("theta")[1].get<double>();
            seg.t0 = seg.t1 = s.at("height").get<double>();
        } else if (kind == "vertical") {
            seg.kind = CurveSegment::Kind::vertical;
            seg.theta0 = seg.theta1 = s.at("theta").get<double>();
            seg.t0 = s.at("height")[0].get<double>();
            seg.t1 = s.at("height")[1].get<double>();
        } else if (kind == "graph") {
            seg.kind = CurveSegment::Kind::graph;
            for (const auto& q : s.at("points"))
                seg.samples.emplace_back(q[0].get<double>(), q[1].get<double>());
            if (seg.samples.size() < 2)
                throw std::invalid_argument("graph segment needs at least 2 points");
            seg.theta0 = seg.samples.front().first;
            seg.theta1 = seg.samples.back().first;
            seg.t0 = seg.samples.front().second;
            seg.t1 = seg.samples.back().second;
        } else {
            throw std::invalid_argument("unknown segment kind: " + kind);
        }
        c.segments.push_back(seg);
    }
    return c;
}

std::string curve_to_json(const AsymptoticCurve& c) {
    json out;
    out["closed"] = c.closed;
    out["segments"] = json::array();
    for (const auto& s : c.segments) {
        json js;
        switch (s.kind) {
            case CurveSegment::Kind::arc:
                js["kind"] = "arc";
                js["theta"] = {s.theta0, s.theta1};
                js["height"] = s.t0;
                break;
            case CurveSegment::Kind::vertical:
                js["kind"] = "vertical";
                js["theta"] = s.theta0;
                js["height"] = {s.t0, s.t1};
                break;
            case CurveSegment::Kind::graph:
                js["kind"] = "graph";
                js["points"] = json::array();
                for (const auto& q : s.samples) js["points"].push_back({q.first, q.second});
                break;
        }
        out["segments"].push_back(js);
    }
    return out.dump(2);
}

std::string verdict_to_json(const Verdict& v) {
    json out;
    out["decision"] = to_string(v.decision);
    out["rule"] = v.rule;
    out["statement"] = v.statement;
    json cert;
    cert["slab"] = {{"t_min", v.t_min}, {"t_max", v.t_max}, {"width", v.width}};
    if (v.degree) cert["degree"] = *v.degree;
    if (v.gap) cert["projection_gap"] = {{"start", v.gap->start}, {"length", v.gap->length}};
    if (v.d_hat) cert["d_hat"] = *v.d_hat;
    if (v.model_height) cert["model_height"] = *v.model_height;
    cert["solver_confirmed"] = v.solver_confirmed;
    out["certificates"] = cert;
    if (!v.detail.empty()) out["detail"] = v.detail;
    return out.dump(2);
}

// ---------------------------------------------------------------------------
// CSV

std::string profile_to_csv(const ProfileCurve& pc) {
    std::ostringstream os;
    os << "rho,lambda\n";
    for (const auto& [r, l] : pc.samples) os << fmt(r) << "," << fmt(l) << "\n";
    return os.str();
}

std::string solution_to_csv(const GridFunction& u) {
    std::ostringstream os;
    os << "x,y,u\n";
    for (int j = 0; j < u.n; ++j)
        for (int i = 0; i < u.n; ++i)
            if (u.klass(i, j) != NodeClass::excluded && std::isfinite(u.at(i, j)))
                os << fmt(u.x_of(i)) << "," << fmt(u.y_of(j)) << "," << fmt(u.at(i, j))
                   << "\n";
    return os.str();
}

std::string residual_report_csv(const std::vector<ResidualReport>& rows) {
    std::ostringstream os;
    os << "x,y,residual,W\n";
    for (const auto& r : rows)
        os << fmt(r.x) << "," << fmt(r.y) << "," << fmt(r.residual) << "," << fmt(r.W)
           << "\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// OBJ

namespace {

// emits one sheet; returns the number of vertices written so sheets can stack
size_t emit_grid_mesh(std::ostringstream& os, const std::vector<std::vector<complexd>>& pos,
                      const std::vector<std::vector<double>>& height, size_t offset) {
    const size_t rows = pos.size(), cols = pos[0].size();
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c)
            os << "v " << fmt(pos[r][c].real()) << " " << fmt(pos[r][c].imag()) << " "
               << fmt(height[r][c]) << "\n";
    auto idx = [cols, offset](size_t r, size_t c) { return offset + r * cols + c + 1; };
    for (size_t r = 0; r + 1 < rows; ++r)
        for (size_t c = 0; c + 1 < cols; ++c) {
            os << "f " << idx(r, c) << " " << idx(r + 1, c) << " " << idx(r + 1, c + 1)
               << "\n";
            os << "f " << idx(r, c) << " " << idx(r + 1, c + 1) << " " << idx(r, c + 1)
               << "\n";
        }
    return rows * cols;
}

}  // namespace

std::string profile_mesh_obj(const ProfileCurve& pc, int sweep_samples) {
    if (sweep_samples < 3) throw std::invalid_argument("mesh: sweep_samples >= 3");
    std::ostringstream os;
    os << "# swept minimal-surface profile\n";
    const size_t nr = pc.samples.size();
    std::vector<std::vector<complexd>> pos(nr, std::vector<complexd>(sweep_samples));
    std::vector<std::vector<double>> hgt(nr, std::vector<double>(sweep_samples));
    size_t offset = 0;
    if (pc.family == ProfileCurve::Family::catenoid) {
        // surface of revolution about the origin; both halves
        for (size_t r = 0; r < nr; ++r) {
            const double R = std::tanh(0.5 * pc.samples[r].first);
            for (int c = 0; c < sweep_samples; ++c) {
                const double phi = 2.0 * kPi * c / (sweep_samples - 1);
                pos[r][c] = {R * std::cos(phi), R * std::sin(phi)};
                hgt[r][c] = pc.samples[r].second;
            }
        }
        offset += emit_grid_mesh(os, pos, hgt, offset);
        for (auto& row : hgt)
            for (auto& v : row) v = -v;
        emit_grid_mesh(os, pos, hgt, offset);
    } else {
        // swept by hyperbolic translations along the vertical diameter
        for (size_t r = 0; r < nr; ++r) {
            const complexd base{std::tanh(0.5 * pc.samples[r].first), 0.0};
            for (int c = 0; c < sweep_samples; ++c) {
                const double tau = -6.0 + 12.0 * c / (sweep_samples - 1);
                const complexd a{0.0, std::tanh(0.5 * tau)};
                pos[r][c] = (base + a) / (1.0 + std::conj(a) * base);
                hgt[r][c] = pc.samples[r].second;
            }
        }
        offset += emit_grid_mesh(os, pos, hgt, offset);
        if (pc.parameter > 1.0) {  // symmetric double over the equidistant line
            for (auto& row : hgt)
                for (auto& v : row) v = -v;
            emit_grid_mesh(os, pos, hgt, offset);
        }
    }
    return os.str();
}

std::string solution_mesh_obj(const GridFunction& u) {
    std::ostringstream os;
    os << "# discrete minimal graph\n";
    std::vector<int> vid(static_cast<size_t>(u.n) * u.n, 0);
    int next = 1;
    for (int j = 0; j < u.n; ++j)
        for (int i = 0; i < u.n; ++i)
            if (u.klass(i, j) != NodeClass::excluded && std::isfinite(u.at(i, j))) {
                vid[u.id(i, j)] = next++;
                os << "v " << fmt(u.x_of(i)) << " " << fmt(u.y_of(j)) << " "
                   << fmt(u.at(i, j)) << "\n";
            }
    for (int j = 0; j + 1 < u.n; ++j)
        for (int i = 0; i + 1 < u.n; ++i) {
            const int a = vid[u.id(i, j)], b = vid[u.id(i + 1, j)];
            const int c = vid[u.id(i + 1, j + 1)], d = vid[u.id(i, j + 1)];
            if (a && b && c) os << "f " << a << " " << b << " " << c << "\n";
            if (a && c && d) os << "f " << a << " " << c << " " << d << "\n";
        }
    return os.str();
}

}  // namespace h2r
