#include "h2r/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "h2r/families.hpp"
#include "h2r/solver.hpp"

namespace h2r {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kChainTol = 1e-9;

double wrap_2pi(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a < 0) a += 2.0 * kPi;
    return a;
}

std::pair<double, double> seg_start(const CurveSegment& s) {
    if (s.kind == CurveSegment::Kind::graph && !s.samples.empty())
        return {s.theta0, s.samples.front().second};
    return {s.theta0, s.t0};
}

std::pair<double, double> seg_end(const CurveSegment& s) {
    if (s.kind == CurveSegment::Kind::graph && !s.samples.empty())
        return {s.theta1, s.samples.back().second};
    return {s.theta1, s.kind == CurveSegment::Kind::arc ? s.t0 : s.t1};
}

}  // namespace

void AsymptoticCurve::validate() const {
    if (segments.empty()) throw std::invalid_argument("curve: no segments");
    for (const auto& s : segments) {
        const double h0 = s.t0, h1 = s.t1;
        if (!std::isfinite(h0) || !std::isfinite(h1))
            throw std::invalid_argument("curve: heights must be finite");
        if (s.kind == CurveSegment::Kind::arc && s.t0 != s.t1)
            throw std::invalid_argument("curve: arc segments are horizontal");
        if (s.kind == CurveSegment::Kind::vertical && s.theta0 != s.theta1)
            throw std::invalid_argument("curve: vertical segments sit at one angle");
        if (s.kind == CurveSegment::Kind::graph) {
            if (s.samples.size() < 2)
                throw std::invalid_argument("curve: graph segment needs samples");
            for (const auto& q : s.samples)
                if (!std::isfinite(q.second))
                    throw std::invalid_argument("curve: graph heights must be finite");
        }
    }
    const size_t n = segments.size();
    const size_t links = closed ? n : n - 1;
    for (size_t k = 0; k < links; ++k) {
        const auto e = seg_end(segments[k]);
        const auto s = seg_start(segments[(k + 1) % n]);
        const double dth = std::abs(wrap_2pi(e.first) - wrap_2pi(s.first));
        const double gap = std::min(dth, 2.0 * kPi - dth);
        if (gap > kChainTol || std::abs(e.second - s.second) > kChainTol)
            throw std::invalid_argument("curve: segments do not chain continuously");
    }
}

std::pair<double, double> slab_extent(const AsymptoticCurve& c) {
    if (c.segments.empty()) throw std::invalid_argument("slab_extent: empty curve");
    double lo = 1e300, hi = -1e300;
    for (const auto& s : c.segments) {
        if (s.kind == CurveSegment::Kind::graph) {
            for (const auto& q : s.samples) {
                lo = std::min(lo, q.second);
                hi = std::max(hi, q.second);
            }
        } else {
            lo = std::min(lo, std::min(s.t0, s.t1));
            hi = std::max(hi, std::max(s.t0, s.t1));
        }
    }
    return {lo, hi};
}

int homology_degree(const AsymptoticCurve& c) {
    if (!c.closed) throw std::domain_error("homology_degree: curve must be closed");
    c.validate();
    double total = 0.0;
    for (const auto& s : c.segments) total += s.theta1 - s.theta0;
    const double w = total / (2.0 * kPi);
    const int deg = static_cast<int>(std::lround(w));
    if (std::abs(w - deg) > 1e-6)
        throw std::domain_error("homology_degree: angular sweeps do not close up");
    return deg;
}

std::optional<AngularArc> projection_gap(const AsymptoticCurve& c) {
    // union of swept angular intervals on [0, 2pi); verticals cover points
    std::vector<std::pair<double, double>> ivs;  // [start, end], end <= 2pi
    for (const auto& s : c.segments) {
        const double lo = std::min(s.theta0, s.theta1), hi = std::max(s.theta0, s.theta1);
        if (hi - lo >= 2.0 * kPi - 1e-12) return std::nullopt;  // full cover
        const double start = wrap_2pi(lo);
        const double end = start + (hi - lo);
        if (end > 2.0 * kPi) {  // wraps: split
            ivs.emplace_back(start, 2.0 * kPi);
            ivs.emplace_back(0.0, end - 2.0 * kPi);
        } else {
            ivs.emplace_back(start, end);
        }
    }
    if (ivs.empty()) return std::nullopt;
    std::sort(ivs.begin(), ivs.end());
    // merge
    std::vector<std::pair<double, double>> merged;
    for (const auto& iv : ivs) {
        if (!merged.empty() && iv.first <= merged.back().second + 1e-12)
            merged.back().second = std::max(merged.back().second, iv.second);
        else
            merged.push_back(iv);
    }
    // complement gaps, cyclically
    double best_gap = 0.0, best_start = 0.0;
    for (size_t k = 0; k + 1 < merged.size(); ++k) {
        const double gap = merged[k + 1].first - merged[k].second;
        if (gap > best_gap) {
            best_gap = gap;
            best_start = merged[k].second;
        }
    }
    const double wrap_gap = (merged.front().first + 2.0 * kPi) - merged.back().second;
    if (wrap_gap > best_gap) {
        best_gap = wrap_gap;
        best_start = merged.back().second;
    }
    if (best_gap <= 1e-9) return std::nullopt;
    return AngularArc{wrap_2pi(best_start), best_gap};
}

// ---------------------------------------------------------------------------
// Model curves

AsymptoticCurve AsymptoticCurve::model_homologous_zero(double theta1, double theta2,
                                                       double height) {
    // two copies of the arc theta1 -> theta2 at heights +-height, joined by
    // verticals at the arc endpoints: null-homologous boundary of the d > 1
    // translation-invariant surface (height = H(d))
    AsymptoticCurve c;
    c.closed = true;
    CurveSegment top;
    top.kind = CurveSegment::Kind::arc;
    top.theta0 = theta1;
    top.theta1 = theta2;
    top.t0 = top.t1 = height;
    CurveSegment down;
    down.kind = CurveSegment::Kind::vertical;
    down.theta0 = down.theta1 = theta2;
    down.t0 = height;
    down.t1 = -height;
    CurveSegment bottom;
    bottom.kind = CurveSegment::Kind::arc;
    bottom.theta0 = theta2;
    bottom.theta1 = theta1;
    bottom.t0 = bottom.t1 = -height;
    CurveSegment up;
    up.kind = CurveSegment::Kind::vertical;
    up.theta0 = up.theta1 = theta1;
    up.t0 = -height;
    up.t1 = height;
    c.segments = {top, down, bottom, up};
    return c;
}

AsymptoticCurve AsymptoticCurve::model_entire(double theta1, double theta2, double height) {
    // arc theta1 -> theta2 at +height, complementary arc at -height, joined by
    // verticals: degree +-1 boundary of the entire branch (height = G(d))
    AsymptoticCurve c;
    c.closed = true;
    CurveSegment top;
    top.kind = CurveSegment::Kind::arc;
    top.theta0 = theta1;
    top.theta1 = theta2;
    top.t0 = top.t1 = height;
    CurveSegment down;
    down.kind = CurveSegment::Kind::vertical;
    down.theta0 = down.theta1 = theta2;
    down.t0 = height;
    down.t1 = -height;
    CurveSegment bottom;
    bottom.kind = CurveSegment::Kind::arc;
    bottom.theta0 = theta2;
    bottom.theta1 = theta1 + 2.0 * kPi;  // continue counterclockwise
    bottom.t0 = bottom.t1 = -height;
    CurveSegment up;
    up.kind = CurveSegment::Kind::vertical;
    up.theta0 = up.theta1 = theta1 + 2.0 * kPi;
    up.t0 = -height;
    up.t1 = height;
    c.segments = {top, down, bottom, up};
    return c;
}

AsymptoticCurve AsymptoticCurve::horizontal_circle(double height) {
    AsymptoticCurve c;
    c.closed = true;
    CurveSegment s;
    s.kind = CurveSegment::Kind::arc;
    s.theta0 = 0.0;
    s.theta1 = 2.0 * kPi;
    s.t0 = s.t1 = height;
    c.segments = {s};
    return c;
}

AsymptoticCurve AsymptoticCurve::graph_over_circle(
    const std::vector<std::pair<double, double>>& samples) {
    AsymptoticCurve c;
    c.closed = true;
    CurveSegment s;
    s.kind = CurveSegment::Kind::graph;
    s.samples = samples;
    s.theta0 = samples.front().first;
    s.theta1 = samples.back().first;
    s.t0 = samples.front().second;
    s.t1 = samples.back().second;
    c.segments = {s};
    return c;
}

// ---------------------------------------------------------------------------
// Pattern matching for the translation-invariant model curves

namespace {

struct ModelMatch {
    bool homologous_zero = false;  // d > 1 pattern vs entire pattern
    double height = 0.0;
};

std::optional<ModelMatch> match_model(const AsymptoticCurve& c) {
    if (!c.closed || c.segments.size() != 4) return std::nullopt;
    // rotate so an arc comes first
    for (int start = 0; start < 4; ++start) {
        const auto& s0 = c.segments[start % 4];
        const auto& s1 = c.segments[(start + 1) % 4];
        const auto& s2 = c.segments[(start + 2) % 4];
        const auto& s3 = c.segments[(start + 3) % 4];
        using K = CurveSegment::Kind;
        if (s0.kind != K::arc || s2.kind != K::arc) continue;
        if (s1.kind != K::vertical || s3.kind != K::vertical) continue;
        const double T = s0.t0;
        if (!(T > 0) || std::abs(s2.t0 + T) > kChainTol) continue;  // heights +-T
        const double sweep0 = s0.theta1 - s0.theta0;
        const double sweep2 = s2.theta1 - s2.theta0;
        if (std::abs(std::abs(s1.t1 - s1.t0) - 2.0 * T) > kChainTol) continue;
        if (std::abs(std::abs(s3.t1 - s3.t0) - 2.0 * T) > kChainTol) continue;
        if (std::abs(sweep0 + sweep2) < kChainTol && std::abs(sweep0) < 2.0 * kPi) {
            return ModelMatch{true, T};  // same arc forth and back
        }
        if (std::abs(sweep0 + sweep2 - 2.0 * kPi) < kChainTol && sweep0 > 0 && sweep2 > 0)
            return ModelMatch{false, T};  // complementary arcs, degree 1
        if (std::abs(sweep0 + sweep2 + 2.0 * kPi) < kChainTol && sweep0 < 0 && sweep2 < 0)
            return ModelMatch{false, T};  // degree -1 orientation
    }
    return std::nullopt;
}

bool is_bounded_graph_over_circle(const AsymptoticCurve& c,
                                  std::vector<std::pair<double, double>>& samples,
                                  std::vector<Discontinuity>& jumps) {
    if (!c.closed) return false;
    double sweep = 0.0;
    for (const auto& s : c.segments) {
        if (s.kind == CurveSegment::Kind::vertical) continue;
        const double d = s.theta1 - s.theta0;
        if (d == 0.0) return false;
        if (sweep != 0.0 && ((sweep > 0) != (d > 0))) return false;  // monotone cover
        sweep += d;
    }
    if (std::abs(std::abs(sweep) - 2.0 * kPi) > kChainTol) return false;
    samples.clear();
    jumps.clear();
    for (const auto& s : c.segments) {
        if (s.kind == CurveSegment::Kind::vertical) {
            jumps.push_back({wrap_2pi(s.theta0), std::min(s.t0, s.t1), std::max(s.t0, s.t1)});
        } else if (s.kind == CurveSegment::Kind::arc) {
            samples.emplace_back(s.theta0, s.t0);
            samples.emplace_back(s.theta1, s.t0);
        } else {
            for (const auto& q : s.samples) samples.push_back(q);
        }
    }
    return true;
}

}  // namespace

std::string to_string(Verdict::Decision d) {
    switch (d) {
        case Verdict::Decision::NonexistentProper: return "NonexistentProper";
        case Verdict::Decision::NonexistentWithBoundaryContinuity:
            return "NonexistentWithBoundaryContinuity";
        case Verdict::Decision::ExistsConstructive: return "ExistsConstructive";
        case Verdict::Decision::ExistsBySolver: return "ExistsBySolver";
        case Verdict::Decision::Undetermined: return "Undetermined";
    }
    return "?";
}

Verdict classify(const AsymptoticCurve& c, const ClassifyOptions& opts) {
    c.validate();
    Verdict v;
    const auto [lo, hi] = slab_extent(c);
    v.t_min = lo;
    v.t_max = hi;
    v.width = hi - lo;
    v.gap = projection_gap(c);
    if (c.closed) v.degree = homology_degree(c);

    const bool width_below_pi = v.width < kPi - opts.width_tol;
    const bool width_at_pi = std::abs(v.width - kPi) <= opts.width_tol;

    // 1. closed null-homologous curve strictly inside a width-pi slab
    if (c.closed && v.degree && *v.degree == 0 && width_below_pi) {
        v.decision = Verdict::Decision::NonexistentProper;
        v.rule = "slab_nonexistence";
        v.statement =
            "closed null-homologous curve strictly inside a slab of width pi: no properly "
            "immersed minimal surface spans it";
        return v;
    }
    // 2. width exactly pi (and in no thinner slab)
    if (c.closed && v.degree && *v.degree == 0 && width_at_pi) {
        v.decision = Verdict::Decision::NonexistentWithBoundaryContinuity;
        v.rule = "slab_boundary_case";
        v.statement =
            "closed null-homologous curve of exact slab width pi: no properly immersed "
            "minimal surface that is continuous up to its asymptotic boundary";
        return v;
    }
    // 3. narrow slab + omitted projection arc
    if (width_below_pi && v.gap) {
        v.decision = Verdict::Decision::NonexistentProper;
        v.rule = "projection_gap";
        v.statement =
            "curve strictly inside a width-pi slab whose vertical projection omits an open "
            "arc: no complete properly immersed minimal surface";
        return v;
    }
    // 4. translation-invariant model curves
    if (const auto m = match_model(c)) {
        try {
            const double d_hat =
                m->homologous_zero ? invert_height_H(m->height) : invert_height_G(m->height);
            v.decision = Verdict::Decision::ExistsConstructive;
            v.rule = m->homologous_zero ? "translation_family_exterior"
                                        : "translation_family_entire";
            v.statement =
                "matches the asymptotic boundary of a hyperbolic-translation-invariant "
                "minimal surface; parameter recovered by height inversion";
            v.d_hat = d_hat;
            v.model_height = m->height;
            return v;
        } catch (const std::exception& e) {
            v.detail = std::string("model height not invertible: ") + e.what();
        }
    }
    // 5. bounded graph over the whole circle (with jump verticals)
    {
        std::vector<std::pair<double, double>> samples;
        std::vector<Discontinuity> jumps;
        if (is_bounded_graph_over_circle(c, samples, jumps)) {
            v.rule = "entire_graph_dirichlet";
            v.statement =
                "bounded data over the whole ideal circle: the asymptotic Dirichlet problem "
                "on the full plane is solvable";
            if (!opts.invoke_solver) {
                v.decision = Verdict::Decision::ExistsBySolver;
                return v;
            }
            try {
                std::sort(samples.begin(), samples.end(),
                          [](const auto& a, const auto& b) {
                              return wrap_2pi(a.first) < wrap_2pi(b.first);
                          });
                for (auto& q : samples) q.first = wrap_2pi(q.first);
                samples.erase(std::unique(samples.begin(), samples.end(),
                                          [](const auto& a, const auto& b) {
                                              return std::abs(a.first - b.first) < 1e-12;
                                          }),
                              samples.end());
                // close the table around the circle
                samples.push_back({samples.front().first + 2.0 * kPi, samples.front().second});
                AsymptoticData data;
                AsymptoticData::Piece piece;
                piece.kind = AsymptoticData::Piece::Kind::table;
                piece.theta0 = samples.front().first;
                piece.theta1 = piece.theta0 + 2.0 * kPi;
                piece.points = samples;
                data.pieces = {piece};
                BoundaryData bd;
                bd.asymptotic = data;
                bd.discontinuities = jumps;
                DomainSpec entire;
                Problem prob = build_problem(entire, bd, opts.solver_resolution);
                Solution sol = solve(prob);
                VerifyOptions vo;
                vo.residual_tol = 1e-5;
                const VerificationReport vr = verify_solution(sol.u, prob, vo);
                v.solver_confirmed = sol.report.converged && !sol.report.diverged &&
                                     vr.find("bracket")->pass && vr.find("residual")->pass;
                v.decision = v.solver_confirmed ? Verdict::Decision::ExistsBySolver
                                                : Verdict::Decision::Undetermined;
                v.detail = v.solver_confirmed
                               ? "solver confirmed at resolution " +
                                     std::to_string(opts.solver_resolution)
                               : "solver failed to confirm";
            } catch (const std::exception& e) {
                v.decision = Verdict::Decision::Undetermined;
                v.detail = std::string("solver error: ") + e.what();
            }
            return v;
        }
    }

    v.decision = Verdict::Decision::Undetermined;
    v.rule = "no_rule_applies";
    v.statement = "outside the hypotheses of the implemented criteria";
    return v;
}

}  // namespace h2r
