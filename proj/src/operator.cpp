#include "h2r/operator.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace h2r {

namespace {

const complexd kI{0.0, 1.0};

bool finite(const Jet2& j) {
    return std::isfinite(j.u) && std::isfinite(j.ux) && std::isfinite(j.uy) &&
           std::isfinite(j.uxx) && std::isfinite(j.uxy) && std::isfinite(j.uyy);
}

}  // namespace

double disk_operator(const Jet2& j, double x, double y) {
    const double one_m = 1.0 - x * x - y * y;
    const double F = 0.25 * one_m * one_m;
    const double g2 = j.ux * j.ux + j.uy * j.uy;
    return (1.0 + F * j.ux * j.ux) * j.uyy + (1.0 + F * j.uy * j.uy) * j.uxx -
           2.0 * F * j.ux * j.uy * j.uxy +
           0.5 * one_m * (x * j.ux + y * j.uy) * g2;
}

double disk_W(const Jet2& j, double x, double y) {
    const double one_m = 1.0 - x * x - y * y;
    const double F = 0.25 * one_m * one_m;
    return 1.0 + F * (j.ux * j.ux + j.uy * j.uy);
}

double halfplane_operator(const Jet2& j, double /*x*/, double y) {
    const double y2 = y * y;
    return (1.0 + y2 * j.ux * j.ux) * j.uyy + (1.0 + y2 * j.uy * j.uy) * j.uxx -
           2.0 * y2 * j.ux * j.uy * j.uxy - y * j.uy * (j.ux * j.ux + j.uy * j.uy);
}

// ---------------------------------------------------------------------------
// ScalarField

Jet2 ScalarField::eval(Model m, double x, double y) const {
    if (m == native) return jet(x, y);
    if (m == Model::disk) {
        // evaluate (u ∘ cayley) at the disk point: w = (1 - i z)/(z - i)
        const complexd z{x, y};
        const complexd den = z - kI;
        const complexd w = (1.0 - kI * z) / den;
        const Jet2 J = jet(w.real(), w.imag());
        const complexd dphi = -2.0 / (den * den);
        const complexd d2phi = 4.0 / (den * den * den);
        return pullback_holomorphic(J, dphi, d2phi);
    }
    // halfplane request for a disk-native field: z = (i w + 1)/(w + i)
    const complexd w{x, y};
    const complexd den = w + kI;
    const complexd z = (kI * w + 1.0) / den;
    const Jet2 J = jet(z.real(), z.imag());
    const complexd dphi = -2.0 / (den * den);
    const complexd d2phi = 4.0 / (den * den * den);
    return pullback_holomorphic(J, dphi, d2phi);
}

ScalarField ScalarField::constant(double c) {
    ScalarField f;
    f.native = Model::disk;
    f.jet = [c](double, double) { return Jet2{c, 0, 0, 0, 0, 0}; };
    return f;
}

ScalarField ScalarField::from_entire_family(EntireFamily kind, double ell) {
    ScalarField f;
    f.native = Model::halfplane;
    f.jet = [kind, ell](double x, double y) { return entire_family_jet(kind, ell, x, y); };
    return f;
}

ScalarField ScalarField::scherk_wedge_disk() {
    ScalarField hp = from_entire_family(EntireFamily::scherk_wedge, 1.0);
    ScalarField f;
    f.native = Model::disk;
    f.jet = [hp](double x, double y) { return hp.eval(Model::disk, x, y); };
    return f;
}

ScalarField ScalarField::composed_with(const Isometry& iso) const {
    ScalarField base = *this;
    ScalarField f;
    f.native = Model::disk;
    f.provenance = provenance;
    Isometry m = iso;
    f.jet = [base, m](double x, double y) -> Jet2 {
        complexd z{x, y};
        if (m.reflecting) {
            // u(m(conj z)): conjugate first, then the holomorphic part
            const complexd zb = std::conj(z);
            const complexd den = m.c * zb + m.d;
            const complexd w = (m.a * zb + m.b) / den;
            const complexd det = m.a * m.d - m.b * m.c;
            const Jet2 J = base.eval(Model::disk, w.real(), w.imag());
            const Jet2 hol = pullback_holomorphic(J, det / (den * den),
                                                  -2.0 * m.c * det / (den * den * den));
            return pullback_conjugation(hol);
        }
        const complexd den = m.c * z + m.d;
        const complexd w = (m.a * z + m.b) / den;
        const complexd det = m.a * m.d - m.b * m.c;
        const Jet2 J = base.eval(Model::disk, w.real(), w.imag());
        return pullback_holomorphic(J, det / (den * den),
                                    -2.0 * m.c * det / (den * den * den));
    };
    return f;
}

ScalarField ScalarField::plus_constant(double c) const {
    ScalarField base = *this;
    ScalarField f;
    f.native = native;
    f.provenance = provenance;
    f.jet = [base, c](double x, double y) {
        Jet2 j = base.jet(x, y);
        j.u += c;
        return j;
    };
    return f;
}

ScalarField ScalarField::negated() const {
    ScalarField base = *this;
    ScalarField f;
    f.native = native;
    f.provenance = provenance;
    f.jet = [base](double x, double y) {
        Jet2 j = base.jet(x, y);
        j.u = -j.u;
        j.ux = -j.ux;
        j.uy = -j.uy;
        j.uxx = -j.uxx;
        j.uxy = -j.uxy;
        j.uyy = -j.uyy;
        return j;
    };
    return f;
}

ScalarField ScalarField::from_grid(const GridFunction& g) {
    auto grid = std::make_shared<GridFunction>(g);
    ScalarField f;
    f.native = Model::disk;
    f.provenance = Provenance::grid_interpolant;
    f.jet = [grid](double x, double y) -> Jet2 {
        const int n = grid->n;
        int i = static_cast<int>(std::lround((x + 1.0) / grid->h));
        int j = static_cast<int>(std::lround((y + 1.0) / grid->h));
        i = std::min(std::max(i, 1), n - 2);
        j = std::min(std::max(j, 1), n - 2);
        // nearest node with a full stencil of values
        auto ok = [&](int a, int b) {
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di)
                    if (!std::isfinite(grid->at(a + di, b + dj))) return false;
            return true;
        };
        if (!ok(i, j)) {
            bool found = false;
            for (int r = 1; r <= 3 && !found; ++r)
                for (int dj = -r; dj <= r && !found; ++dj)
                    for (int di = -r; di <= r && !found; ++di) {
                        const int a = i + di, b = j + dj;
                        if (a < 1 || b < 1 || a > n - 2 || b > n - 2) continue;
                        if (ok(a, b)) {
                            i = a;
                            j = b;
                            found = true;
                        }
                    }
            if (!found) throw std::domain_error("grid interpolant: no stencil near point");
        }
        // refuse to extrapolate far beyond the gridded region
        if (std::hypot(x - grid->x_of(i), y - grid->y_of(j)) > 2.0 * grid->h)
            throw std::domain_error("grid interpolant: point outside the gridded region");
        const Jet2 base = grid_jet(*grid, i, j);
        const double dx = x - grid->x_of(i), dy = y - grid->y_of(j);
        Jet2 out = base;
        out.u = base.u + base.ux * dx + base.uy * dy +
                0.5 * base.uxx * dx * dx + base.uxy * dx * dy + 0.5 * base.uyy * dy * dy;
        out.ux = base.ux + base.uxx * dx + base.uxy * dy;
        out.uy = base.uy + base.uxy * dx + base.uyy * dy;
        return out;
    };
    return f;
}

// ---------------------------------------------------------------------------

namespace {

ResidualReport report_from(const Jet2& j, double x, double y, bool disk) {
    if (!finite(j)) throw std::domain_error("residual: non-finite derivative values");
    ResidualReport r;
    r.x = x;
    r.y = y;
    if (disk) {
        r.residual = disk_operator(j, x, y);
        r.W = disk_W(j, x, y);
    } else {
        r.residual = halfplane_operator(j, x, y);
        r.W = 1.0 + y * y * (j.ux * j.ux + j.uy * j.uy);
    }
    r.normalized = r.residual / r.W;
    r.grad_norm = std::sqrt(r.W - 1.0);
    r.eigen_min = 1.0;
    r.eigen_max = r.W;
    return r;
}

}  // namespace

ResidualReport residual_disk(const ScalarField& f, const DiskPoint& p) {
    if (!p.ideal && p.r2() > 1.0 + 1e-12)
        throw std::domain_error("residual_disk: point outside the closed disk");
    const Jet2 j = f.eval(ScalarField::Model::disk, p.x, p.y);
    return report_from(j, p.x, p.y, true);
}

ResidualReport residual_halfplane(const ScalarField& f, const HalfPlanePoint& p) {
    if (p.at_infinity) throw std::domain_error("residual_halfplane: point at infinity");
    if (p.y < 0.0) throw std::domain_error("residual_halfplane: y >= 0 required");
    const Jet2 j = f.eval(ScalarField::Model::halfplane, p.x, p.y);
    return report_from(j, p.x, p.y, false);
}

Jet2 grid_jet(const GridFunction& g, int i, int j) {
    if (i < 1 || j < 1 || i > g.n - 2 || j > g.n - 2)
        throw std::domain_error("grid_jet: node on the grid edge");
    const double h = g.h;
    Jet2 out;
    const double C = g.at(i, j), E = g.at(i + 1, j), W = g.at(i - 1, j);
    const double N = g.at(i, j + 1), S = g.at(i, j - 1);
    const double NE = g.at(i + 1, j + 1), NW = g.at(i - 1, j + 1);
    const double SE = g.at(i + 1, j - 1), SW = g.at(i - 1, j - 1);
    out.u = C;
    out.ux = (E - W) / (2.0 * h);
    out.uy = (N - S) / (2.0 * h);
    out.uxx = (E - 2.0 * C + W) / (h * h);
    out.uyy = (N - 2.0 * C + S) / (h * h);
    out.uxy = (NE - SE - NW + SW) / (4.0 * h * h);
    return out;
}

double residual_grid(const GridFunction& g, int i, int j) {
    if (i < 1 || j < 1 || i > g.n - 2 || j > g.n - 2 ||
        g.klass(i, j) != NodeClass::interior)
        throw std::domain_error("residual_grid: interior node required");
    const Jet2 jet = grid_jet(g, i, j);
    if (!finite(jet)) throw std::domain_error("residual_grid: stencil touches missing values");
    return disk_operator(jet, g.x_of(i), g.y_of(j));
}

}  // namespace h2r
