#pragma once

#include <functional>
#include <utility>

#include "h2r/families.hpp"
#include "h2r/geometry.hpp"
#include "h2r/grid.hpp"
#include "h2r/jet.hpp"

// The minimal vertical equation and its ingredients, evaluated pointwise in
// both coordinate models and on grid functions.
//
// Half-plane form:
//   (1 + y^2 ux^2) uyy + (1 + y^2 uy^2) uxx - 2 y^2 ux uy uxy
//     - y uy (ux^2 + uy^2) = 0
// Disk form, with F = (1 - x^2 - y^2)^2 / 4:
//   (1 + F ux^2) uyy + (1 + F uy^2) uxx - 2 F ux uy uxy
//     + ((1 - x^2 - y^2)/2) (x ux + y uy)(ux^2 + uy^2) = 0
// Both are quasilinear and strictly elliptic up to the asymptotic boundary;
// the ellipticity eigenvalues are 1 and W_u = 1 + |grad_H u|^2.

namespace h2r {

struct ResidualReport {
    double x = 0, y = 0;
    double residual = 0;    // the operator exactly as written above
    double normalized = 0;  // residual / W (comparable across steep regions)
    double grad_norm = 0;   // |grad_H u|
    double W = 0;           // larger ellipticity eigenvalue, >= 1
    double eigen_min = 1.0, eigen_max = 1.0;
};

// A scalar field with a second-order jet evaluator in its native model.
// Evaluation in the other model transports the jet through the Cayley map.
struct ScalarField {
    enum class Model { disk, halfplane };
    enum class Provenance { closed_form, grid_interpolant };

    Model native = Model::disk;
    Provenance provenance = Provenance::closed_form;
    std::function<Jet2(double, double)> jet;  // native-model evaluator

    Jet2 eval(Model m, double x, double y) const;

    static ScalarField constant(double c);
    static ScalarField from_entire_family(EntireFamily kind, double ell);
    // The wedge graph mapped to the disk: right half-disk domain, +inf data
    // on the vertical diameter, zero on the right semicircle.
    static ScalarField scherk_wedge_disk();
    // Composition with a disk isometry: (u ∘ iso).
    ScalarField composed_with(const Isometry& iso) const;
    ScalarField plus_constant(double c) const;
    ScalarField negated() const;
    // Piecewise-quadratic interpolant of a grid function (Taylor jet at the
    // nearest non-excluded node).
    static ScalarField from_grid(const GridFunction& g);
};

ResidualReport residual_disk(const ScalarField& f, const DiskPoint& p);
ResidualReport residual_halfplane(const ScalarField& f, const HalfPlanePoint& p);

// Pointwise residual formed from a raw jet (no field indirection).
double disk_operator(const Jet2& j, double x, double y);
double halfplane_operator(const Jet2& j, double x, double y);
double disk_W(const Jet2& j, double x, double y);

// Second-order central differences on the nine-point stencil (cross term by
// diagonal differencing); converges to residual_disk at order h^2.  Throws
// std::domain_error at non-interior nodes.
double residual_grid(const GridFunction& g, int i, int j);
// Finite-difference jet at an interior node (uniform arms).
Jet2 grid_jet(const GridFunction& g, int i, int j);

}  // namespace h2r
