#pragma once

#include <cmath>
#include <vector>

// Discrete scalar fields on a uniform Cartesian grid over the closed unit
// disk.  The asymptotic circle is part of the grid boundary: nodes on or
// beyond |z| = 1 that are referenced by interior stencils carry Dirichlet
// data.  Finite boundary curves cut through cells; the solver shortens
// stencil arms to the cut points (values live exactly on the curve).

namespace h2r {

enum class NodeClass : unsigned char {
    excluded,             // outside the computational domain
    interior,             // unknown, full equation
    finite_boundary,      // Dirichlet ghost beside a finite-boundary curve
    asymptotic_boundary,  // Dirichlet node at |z| >= 1
    near_discontinuity,   // within one cell of a data jump: no data imposed,
                          // carries the midpoint placeholder (A+B)/2
};

struct GridFunction {
    int n = 0;        // nodes per side; grid covers [-1, 1]^2
    double h = 0.0;   // spacing 2 / (n - 1)
    std::vector<double> values;    // n * n, NaN at excluded nodes
    std::vector<NodeClass> cls;    // n * n

    GridFunction() = default;
    explicit GridFunction(int n_)
        : n(n_), h(2.0 / (n_ - 1)),
          values(static_cast<size_t>(n_) * n_, std::nan("")),
          cls(static_cast<size_t>(n_) * n_, NodeClass::excluded) {}

    int id(int i, int j) const { return j * n + i; }
    double x_of(int i) const { return -1.0 + h * i; }
    double y_of(int j) const { return -1.0 + h * j; }
    double& at(int i, int j) { return values[id(i, j)]; }
    double at(int i, int j) const { return values[id(i, j)]; }
    NodeClass klass(int i, int j) const { return cls[id(i, j)]; }
};

}  // namespace h2r
