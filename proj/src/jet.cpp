#include "h2r/jet.hpp"

namespace h2r {

Jet2 pullback_holomorphic(const Jet2& J, std::complex<double> dphi,
                          std::complex<double> d2phi) {
    // phi = X + iY holomorphic: X_x = Y_y = Re phi', Y_x = -X_y = Im phi',
    // X_xx = Re phi'', Y_xx = Im phi'', X_xy = -Im phi'', Y_xy = Re phi'',
    // X_yy = -X_xx, Y_yy = -Y_xx.
    const double A = dphi.real(), B = dphi.imag();
    const double P = d2phi.real(), Q = d2phi.imag();
    Jet2 v;
    v.u = J.u;
    v.ux = J.ux * A + J.uy * B;
    v.uy = -J.ux * B + J.uy * A;
    v.uxx = J.uxx * A * A + 2.0 * J.uxy * A * B + J.uyy * B * B + J.ux * P + J.uy * Q;
    v.uxy = -J.uxx * A * B + J.uxy * (A * A - B * B) + J.uyy * A * B - J.ux * Q + J.uy * P;
    v.uyy = J.uxx * B * B - 2.0 * J.uxy * A * B + J.uyy * A * A - J.ux * P - J.uy * Q;
    return v;
}

Jet2 pullback_conjugation(const Jet2& J) {
    Jet2 v = J;
    v.uy = -J.uy;
    v.uxy = -J.uxy;
    return v;
}

}  // namespace h2r
