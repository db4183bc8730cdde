#pragma once

#include <complex>

// Second-order jets of scalar fields and their transport through conformal
// coordinate changes (Moebius maps between the two models, disk isometries).

namespace h2r {

struct Jet2 {
    double u = 0, ux = 0, uy = 0, uxx = 0, uxy = 0, uyy = 0;
};

// Jet of v = u ∘ phi at z, given the jet of u at w = phi(z) and the first two
// complex derivatives of the holomorphic map phi.
Jet2 pullback_holomorphic(const Jet2& at_w, std::complex<double> dphi,
                          std::complex<double> d2phi);

// Jet of v(x, y) = u(x, -y) given the jet of u at the conjugated point.
Jet2 pullback_conjugation(const Jet2& at_conj);

}  // namespace h2r
