#pragma once

// FFT bridge between velocity samples and their frequency-side samples, with
// the convention
//
//     fhat(xi) = integral e^{-i xi v} f(v) dv,
//     f(v)    = (1/2pi) integral e^{+i xi v} fhat(xi) dxi,
//
// so a unit-mass Gaussian exp(-v^2/2)/sqrt(2pi) maps to exp(-xi^2/2).
// Both directions act on the (n+1)-node symmetric arrays of XiGrid; the
// transforms use the n-point periodic core and write the wrap node last.
//
// Also: the frequency-side Hilbert multiplier and a velocity-side Hilbert
// transform corrected for domain periodization (see hilbert_velocity).

#include <vector>

#include "vpfp/grid.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

// fhat(xi_m) from f(v_j); trapezoid-exact for the periodized integrand.
std::vector<cplx> v_to_xi(const std::vector<cplx>& v_samples,
                          const XiGrid& grid);

// f(v_j) from fhat(xi_m); exact inverse of v_to_xi on the grid.
std::vector<cplx> xi_to_v(const std::vector<cplx>& xi_samples,
                          const XiGrid& grid);

// Frequency-side Hilbert multiplier: out(xi) = -i * sgn(xi) * in(xi), with
// sgn(0) = 0.  Pointwise and exact; throws if the input carries significant
// weight at the grid edges (the line-transform reading then breaks down).
std::vector<cplx> hilbert_transform(const std::vector<cplx>& xi_samples,
                                    const XiGrid& grid,
                                    double spill_tol = 1e-6);

// Velocity-side Hilbert transform of a decaying function sampled on the
// dual v-grid.  The bare FFT route computes the transform of the
// L-periodization of f (L = 2*pi/dxi); for line-faithful values the images
//     sum_{n != 0} H[f](v - nL) ~ c1/(v-nL) + c2/(v-nL)^2 + ...
// are removed analytically through order `image_order` (<= 4), with moment
// coefficients c_q = (1/pi) * integral v^{q-1} f dv taken on the grid.
// Residual error decays like L^-(image_order+1).
std::vector<cplx> hilbert_velocity(const std::vector<cplx>& v_samples,
                                   const XiGrid& grid, int image_order = 4);

// Lattice sums sum_{n != 0} (v - n*L)^{-q} for q = 1..4 (closed forms with
// series branches near v = 0).  Exposed for tests.
double image_sum(int q, double v, double L);

}  // namespace vpfp
