#pragma once

// Closed-form density predictions for one spatial mode of the collisionless
// linearized dynamics.
//
// Free streaming moves frequency content at speed k, so the density (the
// xi = 0 sample) of mode k at time t is the initial profile read at xi = kt.
// With the linear field coupling on, the same statement holds after the
// initial data is pushed through the damped response
//
//     u = (P g + Q H[g]) / W,        g = velocity profile of mode k,
//
// whose transform at xi = kt is the Landau-damped density.  Both predictions
// evaluate the semi-discrete transform exactly, so on-grid times (kt a
// multiple of dxi) involve no interpolation at all.

#include <vector>

#include "vpfp/field.hpp"
#include "vpfp/grid.hpp"
#include "vpfp/penrose.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

// Transform of velocity samples at an arbitrary frequency |xi| <= xi_max:
//     ghat(xi) = dv * sum_j e^{-i xi v_j} g(v_j)
// over the n-point periodic core.  Coincides with v_to_xi at the nodes.
cplx sample_hat_at(const std::vector<cplx>& v_samples, const XiGrid& grid,
                   double xi);

// rho_k(t) = ghat_in(k, kt) for free streaming (nu = 0, fields off).
cplx free_density_oracle(const SpectralField& g_in, int k, double t);

// Damped velocity profile (P g + Q H[g]) / W for a response table.
std::vector<cplx> landau_damped_profile(const std::vector<cplx>& g_v,
                                        const PenroseTable& table,
                                        const XiGrid& grid);

// rho_k(t) for the collisionless linearized dynamics with the field on,
// Maxwellian background.  `nu` is accepted only so misuse is loud: any
// nonzero value is a domain error, the closed form has no collisional
// analogue.
cplx landau_density_closed_form(const SpectralField& g_in, int k, double t,
                                double nu = 0.0);

}  // namespace vpfp
