#pragma once

// Damped Volterra route to the linearized collisional density: the density
// rho_k of the system linearized around a homogeneous background obeys
//
//     rho(t) = H(t) + integral_0^t K(t - tau) rho(tau) dtau,
//
// with forcing H = the collisional free evolution of the initial data read
// at xi = 0 and memory kernel K = volterra_kernel.  The solver works with
// the exponentially tilted unknown theta(t) = e^{-C0 gamma t} rho(t), whose
// kernel is uniformly small once C0 is sized (see size_C0), so the marching
// scheme never amplifies round-off even over long horizons.

#include <vector>

#include "vpfp/backgrounds.hpp"
#include "vpfp/field.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

struct VolterraProblem {
  int k = 0;
  double nu = 0.0;
  double gamma = 0.0;   // tilt scale
  double C0 = 0.0;      // tilt multiplier; damping rate is C0 * gamma
  double dt_v = 0.0;    // uniform time step of all sample arrays
  std::vector<double> kernel;  // K(i * dt_v), undamped
  std::vector<cplx> forcing;   // H(i * dt_v), undamped
  std::vector<cplx> theta;     // filled by solve_volterra
};

// Product-trapezoidal marching for
//     theta(t) = H(t) e^{-C0 gamma t}
//                + integral_0^t e^{-C0 gamma (t-tau)} K(t-tau) theta(tau) dtau.
// Second order in dt_v; the step is implicit in the (usually zero) lag-0
// kernel sample and explicit otherwise.  Returns a reference to p.theta.
const std::vector<cplx>& solve_volterra(VolterraProblem& p);

// Assembles kernel and forcing for mode k of initial data g_in around the
// `part` background of `set`: kernel from volterra_kernel, forcing from the
// exact collisional free flow of g_in sampled at xi = 0 (band-limited
// evaluation at the off-grid frequency k * t_ap).
VolterraProblem make_volterra_problem(const BackgroundSet& set, double nu,
                                      int k, double C0,
                                      const SpectralField& g_in, double t_end,
                                      double dt_v,
                                      BackgroundPart part = BackgroundPart::f0);

}  // namespace vpfp
