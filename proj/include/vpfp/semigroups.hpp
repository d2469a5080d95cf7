#pragma once

// Closed-form building blocks of the linear flow with transport wavenumber k
// and velocity Fokker-Planck damping at collision rate nu, written on the
// frequency side.  The backward characteristic through (t, xi) starts at
//
//     eta_bar = xi e^{-nu t} + k t_ap,        t_ap = (1 - e^{-nu t}) / nu,
//
// and accumulates the damping exponent
//
//     E = xi^2 (1 - e^{-2 nu t})/2 + xi k nu t_ap^2 + (k^2/nu^2) phi(nu t),
//     phi(x) = x - 2(1 - e^{-x}) + (1 - e^{-2x})/2,
//
// each term evaluated in a cancellation-free form (phi and t_ap switch to
// series for small nu t; the cross term uses nu t_ap^2 exactly).  As nu -> 0
// these reduce to t_ap = t and E = 0; the pure-transport solution is
// g_hat(t, xi) = g_in(xi + k t).

#include <cmath>

#include "vpfp/backgrounds.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

// (1 - e^{-nu t}) / nu, the collision-flattened time increment.
inline double t_ap(double nu, double t) {
  const double x = nu * t;
  if (x < 1e-6) return t * (1.0 - 0.5 * x + x * x / 6.0);
  return (1.0 - std::exp(-x)) / nu;
}

// phi(x) above; x^3/3 - x^4/4 + 7x^5/60 - x^6/24 + 31x^7/2520 for small x.
inline double coll_phase(double x) {
  require(x >= 0.0, "coll_phase: negative argument");
  if (x < 0.05) {
    const double x3 = x * x * x;
    return x3 * (1.0 / 3.0 +
                 x * (-0.25 + x * (7.0 / 60.0 +
                                   x * (-1.0 / 24.0 + x * (31.0 / 2520.0)))));
  }
  return x - 2.0 * (1.0 - std::exp(-x)) + 0.5 * (1.0 - std::exp(-2.0 * x));
}

inline double eta_bar(double nu, int k, double xi, double t) {
  return xi * std::exp(-nu * t) + k * t_ap(nu, t);
}

inline double free_decay_exponent(double nu, int k, double xi, double t) {
  if (nu == 0.0) return 0.0;
  const double x = nu * t;
  const double spread = 0.5 * (1.0 - std::exp(-2.0 * x));
  const double ta = t_ap(nu, t);
  return xi * xi * spread + xi * k * nu * ta * ta +
         (static_cast<double>(k) * k / (nu * nu)) * coll_phase(x);
}

// Full damping factor along the backward characteristic.
inline double s_free(double nu, int k, double xi, double t) {
  return std::exp(-free_decay_exponent(nu, k, xi, t));
}

// Density-level damping factor (the xi = 0 slice of s_free).
inline double s_coll(double nu, int k, double t) {
  if (nu == 0.0) return 1.0;
  return std::exp(-(static_cast<double>(k) * k / (nu * nu)) *
                  coll_phase(nu * t));
}

// Memory kernel of the closed density equation around a homogeneous
// background: K_k(t) = -s_coll(t) * t_ap * part_hat(k * t_ap).
// With nu = 0 and the Maxwellian part this is -t e^{-(k t)^2 / 2}.
inline double volterra_kernel(const BackgroundSet& set, double nu, int k,
                              double t,
                              BackgroundPart part = BackgroundPart::f0) {
  const double ta = t_ap(nu, t);
  return -s_coll(nu, k, t) * ta * background_hat(set, part, k * ta);
}

// Exact linear-flow oracle (no field coupling): the solution with data
// g_in(xi) evaluated at (t, xi).
template <class F>
cplx coll_free_exact(const F& g_in_hat, double nu, int k, double xi,
                     double t) {
  return g_in_hat(eta_bar(nu, k, xi, t)) *
         std::exp(-free_decay_exponent(nu, k, xi, t));
}

}  // namespace vpfp
