#pragma once

// Frequency multiplier that encodes enhanced dissipation: a bounded weight
// M1(k, xi) whose xi-derivative, pushed by the transport term k d/dxi,
// manufactures dissipation at rate nu^{1/3} |k|^{2/3} in the frequency
// band |xi| <~ nu^{-1/3} |k|^{1/3} where the collisional damping nu xi^2 is
// still too weak:
//
//     nu xi^2 + k dM1/dxi >= (1/4) nu^{1/3} |k|^{2/3},   M1 in [1, 2].
//
// M1(k, xi) = 1 + phi(z),  z = nu^{1/3} |k|^{-4/3} k xi  (k != 0; M1 = 1 at
// k = 0).  The ramp phi is C^2, nondecreasing, 0 below z = -3, 1 above
// z = 3, with the exact slope 1/4 on [-1, 1] that the bound above uses;
// the shoulders are quartic blends with vanishing slope and curvature at
// the outer edges and vanishing curvature at the inner ones.

#include <cmath>

#include "vpfp/util.hpp"

namespace vpfp {

// Shoulder polynomial p(u) = 3/4 + u/2 - u^3/2 + u^4/4 on [0, 1]:
// p(0) = 3/4, p(1) = 1, p'(0) = 1/2, p'(1) = 0, p''(0) = p''(1) = 0,
// and p' = 1/2 - 3u^2/2 + u^3 decreases monotonically from 1/2 to 0.
inline double multiplier_shoulder(double u) {
  return 0.75 + u * (0.5 + u * u * (-0.5 + 0.25 * u));
}

inline double multiplier_blend(double z) {
  if (z <= -3.0) return 0.0;
  if (z >= 3.0) return 1.0;
  if (z < -1.0) return 1.0 - multiplier_shoulder(0.5 * (-z - 1.0));
  if (z <= 1.0) return 0.5 + 0.25 * z;
  return multiplier_shoulder(0.5 * (z - 1.0));
}

inline double multiplier_eval(int k, double xi, double nu) {
  require(nu >= 0.0, "multiplier_eval: nu must be >= 0");
  if (k == 0 || nu == 0.0) return 1.0;
  const double ak = std::abs(static_cast<double>(k));
  const double z = std::cbrt(nu) * std::pow(ak, -4.0 / 3.0) * k * xi;
  return 1.0 + multiplier_blend(z);
}

}  // namespace vpfp
