#pragma once

// Time-weighted energy/dissipation pair measuring the regularity the
// collisional flow builds up.  Per mode k and moment order alpha <= m, with
// w = M1 * transform(v^alpha h) and discrete L2 norms in xi,
//
//   E_al  = sum_{l<=s} (kappa nu t)^l        || |xi|^l w ||^2
//         + sum_{l<=s} (C_s kappa nu^{1/3} t)^l |k|^{2l/3} || w ||^2,
//
//   D_al  = sum_{l<=s} (kappa nu t)^l   [ nu || |xi|^{l+1} w ||^2
//                + (1/4) nu^{1/3} |k|^{2/3} || |xi|^l w ||^2           (k!=0) ]
//         + sum_{l<=s} (C_s kappa nu^{1/3} t)^l [ nu |k|^{2l/3} || |xi| w ||^2
//                + (1/4) nu^{1/3} |k|^{2(l+1)/3} || w ||^2             (k!=0) ],
//
// summed over modes and alpha.  Velocity moments are taken on the velocity
// side (multiply by v^alpha, transform back); |nabla_v| and |nabla_x| become
// the multipliers |xi| and |k|.  Both time weights carry the convention
// 0^0 = 1, so at t = 0 the energy collapses to twice the moment sum
// 2 sum_alpha ||M1 (v^alpha h)||^2 (each l = 0 term contributes one copy).
// Fixed-measure constants of the continuum norms are dropped throughout:
// every consumer compares these values against each other or against fitted
// constants, never against absolutely normalized quantities.

#include <utility>

#include "vpfp/field.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

struct EnergyParams {
  int s = 0;          // regularity ladder height
  int m = 0;          // highest velocity moment
  double kappa = 1.0;   // in (0, 1]
  double C_s = 1.0;     // >= 1

  // Smallness conditions the ladder weights must satisfy.
  void validate() const {
    require(s >= 0 && m >= 0, "EnergyParams: s and m must be >= 0");
    require(kappa > 0.0 && kappa <= 1.0, "EnergyParams: kappa not in (0,1]");
    require(C_s >= 1.0, "EnergyParams: C_s must be >= 1");
    require(2.0 * s / std::sqrt(C_s) <= 1.0 / 32.0 + 1e-15,
            "EnergyParams: 2s/sqrt(C_s) exceeds 1/32");
    require(C_s * s * kappa <= 1.0 / 32.0 + 1e-15,
            "EnergyParams: C_s*s*kappa exceeds 1/32");
    require(s * m <= 8, "EnergyParams: s*m > 8 needs more resolution than "
                        "the default grids provide");
  }
};

// Smallest-fuss admissible weights for a given ladder: C_s = 4096 s^2 makes
// 2s/sqrt(C_s) = 1/32 exactly, kappa = 1/(32 C_s s) does the same for the
// second condition (s = 0 keeps the neutral values).
EnergyParams default_energy_params(int s, int m);

// (energy, dissipation) of the state at time t.
std::pair<double, double> energy_dissipation_eval(const SpectralField& state,
                                                  const EnergyParams& ep,
                                                  double nu, double t);

}  // namespace vpfp
