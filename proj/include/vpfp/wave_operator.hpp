#pragma once

// One-dimensional wave operator attached to a stability response table,
//
//     D[f](v)      = f(v) + (Q(v)/P(v)) * H[f](v),
//     D^{-1}[g](v) = g(v) - Q(v) * ( H[P g / W](v) + (Q(v)/W(v)) g(v) ),
//
// where H is the velocity-side Hilbert transform and (P, Q, W) come from a
// PenroseTable for the Maxwellian or its mass-renormalized copy.  D absorbs
// the nonlocal field response of the linearized dynamics: conjugating by D
// turns transport-plus-field into plain transport, which is what the
// intertwining identity
//
//     D[ v f - k^{-2} (integral f dv) * dmu/dv ] = v D[f]
//
// expresses.  The closed-form inverse exists precisely because
// W = P^2 + Q^2 stays away from zero (the stability margin).

#include <vector>

#include "vpfp/backgrounds.hpp"
#include "vpfp/grid.hpp"
#include "vpfp/penrose.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

enum class WaveBackground {
  maxwellian,  // response of exp(-v^2/2)/sqrt(2 pi)
  normalized   // response of mu1 = mu / norm from a BackgroundSet
};

struct WaveOperatorHandle {
  int k = 0;
  WaveBackground background = WaveBackground::maxwellian;
  XiGrid grid;
  PenroseTable table;
  double inf_p = 0.0;  // min_v P(v); must be positive for invertibility
  double norm = 1.0;   // mass normalizer of the selected background

  WaveOperatorHandle(int k_, WaveBackground bg, XiGrid g, PenroseTable t,
                     double inf_p_, double norm_)
      : k(k_), background(bg), grid(std::move(g)), table(std::move(t)),
        inf_p(inf_p_), norm(norm_) {}
};

// Builds the handle and checks inf_v P > 0.  `set` is required for (and only
// read by) the normalized background.
WaveOperatorHandle make_wave_operator(int k, const XiGrid& grid,
                                      WaveBackground background =
                                          WaveBackground::maxwellian,
                                      const BackgroundSet* set = nullptr);

// D[f] for f sampled on the dual velocity grid ((n+1)-node array).
std::vector<cplx> apply_wave(const WaveOperatorHandle& h,
                             const std::vector<cplx>& f);

// D^{-1}[g]; apply_inverse_wave(apply_wave(f)) = f up to the Hilbert
// periodization floor.
std::vector<cplx> apply_inverse_wave(const WaveOperatorHandle& h,
                                     const std::vector<cplx>& g);

// || D[v f - k^{-2} (integral f) dmu/dv] - v D[f] ||_{L2} / ||f||_{L2},
// with mu matching the handle's background.  Grid-convergent to zero.
double intertwining_residual(const WaveOperatorHandle& h,
                             const std::vector<cplx>& f);

// Commutator [D, L] f = D[L f] - L[D f] with the Fokker-Planck generator
// L f = f'' + (v f)', derivatives taken spectrally.
std::vector<cplx> commutator_fp(const WaveOperatorHandle& h,
                                const std::vector<cplx>& f);

// Spectral d/dv on the dual velocity grid (exposed for tests and the
// commutator oracle).
std::vector<cplx> spectral_derivative(const std::vector<cplx>& f,
                                      const XiGrid& grid);

// sqrt( integral |f|^2 dv ) by the trapezoid rule on the dual grid.
double l2_norm_v(const std::vector<cplx>& f, const XiGrid& grid);

}  // namespace vpfp
