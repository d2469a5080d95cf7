#pragma once

// Pointwise stability response of a Maxwellian background at wavenumber k:
//
//   P_k(u) = 1 + (1/k^2) (1 - sqrt(2) u Daw(u / sqrt(2)))
//   Q_k(u) = sqrt(pi/2) u e^{-u^2/2} / k^2
//   W = P^2 + Q^2,   K = P/W - 1,
//
// the real/imaginary parts of the frequency symbol 1 - L[K^M_k] evaluated on
// the imaginary axis (u is the phase speed -omega/|k|).  P and 1-P/W are a
// Hilbert-transform pair with Q and Q/W.  The weighted variants replace the
// unit Maxwellian by its mass-renormalized copy mu1 from a BackgroundSet.
//
// Margins measure min |1 - L[kernel]| over a frequency scan, with an
// integration-by-parts floor covering the un-scanned tail.

#include <optional>
#include <vector>

#include "vpfp/backgrounds.hpp"
#include "vpfp/grid.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

struct PenroseValues {
  double P, Q, W, K;
};

PenroseValues penrose_eval(int k, double u);
PenroseValues penrose_eval_weighted(int k, double u, const BackgroundSet& set);

// Response values sampled on the dual velocity grid (u = v_j), ready for the
// wave-operator pipeline.
struct PenroseTable {
  int k = 0;
  bool weighted = false;
  std::vector<double> P, Q, W, K;
};

PenroseTable make_penrose_table(int k, const XiGrid& grid,
                                const BackgroundSet* set = nullptr);

struct MarginReport {
  double margin = 0.0;      // min |symbol| over the scan
  int k_at_min = 0;
  double omega_at_min = 0.0;
  double tail_floor = 0.0;  // lower bound valid beyond the scan window
};

// Collisionless Maxwellian margin over k_set and |omega| <= omega_max,
// via the closed forms above.
MarginReport penrose_margin_maxwellian(const std::vector<int>& k_set,
                                       double omega_max = 20.0,
                                       int n_scan = 4001);

// Same margin through the Laplace-transform route (adaptive quadrature of
// the memory kernel); oracle for the closed forms.
MarginReport penrose_margin_maxwellian_quad(const std::vector<int>& k_set,
                                            double omega_max = 20.0,
                                            int n_scan = 201);

// Margin of the damped collisional symbol 1 - L[K^nu_k](C0*gamma + i omega)
// around the full background f0.  The exponential weight e^{-C0 gamma t}
// folds into the transform abscissa.
MarginReport penrose_margin_collisional(const BackgroundSet& set, double nu,
                                        const std::vector<int>& k_set,
                                        double C0, double omega_max = 40.0,
                                        int n_scan = 2001);

// Smallest power-of-two damping constant C0 for which the bump part of the
// shifted kernel transform stays below kappa0 / 5 across the scan.
double size_C0(const BackgroundSet& set, double nu, int k, double kappa0,
               double omega_max = 40.0);

}  // namespace vpfp
