#pragma once

// Root tracking for the k = 1 dispersion function of a bump-on-Maxwellian
// background,
//
//   Psi(lambda, M) = 1 + [ Lg(lambda) + M * B1(lambda/gamma) ] / (1 + M gamma^2 m_sigma),
//
// where Lg(lambda) = integral_0^inf e^{-lambda t} t e^{-t^2/2} dt (closed
// form via erfc) and B1(L) = integral_0^inf e^{-L u} u sigma_hat(u) du is the
// bump response in rescaled time (quadrature).  Psi(0, M0) = 0 at
// M0 = -2 / (B1 + gamma^2 m_sigma); for M > M0 the root moves onto the
// positive real axis.  The tracker integrates d lambda / dM = N / D with an
// RK4 predictor and polishes every node with Newton steps on Psi, so the
// reported residual stays at solver tolerance along the whole path.

#include <complex>
#include <vector>

#include "vpfp/backgrounds.hpp"
#include "vpfp/grid.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

cplx psi_eval(const BackgroundSet& set, cplx lambda, double M);

// d Psi / d lambda at (lambda, M).
cplx psi_dlambda(const BackgroundSet& set, cplx lambda, double M);

// Root location of Psi(0, .): the neutral mass factor.
double m0_anchor(const BackgroundSet& set);

// Right-hand side N/D of the root curve ODE; throws when the denominator
// guard |D| >= |B2| / (8 gamma |B1|) fails.
double eigen_ode_rhs(const BackgroundSet& set, double lambda, double M);

struct EigenSolution {
  double gamma = 0.0;
  double M0 = 0.0;
  double M = 0.0;
  cplx lambda{0.0, 0.0};
  double psi_residual = 0.0;     // |Psi(lambda, M)| at the target
  double max_path_residual = 0.0;  // worst polished residual along the path
  double slope_at_M0 = 0.0;      // d lambda / dM at the anchor
  std::vector<std::pair<double, double>> path;  // (M, lambda_r) nodes
};

struct ContinuationOptions {
  int steps = 64;
  double newton_tol = 1e-12;
  int newton_max_iter = 12;
  double box_delta = 0.5;  // |Im lambda| <= box_delta * gamma along the path
};

// Tracks the real root from (M0, 0) to M_target in (M0, M0 + 1].
EigenSolution continue_eigenvalue(const BackgroundSet& set, double M_target,
                                  const ContinuationOptions& opts = {});

// Frequency-side eigenfunction for eigenvalue lambda, normalized to 1 at
// xi = 0: branch integrals of  e' = lambda e + xi f0_hat(xi)  inward from
// the right edge (xi >= 0) and outward from 0 (xi <= 0).  Requires
// gamma * xi_max >= 8 so the dropped tail is negligible.
std::vector<cplx> eigenfunction_hat(const BackgroundSet& set, cplx lambda,
                                    const XiGrid& grid);

// The same dispersion function seen from the time side and with collisions:
//
//   Psi_nu(lambda) = 1 - integral_0^inf e^{-lambda t} K_nu(t) dt,
//
// where K_nu is the memory kernel of the closed density equation (see
// volterra_kernel).  At nu = 0 this reproduces psi_eval on the real axis;
// at nu > 0 its rightmost root is the growth/decay rate the density
// actually realizes under the collision operator.
double collisional_dispersion(const BackgroundSet& set, double nu, int k,
                              double lambda);

// Rightmost real root of Psi_nu, continued from a collisionless starting
// value (typically continue_eigenvalue's lambda) by secant iteration.
double collisional_rate(const BackgroundSet& set, double nu, int k,
                        double lambda0);

// Neutral mass of the collisional relation: the M with Psi_nu(0; M) = 0,
// i.e. where the rightmost root crosses the axis.  Agrees with m0_anchor
// as nu -> 0; at nu > 0 it moves by a few percent, in the direction set by
// which lobe of the bump profile the collisional damping of the memory
// kernel weighs down more (either side of the anchor, depending on nu).
// The set argument supplies the bump and gamma; its own mass is ignored.
double collisional_neutral_mass(const BackgroundSet& set, double nu, int k);

}  // namespace vpfp
