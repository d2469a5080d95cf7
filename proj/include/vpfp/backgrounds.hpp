#pragma once

// Spatially homogeneous backgrounds: a unit Maxwellian plus a small wide
// bump, described on the frequency side.  With bump shape sigma_hat, mass
// factor M and width parameter gamma, the background transform is
//
//   f0_hat(xi) = ( e^{-xi^2/2} + M gamma^2 sigma_hat(gamma xi) )
//                / ( 1 + M gamma^2 m_sigma ),        m_sigma = sigma_hat(0),
//
// normalized to unit mass.  mu1/mu2 name the two summands.  The admissible
// gamma range is capped by moment conditions on the bump (gamma0 below);
// construction fails hard outside it.

#include <functional>
#include <string>

#include "vpfp/util.hpp"

namespace vpfp {

struct BumpProfile {
  std::function<double(double)> sigma_hat;  // even, smooth, decaying
  double m_sigma = 0.0;       // sigma_hat(0)
  double B1 = 0.0;            // integral_0^inf t   sigma_hat(t) dt
  double B2 = 0.0;            // integral_0^inf t^2 sigma_hat(t) dt
  double sup_t_sigma = 0.0;   // sup_t |t * sigma_hat(t)|
  // Declared decay: |sigma_hat(t)| <= env_amplitude * e^{-env_rate t^2 / 2},
  // consumed by the quadrature envelopes.
  double env_amplitude = 4.0;
  double env_rate = 0.5;
  std::string name;
};

// (t^2 - 4) e^{-t^2/2}: negative moments B1 = -2, B2 = -sqrt(pi/2), and a
// mass dip m_sigma = -4, which is what the instability mechanism needs.
BumpProfile default_bump();

// Largest admissible gamma for a bump profile; the minimum of four moment
// conditions that keep the response monotonicity and sign structure intact.
double gamma0_limit(const BumpProfile& bump);

class BackgroundSet {
 public:
  BackgroundSet(BumpProfile bump, double M, double gamma);

  const BumpProfile& bump() const { return bump_; }
  double M() const { return M_; }
  double gamma() const { return gamma_; }
  double gamma0() const { return gamma0_; }

  // 1 + M gamma^2 m_sigma, the mass normalizer (positive by the gamma guard).
  double norm() const { return norm_; }

  double mu_hat(double xi) const { return std::exp(-0.5 * xi * xi); }
  double mu1_hat(double xi) const { return mu_hat(xi) / norm_; }
  double mu2_hat(double xi) const {
    return M_ * gamma_ * gamma_ * bump_.sigma_hat(gamma_ * xi) / norm_;
  }
  double f0_hat(double xi) const { return mu1_hat(xi) + mu2_hat(xi); }

 private:
  BumpProfile bump_;
  double M_;
  double gamma_;
  double gamma0_;
  double norm_;
};

enum class BackgroundPart { mu, mu1, mu2, f0 };

double background_hat(const BackgroundSet& set, BackgroundPart part,
                      double xi);

// Closed-form homogeneous evolution of the bump part mu2 under the velocity
// Fokker-Planck flow with collision rate nu:
//   fe_hat(t, xi) = exp(-(1 - e^{-2 nu t}) xi^2 / 2)
//                   * M gamma^2 sigma_hat(e^{-nu t} gamma xi) / norm.
// The Gaussian part mu1 is an exact fixed point and is not included.
double fe_hat_exact(const BackgroundSet& set, double nu, double t, double xi);

}  // namespace vpfp
