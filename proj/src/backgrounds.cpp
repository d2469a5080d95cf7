#include "vpfp/backgrounds.hpp"

#include <cmath>

namespace vpfp {

BumpProfile default_bump() {
  BumpProfile b;
  b.sigma_hat = [](double t) { return (t * t - 4.0) * std::exp(-0.5 * t * t); };
  b.m_sigma = -4.0;
  // integral_0^inf t^3 e^{-t^2/2} = 2,   integral_0^inf t e^{-t^2/2} = 1
  b.B1 = -2.0;
  // integral_0^inf t^4 e^{-t^2/2} = 3 sqrt(pi/2),  t^2: sqrt(pi/2)
  b.B2 = -sqrt_pi_over_2;
  // sup_t |t (t^2-4) e^{-t^2/2}|; fixed dense scan, profile is frozen.
  double sup = 0.0;
  for (int i = 0; i <= 100000; ++i) {
    const double t = 1e-4 * i;
    sup = std::max(sup, std::abs(t * b.sigma_hat(t)));
  }
  b.sup_t_sigma = sup;
  b.name = "quartic-dip";
  return b;
}

double gamma0_limit(const BumpProfile& bump) {
  require(bump.B1 < 0.0, "gamma0_limit: bump needs B1 < 0");
  require(bump.B2 < 0.0, "gamma0_limit: bump needs B2 < 0");
  require(bump.m_sigma < 0.0, "gamma0_limit: bump needs m_sigma < 0");
  const double ab1 = -bump.B1, ab2 = -bump.B2, am = -bump.m_sigma;
  const double c1 = 1.0;
  const double c2 = std::sqrt(ab1 / (4.0 * am));
  const double c3 = std::sqrt(3.0 * ab1 / ((3.0 * ab1 + 8.0) * am));
  const double c4 = 0.6 * std::sqrt(2.0 / pi) * ab2 / ab1;
  return std::min(std::min(c1, c2), std::min(c3, c4));
}

BackgroundSet::BackgroundSet(BumpProfile bump, double M, double gamma)
    : bump_(std::move(bump)), M_(M), gamma_(gamma) {
  require(static_cast<bool>(bump_.sigma_hat),
          "BackgroundSet: bump profile has no shape function");
  require(M >= 0.0, "BackgroundSet: M must be nonnegative");
  require(gamma > 0.0, "BackgroundSet: gamma must be positive");
  gamma0_ = gamma0_limit(bump_);
  require_domain(gamma <= gamma0_,
                 strf("BackgroundSet: gamma=%.6g exceeds the admissible "
                      "gamma0=%.6g for bump '%s'",
                      gamma, gamma0_, bump_.name.c_str()));
  norm_ = 1.0 + M_ * gamma_ * gamma_ * bump_.m_sigma;
  require_domain(norm_ > 0.0,
                 "BackgroundSet: mass normalizer is not positive");
}

double background_hat(const BackgroundSet& set, BackgroundPart part,
                      double xi) {
  switch (part) {
    case BackgroundPart::mu:
      return set.mu_hat(xi);
    case BackgroundPart::mu1:
      return set.mu1_hat(xi);
    case BackgroundPart::mu2:
      return set.mu2_hat(xi);
    case BackgroundPart::f0:
      return set.f0_hat(xi);
  }
  fail("background_hat: unknown part");
}

double fe_hat_exact(const BackgroundSet& set, double nu, double t, double xi) {
  require(nu >= 0.0 && t >= 0.0, "fe_hat_exact: nu and t must be >= 0");
  const double decay = std::exp(-nu * t);
  const double spread = 1.0 - decay * decay;  // 1 - e^{-2 nu t}
  const double g = set.gamma();
  return std::exp(-0.5 * spread * xi * xi) * set.M() * g * g *
         set.bump().sigma_hat(decay * g * xi) / set.norm();
}

}  // namespace vpfp
