#include "vpfp/volterra.hpp"

#include <cmath>

#include "vpfp/density.hpp"
#include "vpfp/semigroups.hpp"
#include "vpfp/transforms.hpp"

namespace vpfp {

const std::vector<cplx>& solve_volterra(VolterraProblem& p) {
  const std::size_t n = p.forcing.size();
  require(n >= 2, "solve_volterra: need at least two time samples");
  require(p.kernel.size() == n,
          "solve_volterra: kernel and forcing length mismatch");
  require(p.dt_v > 0.0, "solve_volterra: dt_v must be positive");
  require(p.C0 >= 0.0 && p.gamma >= 0.0,
          "solve_volterra: tilt parameters must be >= 0");

  const double rate = p.C0 * p.gamma;
  std::vector<double> damped(n);  // e^{-rate * i dt} K_i
  for (std::size_t i = 0; i < n; ++i)
    damped[i] = std::exp(-rate * p.dt_v * static_cast<double>(i)) *
                p.kernel[i];

  // Implicit weight of the lag-0 sample (zero for physical kernels, where
  // the t_ap factor kills K(0); kept general for synthetic kernels).
  const double self = 1.0 - 0.5 * p.dt_v * damped[0];
  require(std::abs(self) > 0.1,
          "solve_volterra: lag-0 kernel too large for the step");

  p.theta.assign(n, cplx(0.0, 0.0));
  p.theta[0] = p.forcing[0];
  for (std::size_t i = 1; i < n; ++i) {
    cplx acc = 0.5 * damped[i] * p.theta[0];
    for (std::size_t j = 1; j < i; ++j) acc += damped[i - j] * p.theta[j];
    const cplx tilt_forcing =
        p.forcing[i] *
        std::exp(-rate * p.dt_v * static_cast<double>(i));
    p.theta[i] = (tilt_forcing + p.dt_v * acc) / self;
  }
  return p.theta;
}

VolterraProblem make_volterra_problem(const BackgroundSet& set, double nu,
                                      int k, double C0,
                                      const SpectralField& g_in, double t_end,
                                      double dt_v, BackgroundPart part) {
  require(k != 0, "make_volterra_problem: k must be nonzero");
  require(t_end > 0.0 && dt_v > 0.0,
          "make_volterra_problem: need positive horizon and step");

  VolterraProblem p;
  p.k = k;
  p.nu = nu;
  p.gamma = set.gamma();
  p.C0 = C0;
  p.dt_v = dt_v;
  const auto steps = static_cast<std::size_t>(std::llround(t_end / dt_v));
  const std::size_t n = steps + 1;

  const XiGrid& grid = g_in.grid();
  const auto g_v = xi_to_v(g_in.row_copy(k), grid);

  p.kernel.resize(n);
  p.forcing.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = dt_v * static_cast<double>(i);
    p.kernel[i] = volterra_kernel(set, nu, k, t, part);
    // H(t) = g_in_hat(k t_ap) * s_coll(t): the xi = 0 value of the exact
    // collisional free flow; k t_ap is off-grid, evaluate band-limited.
    p.forcing[i] = sample_hat_at(g_v, grid, k * t_ap(nu, t)) *
                   s_coll(nu, k, t);
  }
  return p;
}

}  // namespace vpfp
