#include "vpfp/energy.hpp"

#include <cmath>
#include <vector>

#include "vpfp/multiplier.hpp"
#include "vpfp/transforms.hpp"

namespace vpfp {

EnergyParams default_energy_params(int s, int m) {
  EnergyParams ep;
  ep.s = s;
  ep.m = m;
  if (s > 0) {
    ep.C_s = 4096.0 * s * s;
    ep.kappa = 1.0 / (32.0 * ep.C_s * s);
  }
  ep.validate();
  return ep;
}

namespace {

// || |xi|^l w ||^2 = sum_j |xi_j|^{2l} |w_j|^2 dxi over the periodic core.
double weighted_sq_norm(const std::vector<cplx>& w, const XiGrid& grid,
                        int l) {
  double acc = 0.0;
  for (int j = 0; j < grid.n(); ++j) {
    const double a = std::norm(w[static_cast<std::size_t>(j)]);
    acc += (l == 0 ? a : std::pow(std::abs(grid.xi(j)), 2.0 * l) * a);
  }
  return acc * grid.dxi();
}

}  // namespace

std::pair<double, double> energy_dissipation_eval(const SpectralField& state,
                                                  const EnergyParams& ep,
                                                  double nu, double t) {
  ep.validate();
  require(nu >= 0.0 && t >= 0.0, "energy_dissipation_eval: nu, t must be >= 0");
  const XiGrid& grid = state.grid();
  const int k_max = state.modes().k_max();
  const double nu13 = std::cbrt(nu);

  double energy = 0.0;
  double dissipation = 0.0;
  for (int k = -k_max; k <= k_max; ++k) {
    const double ak = std::abs(static_cast<double>(k));
    // Velocity-moment ladder: multiply by v once per alpha level.
    auto g_v = xi_to_v(state.row_copy(k), grid);
    for (int alpha = 0; alpha <= ep.m; ++alpha) {
      if (alpha > 0)
        for (int j = 0; j < grid.n_nodes(); ++j)
          g_v[static_cast<std::size_t>(j)] *= grid.v(j);
      auto w = v_to_xi(g_v, grid);
      for (int j = 0; j < grid.n_nodes(); ++j)
        w[static_cast<std::size_t>(j)] *= multiplier_eval(k, grid.xi(j), nu);

      // Norm table up to the highest power either functional needs.
      std::vector<double> nsq(static_cast<std::size_t>(ep.s) + 2);
      for (int l = 0; l <= ep.s + 1; ++l)
        nsq[static_cast<std::size_t>(l)] = weighted_sq_norm(w, grid, l);

      for (int l = 0; l <= ep.s; ++l) {
        const double wv = std::pow(ep.kappa * nu * t, l);
        const double wx = std::pow(ep.C_s * ep.kappa * nu13 * t, l);
        const double kx = std::pow(ak, 2.0 * l / 3.0);  // |k|^{2l/3}

        energy += wv * nsq[static_cast<std::size_t>(l)] +
                  wx * kx * nsq[0];

        double dis = wv * nu * nsq[static_cast<std::size_t>(l) + 1] +
                     wx * nu * kx * nsq[1];
        if (k != 0)
          dis += wv * 0.25 * nu13 * std::cbrt(ak * ak) *
                     nsq[static_cast<std::size_t>(l)] +
                 wx * 0.25 * nu13 * std::pow(ak, 2.0 * (l + 1) / 3.0) *
                     nsq[0];
        dissipation += dis;
      }
    }
  }
  return {energy, dissipation};
}

}  // namespace vpfp
