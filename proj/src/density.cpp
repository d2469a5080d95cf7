#include "vpfp/density.hpp"

#include <cmath>

#include "vpfp/transforms.hpp"

namespace vpfp {

namespace {

// On-grid fast path: node index of xi if it sits on the grid to round-off.
int node_of(const XiGrid& grid, double xi) {
  const double pos = (xi + grid.xi_max()) / grid.dxi();
  const int j = static_cast<int>(std::lround(pos));
  if (j < 0 || j > grid.n()) return -1;
  return (std::abs(pos - j) <= 1e-9) ? j : -1;
}

}  // namespace

cplx sample_hat_at(const std::vector<cplx>& v_samples, const XiGrid& grid,
                   double xi) {
  require(static_cast<int>(v_samples.size()) == grid.n_nodes(),
          "sample_hat_at: sample count does not match grid");
  require_domain(std::abs(xi) <= grid.xi_max() * (1.0 + 1e-12),
                 strf("sample_hat_at: xi=%.6g outside the grid (xi_max=%.6g)",
                      xi, grid.xi_max()));
  cplx acc(0.0, 0.0);
  for (int j = 0; j < grid.n(); ++j) {
    const double phase = -xi * grid.v(j);
    acc += v_samples[static_cast<std::size_t>(j)] *
           cplx(std::cos(phase), std::sin(phase));
  }
  return grid.dv() * acc;
}

cplx free_density_oracle(const SpectralField& g_in, int k, double t) {
  require(t >= 0.0, "free_density_oracle: t must be >= 0");
  const XiGrid& grid = g_in.grid();
  const double xi = k * t;
  require_domain(std::abs(xi) <= grid.xi_max(),
                 strf("free_density_oracle: characteristic kt=%.6g has left "
                      "the grid",
                      xi));
  const int j = node_of(grid, xi);
  if (j >= 0) return g_in.value(k, j);
  return sample_hat_at(xi_to_v(g_in.row_copy(k), grid), grid, xi);
}

std::vector<cplx> landau_damped_profile(const std::vector<cplx>& g_v,
                                        const PenroseTable& table,
                                        const XiGrid& grid) {
  require(static_cast<int>(g_v.size()) == grid.n_nodes(),
          "landau_damped_profile: sample count does not match grid");
  require(table.P.size() == g_v.size(),
          "landau_damped_profile: table does not match grid");
  const auto hg = hilbert_velocity(g_v, grid);
  std::vector<cplx> u(g_v.size());
  for (std::size_t j = 0; j < g_v.size(); ++j)
    u[j] = (table.P[j] * g_v[j] + table.Q[j] * hg[j]) / table.W[j];
  return u;
}

cplx landau_density_closed_form(const SpectralField& g_in, int k, double t,
                                double nu) {
  require_domain(nu == 0.0,
                 "landau_density_closed_form: defined only for nu = 0");
  require(k != 0, "landau_density_closed_form: k must be nonzero");
  require(t >= 0.0, "landau_density_closed_form: t must be >= 0");
  const XiGrid& grid = g_in.grid();
  const double xi = k * t;
  require_domain(std::abs(xi) <= grid.xi_max(),
                 strf("landau_density_closed_form: characteristic kt=%.6g "
                      "has left the grid",
                      xi));
  const PenroseTable table = make_penrose_table(k, grid);
  const auto u =
      landau_damped_profile(xi_to_v(g_in.row_copy(k), grid), table, grid);
  return sample_hat_at(u, grid, xi);
}

}  // namespace vpfp
