#include "vpfp/wave_operator.hpp"

#include <algorithm>
#include <cmath>

#include "vpfp/transforms.hpp"

namespace vpfp {

namespace {

std::vector<cplx> hilbert(const std::vector<cplx>& f, const XiGrid& grid) {
  return hilbert_velocity(f, grid);
}

void check_size(const WaveOperatorHandle& h, const std::vector<cplx>& f,
                const char* who) {
  require(static_cast<int>(f.size()) == h.grid.n_nodes(),
          strf("%s: sample count %zu does not match grid (%d nodes)", who,
               f.size(), h.grid.n_nodes()));
}

}  // namespace

WaveOperatorHandle make_wave_operator(int k, const XiGrid& grid,
                                      WaveBackground background,
                                      const BackgroundSet* set) {
  require(k != 0, "make_wave_operator: k must be nonzero");
  const bool weighted = (background == WaveBackground::normalized);
  require(!weighted || set != nullptr,
          "make_wave_operator: normalized background needs a BackgroundSet");
  PenroseTable table = make_penrose_table(k, grid, weighted ? set : nullptr);
  const double inf_p = *std::min_element(table.P.begin(), table.P.end());
  require_domain(inf_p > 0.0,
                 strf("make_wave_operator: response P dips to %.6g <= 0, "
                      "operator not invertible (k=%d)",
                      inf_p, k));
  const double norm = weighted ? set->norm() : 1.0;
  return WaveOperatorHandle(k, background, grid, std::move(table), inf_p,
                            norm);
}

std::vector<cplx> apply_wave(const WaveOperatorHandle& h,
                             const std::vector<cplx>& f) {
  check_size(h, f, "apply_wave");
  const auto hf = hilbert(f, h.grid);
  std::vector<cplx> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j)
    out[j] = f[j] + (h.table.Q[j] / h.table.P[j]) * hf[j];
  return out;
}

std::vector<cplx> apply_inverse_wave(const WaveOperatorHandle& h,
                                     const std::vector<cplx>& g) {
  check_size(h, g, "apply_inverse_wave");
  std::vector<cplx> pg_over_w(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    pg_over_w[j] = h.table.P[j] * g[j] / h.table.W[j];
  const auto hpg = hilbert(pg_over_w, h.grid);
  std::vector<cplx> out(g.size());
  for (std::size_t j = 0; j < g.size(); ++j)
    out[j] = g[j] -
             h.table.Q[j] * (hpg[j] + (h.table.Q[j] / h.table.W[j]) * g[j]);
  return out;
}

double intertwining_residual(const WaveOperatorHandle& h,
                             const std::vector<cplx>& f) {
  check_size(h, f, "intertwining_residual");
  const double nf = l2_norm_v(f, h.grid);
  if (nf == 0.0) return 0.0;

  const auto& vg = h.grid;
  const cplx mass = trapz(f, vg.dv());
  const double kk = static_cast<double>(h.k) * h.k;

  // v f - k^{-2} (integral f) dmu/dv, with dmu/dv = -v e^{-v^2/2} /
  // (sqrt(2 pi) norm) for the handle's background.
  std::vector<cplx> lhs_arg(f.size());
  const double c = 1.0 / (std::sqrt(2.0 * pi) * h.norm);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double v = vg.v(static_cast<int>(j));
    const double dmu = -v * std::exp(-0.5 * v * v) * c;
    lhs_arg[j] = v * f[j] - (mass / kk) * dmu;
  }
  const auto lhs = apply_wave(h, lhs_arg);
  const auto df = apply_wave(h, f);

  std::vector<cplx> diff(f.size());
  for (std::size_t j = 0; j < f.size(); ++j)
    diff[j] = lhs[j] - vg.v(static_cast<int>(j)) * df[j];
  return l2_norm_v(diff, h.grid) / nf;
}

std::vector<cplx> spectral_derivative(const std::vector<cplx>& f,
                                      const XiGrid& grid) {
  auto hat = v_to_xi(f, grid);
  for (int m = 0; m < grid.n_nodes(); ++m)
    hat[static_cast<std::size_t>(m)] *= cplx(0.0, grid.xi(m));
  return xi_to_v(hat, grid);
}

std::vector<cplx> commutator_fp(const WaveOperatorHandle& h,
                                const std::vector<cplx>& f) {
  check_size(h, f, "commutator_fp");
  const auto& vg = h.grid;
  const auto fokker_planck = [&vg](const std::vector<cplx>& u) {
    // L u = u'' + (v u)'
    auto du = spectral_derivative(u, vg);
    std::vector<cplx> vu(u.size());
    for (std::size_t j = 0; j < u.size(); ++j)
      vu[j] = vg.v(static_cast<int>(j)) * u[j];
    const auto ddu = spectral_derivative(du, vg);
    const auto dvu = spectral_derivative(vu, vg);
    std::vector<cplx> out(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) out[j] = ddu[j] + dvu[j];
    return out;
  };
  const auto d_of_l = apply_wave(h, fokker_planck(f));
  const auto l_of_d = fokker_planck(apply_wave(h, f));
  std::vector<cplx> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = d_of_l[j] - l_of_d[j];
  return out;
}

double l2_norm_v(const std::vector<cplx>& f, const XiGrid& grid) {
  require(static_cast<int>(f.size()) == grid.n_nodes(),
          "l2_norm_v: sample count does not match grid");
  std::vector<double> sq(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) sq[j] = std::norm(f[j]);
  return std::sqrt(trapz(sq, grid.dv()));
}

}  // namespace vpfp
