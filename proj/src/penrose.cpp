#include "vpfp/penrose.hpp"

#include <gsl/gsl_sf_dawson.h>

#include <cmath>

#include "vpfp/quadrature.hpp"
#include "vpfp/semigroups.hpp"

namespace vpfp {
namespace {

constexpr double sqrt2 = 1.41421356237309504880168872420969808;

// Integration-by-parts tail floor: for |omega| > scan edge,
// |L[K](i omega)| <= (|K(0)| + integral |K'|) / |omega|, and K(0) = 0 for
// all kernels here.  For the Maxwellian kernel integral |K'| is
// 2 e^{-1/2} / k (exact); collisional kernels get a numeric value.
double maxwellian_tail_variation(int k) {
  return 2.0 * std::exp(-0.5) / std::abs(k);
}

}  // namespace

PenroseValues penrose_eval(int k, double u) {
  require(k != 0, "penrose_eval: k must be nonzero");
  const double k2 = static_cast<double>(k) * k;
  PenroseValues out;
  out.P = 1.0 + (1.0 - sqrt2 * u * gsl_sf_dawson(u / sqrt2)) / k2;
  out.Q = sqrt_pi_over_2 * u * std::exp(-0.5 * u * u) / k2;
  out.W = out.P * out.P + out.Q * out.Q;
  out.K = out.P / out.W - 1.0;
  return out;
}

PenroseValues penrose_eval_weighted(int k, double u,
                                    const BackgroundSet& set) {
  PenroseValues base = penrose_eval(k, u);
  const double shift = set.M() * set.gamma() * set.gamma() * set.bump().m_sigma;
  PenroseValues out;
  out.P = (base.P + shift) / set.norm();
  out.Q = base.Q / set.norm();
  out.W = out.P * out.P + out.Q * out.Q;
  out.K = out.P / out.W - 1.0;
  return out;
}

PenroseTable make_penrose_table(int k, const XiGrid& grid,
                                const BackgroundSet* set) {
  PenroseTable t;
  t.k = k;
  t.weighted = (set != nullptr);
  const int n = grid.n_nodes();
  t.P.resize(static_cast<size_t>(n));
  t.Q.resize(static_cast<size_t>(n));
  t.W.resize(static_cast<size_t>(n));
  t.K.resize(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double u = grid.v(j);
    const PenroseValues pv =
        set ? penrose_eval_weighted(k, u, *set) : penrose_eval(k, u);
    t.P[static_cast<size_t>(j)] = pv.P;
    t.Q[static_cast<size_t>(j)] = pv.Q;
    t.W[static_cast<size_t>(j)] = pv.W;
    t.K[static_cast<size_t>(j)] = pv.K;
  }
  return t;
}

MarginReport penrose_margin_maxwellian(const std::vector<int>& k_set,
                                       double omega_max, int n_scan) {
  require(!k_set.empty(), "margin: empty wavenumber set");
  require(n_scan >= 3, "margin: need at least 3 scan points");
  MarginReport rep;
  rep.margin = 1e300;
  rep.tail_floor = 1e300;
  for (int k : k_set) {
    require(k != 0, "margin: k must be nonzero");
    for (int i = 0; i < n_scan; ++i) {
      const double omega = -omega_max + 2.0 * omega_max * i / (n_scan - 1);
      const PenroseValues pv = penrose_eval(k, -omega / std::abs(k));
      const double m = std::sqrt(pv.W);
      if (m < rep.margin) {
        rep.margin = m;
        rep.k_at_min = k;
        rep.omega_at_min = omega;
      }
    }
    rep.tail_floor =
        std::min(rep.tail_floor,
                 1.0 - maxwellian_tail_variation(k) / omega_max);
  }
  return rep;
}

MarginReport penrose_margin_maxwellian_quad(const std::vector<int>& k_set,
                                            double omega_max, int n_scan) {
  require(!k_set.empty(), "margin: empty wavenumber set");
  MarginReport rep;
  rep.margin = 1e300;
  rep.tail_floor = 1e300;
  for (int k : k_set) {
    require(k != 0, "margin: k must be nonzero");
    LaplaceEnvelope env;
    env.shape = LaplaceEnvelope::Shape::gaussian;
    env.rate = static_cast<double>(k) * k;
    env.amplitude = 1.0;
    env.poly_degree = 1;
    const auto kernel = [&](double t) -> cplx {
      return -t * std::exp(-0.5 * sq(k * t));
    };
    for (int i = 0; i < n_scan; ++i) {
      const double omega = -omega_max + 2.0 * omega_max * i / (n_scan - 1);
      const cplx L = laplace_semiinf(kernel, cplx(0.0, omega), env).value;
      const double m = std::abs(1.0 - L);
      if (m < rep.margin) {
        rep.margin = m;
        rep.k_at_min = k;
        rep.omega_at_min = omega;
      }
    }
    rep.tail_floor =
        std::min(rep.tail_floor,
                 1.0 - maxwellian_tail_variation(k) / omega_max);
  }
  return rep;
}

namespace {

// Total variation of t -> e^{-shift t} K(t) on [0, inf), by dense sampling
// of the derivative (central differences on a fine grid out to where the
// damped kernel is negligible).
double damped_kernel_variation(const BackgroundSet& set, double nu, int k,
                               double shift, BackgroundPart part) {
  const double T = std::max(4.0, 40.0 / std::max(shift, 1e-3));
  const int n = 40000;
  const double h = T / n;
  double tv = 0.0;
  double prev = 0.0;  // kernel(0) = 0
  for (int i = 1; i <= n; ++i) {
    const double t = h * i;
    const double cur =
        std::exp(-shift * t) * volterra_kernel(set, nu, k, t, part);
    tv += std::abs(cur - prev);
    prev = cur;
  }
  return tv + std::abs(prev);
}

}  // namespace

MarginReport penrose_margin_collisional(const BackgroundSet& set, double nu,
                                        const std::vector<int>& k_set,
                                        double C0, double omega_max,
                                        int n_scan) {
  require(!k_set.empty(), "margin: empty wavenumber set");
  require(nu >= 0.0, "margin: nu must be >= 0");
  require(C0 > 0.0, "margin: C0 must be positive");
  const double shift = C0 * set.gamma();
  MarginReport rep;
  rep.margin = 1e300;
  rep.tail_floor = 1e300;
  LaplaceEnvelope env;
  env.shape = LaplaceEnvelope::Shape::exponential;
  env.rate = 0.0;  // |K| <= t_ap <= t; decay comes from Re(lambda) = shift
  env.amplitude = 1.0;
  env.poly_degree = 1;
  for (int k : k_set) {
    require(k != 0, "margin: k must be nonzero");
    const auto kernel = [&](double t) -> cplx {
      return volterra_kernel(set, nu, k, t, BackgroundPart::f0);
    };
    for (int i = 0; i < n_scan; ++i) {
      const double omega = -omega_max + 2.0 * omega_max * i / (n_scan - 1);
      const cplx L = laplace_semiinf(kernel, cplx(shift, omega), env).value;
      const double m = std::abs(1.0 - L);
      if (m < rep.margin) {
        rep.margin = m;
        rep.k_at_min = k;
        rep.omega_at_min = omega;
      }
    }
    const double tv =
        damped_kernel_variation(set, nu, k, shift, BackgroundPart::f0);
    rep.tail_floor = std::min(rep.tail_floor, 1.0 - tv / omega_max);
  }
  return rep;
}

double size_C0(const BackgroundSet& set, double nu, int k, double kappa0,
               double omega_max) {
  require(kappa0 > 0.0, "size_C0: kappa0 must be positive");
  LaplaceEnvelope env;
  env.shape = LaplaceEnvelope::Shape::exponential;
  env.rate = 0.0;
  env.amplitude = 1.0;
  env.poly_degree = 1;
  // Bump part of the kernel: full minus the Gaussian (mu1) part.
  const auto bump_kernel = [&](double t) -> cplx {
    return volterra_kernel(set, nu, k, t, BackgroundPart::f0) -
           volterra_kernel(set, nu, k, t, BackgroundPart::mu1);
  };
  for (double C0 = 2.0; C0 <= 4096.0; C0 *= 2.0) {
    const double shift = C0 * set.gamma();
    double sup = 0.0;
    const int n_scan = 201;
    for (int i = 0; i < n_scan; ++i) {
      const double omega = -omega_max + 2.0 * omega_max * i / (n_scan - 1);
      sup = std::max(sup, std::abs(laplace_semiinf(bump_kernel,
                                                   cplx(shift, omega), env)
                                       .value));
    }
    if (sup <= kappa0 / 5.0) return C0;
  }
  fail("size_C0: no admissible damping constant up to 4096");
}

}  // namespace vpfp
