#include "vpfp/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

namespace vpfp {
namespace {

// 15-point Kronrod rule with its embedded 7-point Gauss rule.  Boost ships
// the node/weight tables; the nonnegative abscissas come back ascending with
// the Gauss-7 points at even indices, so one pass yields both sums.
struct GK15 {
  static const GK15& instance() {
    static GK15 g;
    return g;
  }

  // Integrates f over [a, b]; returns Kronrod value and |K - G| deviation.
  std::pair<cplx, double> apply(const std::function<cplx(double)>& f, double a,
                                double b) const {
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    cplx k_sum(0.0, 0.0), g_sum(0.0, 0.0);
    for (size_t i = 0; i < kx_.size(); ++i) {
      const double x = kx_[i];
      cplx val;
      if (x == 0.0) {
        val = f(mid);
      } else {
        val = f(mid + half * x) + f(mid - half * x);
      }
      k_sum += kw_[i] * val;
      if (i % 2 == 0) g_sum += gw_[i / 2] * val;
    }
    return {half * k_sum, std::abs(half * (k_sum - g_sum))};
  }

 private:
  GK15() {
    using boost::math::quadrature::gauss;
    using boost::math::quadrature::gauss_kronrod;
    const auto& ka = gauss_kronrod<double, 15>::abscissa();
    const auto& kw = gauss_kronrod<double, 15>::weights();
    const auto& gw = gauss<double, 7>::weights();
    kx_.assign(ka.begin(), ka.end());
    kw_.assign(kw.begin(), kw.end());
    gw_.assign(gw.begin(), gw.end());
    require(kx_.size() == 8 && gw_.size() == 4, "GK15: unexpected table size");
    require(kx_[0] == 0.0, "GK15: expected center node first");
  }

  std::vector<double> kx_, kw_, gw_;
};

struct Panel {
  double a, b;
  cplx value;
  double err;
  bool operator<(const Panel& o) const {
    if (err != o.err) return err > o.err;  // largest error first
    if (a != o.a) return a < o.a;
    return b < o.b;
  }
};

}  // namespace

LaplaceResult laplace_semiinf(const std::function<cplx(double)>& f, cplx lambda,
                              const LaplaceEnvelope& env,
                              const LaplaceOptions& opts) {
  require(env.amplitude >= 0.0, "laplace_semiinf: negative envelope amplitude");
  require(env.poly_degree >= 0, "laplace_semiinf: negative poly degree");
  require(opts.initial_panels >= 1 && opts.max_panels >= opts.initial_panels,
          "laplace_semiinf: bad panel counts");

  const double re = lambda.real();
  if (env.amplitude == 0.0) return {};

  // Combined tail bound after truncation at T:
  //   exponential: A (1+T)^p e^{-(rate+re) T} / (rate+re)
  //   gaussian:    A (1+T)^p e^{-rate T^2/2 - re T} / (rate*T + re)
  const auto tail_bound = [&](double T) -> double {
    const double p = env.poly_degree ? std::pow(1.0 + T, env.poly_degree) : 1.0;
    if (env.shape == LaplaceEnvelope::Shape::exponential) {
      const double sigma = env.rate + re;
      if (sigma <= 0.0) return std::numeric_limits<double>::infinity();
      return env.amplitude * p * std::exp(-sigma * T) / sigma;
    }
    const double denom = env.rate * T + re;
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    return env.amplitude * p * std::exp(-0.5 * env.rate * T * T - re * T) /
           denom;
  };

  const double tol_abs = std::max(opts.rel_tol * env.amplitude, 1e-300);
  double T = 1.0;
  while (T < 1e6 && tail_bound(T) > 0.25 * tol_abs) T *= 1.5;
  if (tail_bound(T) > 0.25 * tol_abs)
    fail_domain(
        "laplace_semiinf: envelope plus Re(lambda) do not give a convergent "
        "tail");

  // The integrand handed to the panels; also polices the declared envelope.
  const auto g = [&](double t) -> cplx {
    const cplx ft = f(t);
    const double bound = env.bound(t);
    const double mag = std::abs(ft);
    if (!std::isfinite(mag))
      fail("laplace_semiinf: integrand is not finite at t=" + fmt_g17(t));
    if (mag > opts.envelope_slack * bound + 1e-290)
      fail_domain(strf(
          "laplace_semiinf: integrand magnitude %.3g at t=%.6g exceeds the "
          "declared envelope %.3g by more than slack %.2g",
          mag, t, bound, opts.envelope_slack));
    return std::exp(-lambda * t) * ft;
  };

  const GK15& rule = GK15::instance();
  std::set<Panel> panels;
  cplx total(0.0, 0.0);
  double total_err = 0.0;
  const double h0 = T / opts.initial_panels;
  for (int i = 0; i < opts.initial_panels; ++i) {
    const double a = h0 * i, b = (i + 1 == opts.initial_panels) ? T : h0 * (i + 1);
    auto [val, err] = rule.apply(g, a, b);
    panels.insert({a, b, val, err});
    total += val;
    total_err += err;
  }

  while (opts.adapt && static_cast<int>(panels.size()) < opts.max_panels) {
    const double target =
        std::max({opts.rel_tol * std::abs(total), 0.25 * tol_abs, 1e-305});
    if (total_err <= target) break;
    Panel worst = *panels.begin();
    panels.erase(panels.begin());
    total -= worst.value;
    total_err -= worst.err;
    const double mid = 0.5 * (worst.a + worst.b);
    for (const auto& [a, b] :
         {std::pair{worst.a, mid}, std::pair{mid, worst.b}}) {
      auto [val, err] = rule.apply(g, a, b);
      panels.insert({a, b, val, err});
      total += val;
      total_err += err;
    }
  }

  if (opts.adapt && total_err >
      std::max({opts.rel_tol * std::abs(total) * 16.0, tol_abs, 1e-305}))
    fail(strf("laplace_semiinf: failed to converge (err %.3g, %zu panels)",
              total_err, panels.size()));

  LaplaceResult res;
  res.value = total;
  res.error_estimate = total_err;
  res.truncation = T;
  res.panels = static_cast<int>(panels.size());
  return res;
}

}  // namespace vpfp
