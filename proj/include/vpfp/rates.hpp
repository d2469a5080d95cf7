#pragma once

// Exponential-rate extraction from positive time series: least squares of
// ln y against t over a window.  The r^2 of the log-linear fit doubles as a
// "was this actually exponential" diagnostic for the experiment verdicts.

#include <cmath>
#include <vector>

#include "vpfp/util.hpp"

namespace vpfp {

struct RateFit {
  double rate = 0.0;       // slope of ln y
  double intercept = 0.0;  // ln y extrapolated to t = 0
  double r2 = 1.0;
  int n_points = 0;

  double amplitude_at(double t) const {
    return std::exp(intercept + rate * t);
  }
};

inline RateFit fit_exponential_rate(const std::vector<double>& t,
                                    const std::vector<double>& y,
                                    double t_lo, double t_hi) {
  require(t.size() == y.size(), "fit_exponential_rate: length mismatch");
  require(t_lo < t_hi, "fit_exponential_rate: empty window");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int n = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    require(y[i] > 0.0,
            strf("fit_exponential_rate: nonpositive sample %.6g at t=%.6g",
                 y[i], t[i]));
    const double ly = std::log(y[i]);
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
    ++n;
  }
  require(n >= 3, "fit_exponential_rate: fewer than 3 samples in window");
  const double det = n * sxx - sx * sx;
  require(det > 0.0, "fit_exponential_rate: degenerate time samples");

  RateFit fit;
  fit.n_points = n;
  fit.rate = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.rate * sx) / n;

  double ss_res = 0.0, ss_tot = 0.0;
  const double mean = sy / n;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    const double ly = std::log(y[i]);
    const double pred = fit.intercept + fit.rate * t[i];
    ss_res += sq(ly - pred);
    ss_tot += sq(ly - mean);
  }
  fit.r2 = (ss_tot > 0.0) ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace vpfp
