#pragma once

// Laplace transforms on [0, infinity) of caller-supplied integrands,
//
//     L[f](lambda) = integral_0^inf e^{-lambda t} f(t) dt,
//
// by adaptive Gauss-Kronrod panels on a truncated interval [0, T].  The
// caller declares a decay envelope |f(t)| <= amp * (1+t)^deg * shape(t);
// T is then chosen so the *combined* decay shape(t) * e^{-Re(lambda) t}
// pushes the tail below tolerance.  Folding Re(lambda) into the truncation
// matters: integrands that barely decay on their own still truncate quickly
// when the transform abscissa supplies damping.  Integrand values that
// exceed the declared envelope by a wide margin raise an error (catches
// divergent or mis-declared integrands instead of returning garbage).

#include <complex>
#include <functional>

#include "vpfp/util.hpp"

namespace vpfp {

struct LaplaceEnvelope {
  enum class Shape { exponential, gaussian };
  Shape shape = Shape::exponential;
  double amplitude = 1.0;   // overall scale A
  double rate = 1.0;        // e^{-rate t} or e^{-rate t^2 / 2}
  int poly_degree = 0;      // polynomial factor (1 + t)^deg

  double bound(double t) const {
    const double p = poly_degree ? std::pow(1.0 + t, poly_degree) : 1.0;
    const double e = (shape == Shape::gaussian) ? std::exp(-0.5 * rate * t * t)
                                                : std::exp(-rate * t);
    return amplitude * p * e;
  }
};

struct LaplaceOptions {
  double rel_tol = 1e-12;
  int initial_panels = 8;    // uniform panels on [0, T] before refinement
  int max_panels = 4096;
  double envelope_slack = 8.0;  // |f| may exceed the envelope by this factor
  bool adapt = true;            // disable to study fixed-panel convergence
};

struct LaplaceResult {
  cplx value{0.0, 0.0};
  double error_estimate = 0.0;  // sum of Kronrod-Gauss deviations
  double truncation = 0.0;      // chosen T
  int panels = 0;
};

LaplaceResult laplace_semiinf(const std::function<cplx(double)>& f, cplx lambda,
                              const LaplaceEnvelope& env,
                              const LaplaceOptions& opts = {});

}  // namespace vpfp
