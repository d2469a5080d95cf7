#include "vpfp/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "vpfp/quadrature.hpp"
#include "vpfp/semigroups.hpp"

namespace vpfp {

namespace {

// Gaussian half-line moments
//
//   Lg (lambda) = integral_0^inf t   e^{-lambda t - t^2/2} dt = 1 - lambda F
//   Lg2(lambda) = integral_0^inf t^2 e^{-lambda t - t^2/2} dt
//               = (1 + lambda^2) F - lambda
//
// with F(lambda) = e^{lambda^2/2} sqrt(pi/2) erfc(lambda / sqrt 2),
// obtained by completing the square and integrating by parts once.  The
// erfc route is exact for real lambda; off the real axis we fall back to
// the adaptive Laplace quadrature (std::erfc is real-only), which the unit
// tests pin against the closed form where both apply.
double gauss_f_factor(double lambda) {
  return std::exp(0.5 * lambda * lambda) * sqrt_pi_over_2 *
         std::erfc(lambda / std::sqrt(2.0));
}

LaplaceOptions tight_opts() {
  LaplaceOptions opts;
  opts.rel_tol = 1e-14;
  return opts;
}

cplx gauss_moment(int power, cplx lambda) {
  if (lambda.imag() == 0.0) {
    const double f = gauss_f_factor(lambda.real());
    const double lr = lambda.real();
    return (power == 1) ? cplx(1.0 - lr * f, 0.0)
                        : cplx((1.0 + lr * lr) * f - lr, 0.0);
  }
  LaplaceEnvelope env;
  env.shape = LaplaceEnvelope::Shape::gaussian;
  env.amplitude = 1.0;
  env.rate = 1.0;
  env.poly_degree = power;
  const auto res = laplace_semiinf(
      [power](double t) {
        return cplx((power == 1 ? t : t * t) * std::exp(-0.5 * t * t), 0.0);
      },
      lambda, env, tight_opts());
  return res.value;
}

// Bump response moments in rescaled time,
//
//   B1(L) = integral_0^inf e^{-L u} u   sigma_hat(u) du,
//   B2(L) = integral_0^inf e^{-L u} u^2 sigma_hat(u) du,
//
// evaluated by quadrature under the profile's declared decay envelope.
cplx bump_moment(const BumpProfile& bump, int power, cplx big_lambda) {
  LaplaceEnvelope env;
  env.shape = LaplaceEnvelope::Shape::gaussian;
  env.amplitude = bump.env_amplitude;
  env.rate = bump.env_rate;
  env.poly_degree = power;
  const auto& sigma = bump.sigma_hat;
  const auto res = laplace_semiinf(
      [power, &sigma](double u) {
        return cplx((power == 1 ? u : u * u) * sigma(u), 0.0);
      },
      big_lambda, env, tight_opts());
  return res.value;
}

double mass_norm(const BackgroundSet& set, double M) {
  const double g = set.gamma();
  const double norm = 1.0 + M * g * g * set.bump().m_sigma;
  require_domain(norm > 0.0,
                 strf("dispersion: mass normalizer %.6g <= 0 at M=%.6g",
                      norm, M));
  return norm;
}

}  // namespace

cplx psi_eval(const BackgroundSet& set, cplx lambda, double M) {
  const double g = set.gamma();
  const cplx lg = gauss_moment(1, lambda);
  const cplx b1 = bump_moment(set.bump(), 1, lambda / g);
  return 1.0 + (lg + M * b1) / mass_norm(set, M);
}

cplx psi_dlambda(const BackgroundSet& set, cplx lambda, double M) {
  const double g = set.gamma();
  const cplx lg2 = gauss_moment(2, lambda);
  const cplx b2 = bump_moment(set.bump(), 2, lambda / g);
  return -(lg2 + M * b2 / g) / mass_norm(set, M);
}

double m0_anchor(const BackgroundSet& set) {
  const double g = set.gamma();
  const double denom = set.bump().B1 + g * g * set.bump().m_sigma;
  require(denom < 0.0, "m0_anchor: B1 + gamma^2 m_sigma must be negative");
  return -2.0 / denom;
}

double eigen_ode_rhs(const BackgroundSet& set, double lambda, double M) {
  const double g = set.gamma();
  const cplx big_lambda(lambda / g, 0.0);
  const double lg = gauss_moment(1, cplx(lambda, 0.0)).real();
  const double lg2 = gauss_moment(2, cplx(lambda, 0.0)).real();
  const double b1 = bump_moment(set.bump(), 1, big_lambda).real();
  const double b2 = bump_moment(set.bump(), 2, big_lambda).real();
  const double m_sigma = set.bump().m_sigma;

  // Total derivative of Psi(lambda(M), M) = 0 along the root curve:
  //   dlambda/dM = N / D,
  //   N = B1(L) - gamma^2 m_sigma Lg(lambda)      (from d/dM at fixed lambda,
  //                                                norm factors folded in)
  //   D = norm(M) * (Lg2(lambda) + M B2(L)/gamma) (-norm * dPsi/dlambda)
  const double num = b1 - g * g * m_sigma * lg;
  const double den = mass_norm(set, M) * (lg2 + M * b2 / g);

  // The denominator stays away from zero while the root curve is regular;
  // the floor below is a conservative fraction of its anchor-scale size.
  const double floor =
      std::abs(set.bump().B2) / (8.0 * g * std::abs(set.bump().B1));
  require(std::abs(den) >= floor,
          strf("eigen_ode_rhs: root-curve denominator %.6g under floor %.6g "
               "(lambda=%.6g, M=%.6g)",
               den, floor, lambda, M));
  return num / den;
}

EigenSolution continue_eigenvalue(const BackgroundSet& set, double M_target,
                                  const ContinuationOptions& opts) {
  const double g = set.gamma();
  const double M0 = m0_anchor(set);
  require(M_target > M0 && M_target <= M0 + 1.0,
          strf("continue_eigenvalue: M_target=%.6g outside (M0, M0+1], "
               "M0=%.6g",
               M_target, M0));
  require(opts.steps >= 4, "continue_eigenvalue: need at least 4 steps");

  EigenSolution sol;
  sol.gamma = g;
  sol.M0 = M0;
  sol.M = M_target;
  sol.slope_at_M0 = eigen_ode_rhs(set, 0.0, M0);
  sol.path.reserve(static_cast<std::size_t>(opts.steps) + 1);
  sol.path.emplace_back(M0, 0.0);

  const double h = (M_target - M0) / opts.steps;
  double lambda = 0.0;
  double M = M0;
  for (int step = 0; step < opts.steps; ++step) {
    // RK4 predictor on dlambda/dM = N/D ...
    const double k1 = eigen_ode_rhs(set, lambda, M);
    const double k2 = eigen_ode_rhs(set, lambda + 0.5 * h * k1, M + 0.5 * h);
    const double k3 = eigen_ode_rhs(set, lambda + 0.5 * h * k2, M + 0.5 * h);
    const double k4 = eigen_ode_rhs(set, lambda + h * k3, M + h);
    lambda += h * (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
    M += h;

    // ... then polish the node with Newton on Psi so the path never drifts.
    double residual = std::abs(psi_eval(set, cplx(lambda, 0.0), M).real());
    for (int it = 0; it < opts.newton_max_iter; ++it) {
      if (residual <= opts.newton_tol) break;
      const double psi = psi_eval(set, cplx(lambda, 0.0), M).real();
      const double dpsi = psi_dlambda(set, cplx(lambda, 0.0), M).real();
      require(std::abs(dpsi) > 1e-12,
              "continue_eigenvalue: Newton derivative vanished");
      const double delta = psi / dpsi;
      lambda -= delta;
      residual = std::abs(psi_eval(set, cplx(lambda, 0.0), M).real());
      if (std::abs(delta) <= 1e-15 * std::max(1.0, std::abs(lambda))) break;
    }
    require(residual <= 10.0 * opts.newton_tol,
            strf("continue_eigenvalue: Newton stalled at |Psi|=%.3g "
                 "(M=%.6g, lambda=%.6g)",
                 residual, M, lambda));
    sol.max_path_residual = std::max(sol.max_path_residual, residual);

    // The tracked root is real by construction; tiny negative excursions
    // near the anchor are roundoff and get clamped, anything larger is a
    // genuine failure of the branch.
    require(lambda >= -1e-9,
            strf("continue_eigenvalue: lambda=%.6g left the real positive "
                 "branch at M=%.6g",
                 lambda, M));
    lambda = std::max(lambda, 0.0);
    sol.path.emplace_back(M, lambda);
  }

  sol.lambda = cplx(lambda, 0.0);
  // Real-axis tracking keeps Im lambda identically zero, so the root box
  // |Im lambda| <= box_delta * gamma holds by construction; assert the
  // contract once on the result rather than per node.
  require(std::abs(sol.lambda.imag()) <= opts.box_delta * g,
          "continue_eigenvalue: imaginary part escaped the root box");
  sol.psi_residual = std::abs(psi_eval(set, sol.lambda, M_target));
  return sol;
}

std::vector<cplx> eigenfunction_hat(const BackgroundSet& set, cplx lambda,
                                    const XiGrid& grid) {
  const double g = set.gamma();
  require(g * grid.xi_max() >= 8.0,
          strf("eigenfunction_hat: gamma*xi_max=%.3g < 8, bump tail would "
               "be truncated",
               g * grid.xi_max()));
  require(std::abs(lambda.real()) * grid.xi_max() < 700.0,
          "eigenfunction_hat: exponential factor would overflow");

  // Integrate  e'(xi) = lambda e(xi) + xi f0_hat(xi)  by variation of
  // constants.  The branch that decays as xi -> +inf is
  //     e(xi) = -e^{lambda xi} integral_xi^inf  zeta e^{-lambda zeta}
  //                                             f0_hat(zeta) dzeta,
  // and the branch through e(0) = 1 on the left half-line is
  //     e(xi) =  e^{lambda xi} [1 + integral_0^xi zeta e^{-lambda zeta}
  //                                             f0_hat(zeta) dzeta].
  // Both integrals are accumulated cell by cell with 4-point Gauss-Legendre,
  // outward-in on the right so each partial sum is itself the tail integral
  // it multiplies.
  static const double gl_x[4] = {-0.8611363115940526, -0.3399810435848563,
                                 0.3399810435848563, 0.8611363115940526};
  static const double gl_w[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};
  const auto weight = [&](double z) -> cplx {
    return z * std::exp(-lambda * z) * set.f0_hat(z);
  };
  const auto cell = [&](double a, double b) -> cplx {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    cplx acc(0.0, 0.0);
    for (int q = 0; q < 4; ++q) acc += gl_w[q] * weight(mid + half * gl_x[q]);
    return half * acc;
  };

  const int n = grid.n();
  const int c = grid.center();
  std::vector<cplx> out(static_cast<std::size_t>(n) + 1);

  // Right half: tail integral accumulated right-to-left, dropped remainder
  // beyond xi_max is below the gamma*xi_max >= 8 guard.
  cplx tail(0.0, 0.0);
  out[n] = cplx(0.0, 0.0);
  for (int j = n - 1; j >= c; --j) {
    tail += cell(grid.xi(j), grid.xi(j + 1));
    out[j] = -std::exp(lambda * grid.xi(j)) * tail;
  }

  // Branch consistency at the matching point: for a root of Psi the right
  // branch lands on 1 up to |Psi| plus quadrature error.
  const double mismatch = std::abs(out[c] - cplx(1.0, 0.0));
  require(mismatch <= 1e-6,
          strf("eigenfunction_hat: branch mismatch %.3g at xi=0; lambda is "
               "not a dispersion root for this background",
               mismatch));

  // Left half through e(0) = 1.
  out[c] = cplx(1.0, 0.0);
  cplx run(0.0, 0.0);  // integral_0^{xi_j}, xi_j <= 0
  for (int j = c - 1; j >= 0; --j) {
    run -= cell(grid.xi(j), grid.xi(j + 1));
    out[j] = std::exp(lambda * grid.xi(j)) * (cplx(1.0, 0.0) + run);
  }
  return out;
}

double collisional_dispersion(const BackgroundSet& set, double nu, int k,
                              double lambda) {
  require(k != 0, "collisional_dispersion: k must be nonzero");
  require(nu >= 0.0, "collisional_dispersion: nu must be nonnegative");

  // Envelope for the Laplace transform of the memory kernel.  The kernel is
  //
  //   K_nu(t) = -s_coll(t) * t_ap(t) * f0_hat(k t_ap(t)),
  //
  // and f0_hat splits into a unit-width Maxwellian part decaying like
  // e^{-(k t_ap)^2 / 2} and a bump part bounded by the profile envelope at
  // argument gamma k t_ap.  With nu t <= 1/2 on the region that matters,
  // t_ap >= 0.78 t, so a Gaussian envelope with half the bump's nominal
  // rate at frequency gamma k underestimates no part of the decay; s_coll
  // <= 1 and t_ap <= t absorb the rest.  The prefactor follows from
  // |f0_hat| <= (1 + M gamma^2 amp) / norm and a factor-two margin.
  const BumpProfile& bump = set.bump();
  const double gk = set.gamma() * static_cast<double>(k);
  LaplaceEnvelope env;
  env.shape = LaplaceEnvelope::Shape::gaussian;
  env.rate = 0.5 * bump.env_rate * gk * gk;
  env.amplitude =
      2.0 * (1.0 + set.M() * set.gamma() * set.gamma() * bump.env_amplitude) /
      set.norm();
  env.poly_degree = 2;

  const auto kernel = [&](double t) {
    return cplx(volterra_kernel(set, nu, k, t), 0.0);
  };
  const LaplaceResult hat = laplace_semiinf(kernel, cplx(lambda, 0.0), env);
  return 1.0 - hat.value.real();
}

double collisional_rate(const BackgroundSet& set, double nu, int k,
                        double lambda0) {
  // Secant iteration on Psi_nu(lambda) = 0.  The collisionless root is an
  // excellent starter: collisions only drag the root left by an amount
  // small compared to the root itself in every regime the experiments
  // visit, and Psi_nu is analytic and monotone near the rightmost root.
  double a = lambda0;
  double b = lambda0 - std::max(0.05 * std::abs(lambda0), 1e-4);
  double fa = collisional_dispersion(set, nu, k, a);
  double fb = collisional_dispersion(set, nu, k, b);
  for (int iter = 0; iter < 60; ++iter) {
    if (std::abs(fb) <= 1e-11) {
      require(std::abs(b - lambda0) <= std::max(1.0, 2.0 * std::abs(lambda0)),
              "collisional_rate: root wandered far from the starting value");
      return b;
    }
    const double denom = fb - fa;
    require(denom != 0.0, "collisional_rate: flat secant");
    const double next = b - fb * (b - a) / denom;
    a = b;
    fa = fb;
    b = next;
    fb = collisional_dispersion(set, nu, k, b);
  }
  require(false, "collisional_rate: secant did not converge");
  return b;  // unreachable
}

double collisional_neutral_mass(const BackgroundSet& set, double nu, int k) {
  // Root in M of Psi_nu(0; M) = 0 at fixed bump and gamma.  Psi_nu(0; M)
  // is a Moebius function of M (the kernel is affine in M and the
  // normalization 1 + M gamma^2 m_sigma divides through), so it is
  // monotone on the admissible mass interval and the secant converges
  // fast.  Iterates are clamped to that interval: for m_sigma < 0 the
  // normalization vanishes at m_dom = -1 / (gamma^2 m_sigma).
  const double g2 = set.gamma() * set.gamma();
  const double m_sigma = set.bump().m_sigma;
  const double m_dom = (m_sigma < 0.0)
                           ? -1.0 / (g2 * m_sigma)
                           : std::numeric_limits<double>::infinity();
  const auto psi_at = [&](double mass) {
    const BackgroundSet trial(set.bump(), mass, set.gamma());
    return collisional_dispersion(trial, nu, k, 0.0);
  };
  const double anchor = m0_anchor(set);
  double a = anchor;
  double b = std::min(1.25 * anchor, 0.95 * m_dom);
  double fa = psi_at(a);
  double fb = psi_at(b);
  for (int iter = 0; iter < 80; ++iter) {
    if (std::abs(fb) <= 1e-11) return b;
    const double denom = fb - fa;
    require(denom != 0.0, "collisional_neutral_mass: flat secant");
    double next = b - fb * (b - a) / denom;
    next = std::clamp(next, 1e-3 * anchor, 0.98 * m_dom);
    a = b;
    fa = fb;
    b = next;
    fb = psi_at(b);
  }
  require(false, "collisional_neutral_mass: secant did not converge");
  return b;  // unreachable
}

}  // namespace vpfp
