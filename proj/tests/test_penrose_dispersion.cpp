#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <vector>

#include "vpfp/backgrounds.hpp"
#include "vpfp/dispersion.hpp"
#include "vpfp/grid.hpp"
#include "vpfp/penrose.hpp"
#include "vpfp/transforms.hpp"
#include "vpfp/util.hpp"

using namespace vpfp;

namespace {

// Plain Newton on Psi(., M) from a real seed; independent of the
// continuation tracker, used to cross-check its slope at the anchor.
double newton_root(const BackgroundSet& set, double M, double seed) {
  cplx lam(seed, 0.0);
  for (int it = 0; it < 60; ++it) {
    const cplx step = psi_eval(set, lam, M) / psi_dlambda(set, lam, M);
    lam -= step;
    if (std::abs(step) < 1e-14) break;
  }
  REQUIRE(std::abs(psi_eval(set, lam, M)) < 1e-11);
  return lam.real();
}

double F_of(double lam) {
  return std::exp(0.5 * lam * lam) * std::sqrt(0.5 * pi) *
         std::erfc(lam / std::sqrt(2.0));
}

}  // namespace

TEST_CASE("pointwise response: parity, structure, and the density identity") {
  for (int k = 1; k <= 4; ++k) {
    for (const double u : {0.0, 0.37, 1.0, 2.48, 5.5}) {
      const PenroseValues plus = penrose_eval(k, u);
      const PenroseValues minus = penrose_eval(k, -u);
      CHECK(plus.P == doctest::Approx(minus.P).epsilon(1e-15));  // even
      CHECK(plus.Q == doctest::Approx(-minus.Q).epsilon(1e-15));  // odd
      CHECK(plus.W ==
            doctest::Approx(plus.P * plus.P + plus.Q * plus.Q).epsilon(1e-15));
      CHECK(plus.W > 0.0);
      CHECK(plus.K == doctest::Approx(plus.P / plus.W - 1.0).epsilon(1e-14));

      // Q_k(u) = -(pi / k^2) mu'(u) for the unit Maxwellian
      // mu = e^{-u^2/2} / sqrt(2 pi): an exact identity, not a fit.
      const double mu_prime = -u * std::exp(-0.5 * u * u) / std::sqrt(2.0 * pi);
      CHECK(plus.Q == doctest::Approx(-pi / (k * k) * mu_prime)
                          .epsilon(1e-14));
    }
    const PenroseValues origin = penrose_eval(k, 0.0);
    CHECK(origin.P == doctest::Approx(1.0 + 1.0 / (k * k)).epsilon(1e-15));
    CHECK(origin.Q == 0.0);
  }

  // Pinned band for the k = 1 dip: min_u P_1 sits just above 0.7.
  double minP = 10.0;
  for (int i = 0; i <= 40000; ++i)
    minP = std::min(minP, penrose_eval(1, -8.0 + 16.0 * i / 40000.0).P);
  CHECK(minP > 0.70);
  CHECK(minP < 0.73);
}

TEST_CASE("P - 1 and Q are a Hilbert pair") {
  // H[Q_k](u) = -(P_k(u) - 1) with the convention
  // H[f](u) = (1/pi) PV int f(w)/(u - w) dw.  Q decays like a Gaussian, so
  // the image-corrected velocity-side transform applies directly; P - 1
  // itself decays only like u^{-2} and must stay on the output side.
  const XiGrid grid(24.0, 512);
  const int k = 1;
  std::vector<cplx> q(grid.n_nodes());
  for (int j = 0; j < grid.n_nodes(); ++j)
    q[static_cast<std::size_t>(j)] = penrose_eval(k, grid.v(j)).Q;
  const auto hq = hilbert_velocity(q, grid);
  double worst = 0.0;
  for (int j = 0; j < grid.n_nodes(); ++j) {
    const double target = -(penrose_eval(k, grid.v(j)).P - 1.0);
    worst = std::max(worst,
                     std::abs(hq[static_cast<std::size_t>(j)] - target));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("weighted response reduces to the Maxwellian one at M = 0") {
  const BackgroundSet set(default_bump(), 0.0, 0.1);
  for (int k = 1; k <= 3; ++k)
    for (const double u : {0.0, 0.9, 3.1}) {
      const PenroseValues a = penrose_eval(k, u);
      const PenroseValues b = penrose_eval_weighted(k, u, set);
      CHECK(b.P == doctest::Approx(a.P).epsilon(1e-14));
      CHECK(b.Q == doctest::Approx(a.Q).epsilon(1e-14));
      CHECK(b.W == doctest::Approx(a.W).epsilon(1e-14));
    }

  const XiGrid grid(16.0, 128);
  const PenroseTable plain = make_penrose_table(2, grid);
  const PenroseTable weighted = make_penrose_table(2, grid, &set);
  CHECK(plain.weighted == false);
  CHECK(weighted.weighted == true);
  for (int j = 0; j < grid.n_nodes(); ++j)
    CHECK(weighted.P[static_cast<std::size_t>(j)] ==
          doctest::Approx(plain.P[static_cast<std::size_t>(j)])
              .epsilon(1e-14));
}

TEST_CASE("stability margin: scan route against the quadrature route") {
  const std::vector<int> ks{1, 2, 3, 4};
  const MarginReport closed = penrose_margin_maxwellian(ks);
  CHECK(closed.margin > 0.0);
  CHECK(closed.tail_floor > 0.0);
  CHECK(closed.k_at_min == 1);  // the 1/k^2 response is largest at k = 1

  const MarginReport quad = penrose_margin_maxwellian_quad(ks);
  // The two scans use different resolutions, so the minima can sit on
  // different nodes; they must still agree to scan accuracy...
  CHECK(std::abs(quad.margin - closed.margin) <= 5e-3);
  // ...and the quadrature minimum must equal the closed form evaluated at
  // its own (k, omega) location to quadrature accuracy.
  const double u_star = -quad.omega_at_min / std::abs(quad.k_at_min);
  CHECK(quad.margin ==
        doctest::Approx(std::sqrt(penrose_eval(quad.k_at_min, u_star).W))
            .epsilon(1e-7));
}

TEST_CASE("dispersion function: anchored values") {
  // Psi(0, 0) = 1 + Lg(0) = 2 and Psi(1, 0) = 2 - F(1) with
  // F(lam) = e^{lam^2/2} sqrt(pi/2) erfc(lam/sqrt 2); at M = 0 the bump
  // plays no role, so these pin the Maxwellian block alone.
  const BackgroundSet set(default_bump(), 1.0, 0.1);
  CHECK(std::abs(psi_eval(set, cplx(0.0, 0.0), 0.0) - cplx(2.0, 0.0)) <=
        1e-12);
  CHECK(std::abs(psi_eval(set, cplx(1.0, 0.0), 0.0) -
                 cplx(2.0 - F_of(1.0), 0.0)) <= 1e-10);

  // Neutral anchor in closed form: for the default bump
  // M0 = -2 / (B1 + gamma^2 m_sigma) = 1 / (1 + 2 gamma^2).
  for (const double gamma : {0.05, 0.1, 0.2}) {
    const BackgroundSet s(default_bump(), 1.0, gamma);
    const double M0 = m0_anchor(s);
    CHECK(M0 == doctest::Approx(1.0 / (1.0 + 2.0 * gamma * gamma))
                    .epsilon(1e-10));
    CHECK(std::abs(psi_eval(s, cplx(0.0, 0.0), M0)) <= 1e-12);
  }
}

TEST_CASE("dispersion function: derivative against finite differences") {
  const BackgroundSet set(default_bump(), 1.0, 0.1);
  const double M = 0.8;
  const double h = 1e-5;
  for (const cplx lam : {cplx(0.05, 0.0), cplx(0.2, 0.03)}) {
    const cplx fd_re =
        (psi_eval(set, lam + h, M) - psi_eval(set, lam - h, M)) / (2.0 * h);
    const cplx d = psi_dlambda(set, lam, M);
    CHECK(std::abs(fd_re - d) <= 1e-6 * std::abs(d));
    // Analyticity: the same derivative along the imaginary direction.
    const cplx fd_im = (psi_eval(set, lam + cplx(0.0, h), M) -
                        psi_eval(set, lam - cplx(0.0, h), M)) /
                       cplx(0.0, 2.0 * h);
    CHECK(std::abs(fd_im - d) <= 1e-6 * std::abs(d));
  }
}

TEST_CASE("root curve: slope at the anchor against an independent Newton") {
  const BackgroundSet set(default_bump(), 1.0, 0.1);
  const double M0 = m0_anchor(set);
  const double slope = eigen_ode_rhs(set, 0.0, M0);
  CHECK(slope > 0.0);

  const double dM = 0.02;
  const double lam_plus = newton_root(set, M0 + dM, slope * dM);
  const double lam_minus = newton_root(set, M0 - dM, -slope * dM);
  CHECK(lam_plus > 0.0);
  CHECK(lam_minus < 0.0);
  const double secant = (lam_plus - lam_minus) / (2.0 * dM);
  CHECK(secant == doctest::Approx(slope).epsilon(1e-3));
}

TEST_CASE("continuation: path contract and target root") {
  const BackgroundSet set(default_bump(), 1.0, 0.1);
  const double M0 = m0_anchor(set);
  const EigenSolution sol = continue_eigenvalue(set, M0 + 0.5);

  CHECK(sol.M0 == doctest::Approx(M0).epsilon(1e-14));
  CHECK(sol.M == doctest::Approx(M0 + 0.5).epsilon(1e-14));
  CHECK(sol.psi_residual <= 1e-11);
  CHECK(sol.max_path_residual <= 1e-10);
  CHECK(std::abs(sol.lambda.imag()) <= 1e-12);
  CHECK(sol.lambda.real() > 0.0);
  CHECK(sol.slope_at_M0 ==
        doctest::Approx(eigen_ode_rhs(set, 0.0, M0)).epsilon(1e-12));

  REQUIRE(sol.path.size() >= 8);
  CHECK(sol.path.front().first == doctest::Approx(M0).epsilon(1e-14));
  CHECK(sol.path.front().second == 0.0);
  for (std::size_t i = 1; i < sol.path.size(); ++i) {
    CHECK(sol.path[i].first > sol.path[i - 1].first);
    CHECK(sol.path[i].second >= sol.path[i - 1].second - 1e-12);
  }
  // The independent Newton lands on the same target root.
  CHECK(newton_root(set, M0 + 0.5, sol.lambda.real()) ==
        doctest::Approx(sol.lambda.real()).epsilon(1e-10));
}

TEST_CASE("eigenfunction: first-order ODE residual on the grid") {
  const double gamma = 0.0737;
  const double M0 = m0_anchor(BackgroundSet(default_bump(), 0.0, gamma));
  // The eigenfunction integrals must see the same background the eigenvalue
  // was continued on, i.e. the one at the target mass.
  const BackgroundSet set(default_bump(), M0 + 1.0, gamma);
  const EigenSolution sol = continue_eigenvalue(set, M0 + 1.0);
  REQUIRE(sol.lambda.real() > 0.05);

  const double xi_max = std::ceil(8.5 / gamma);
  const XiGrid grid(xi_max, 4096);
  const auto e = eigenfunction_hat(set, sol.lambda, grid);
  REQUIRE(e.size() == static_cast<std::size_t>(grid.n_nodes()));
  CHECK(e[static_cast<std::size_t>(grid.center())] == cplx(1.0, 0.0));
  // The left tail is the decaying homogeneous branch, so its edge value is
  // e^{-lambda_r xi_max} times an O(1) prefactor (measured ~2.3 here); the
  // right branch is accumulated outward-in and lands on exactly zero.
  CHECK(std::abs(e.front()) <=
        10.0 * std::exp(-sol.lambda.real() * xi_max));
  CHECK(std::abs(e.front()) <= 1e-3);
  CHECK(std::abs(e.back()) <= 1e-5);

  // e'(xi) = lambda e(xi) + xi f0_hat(xi), with e' from the 5-point stencil
  // (truncation ~ dxi^4 |e^(5)| / 30 ~ 1e-6 at this resolution).
  double escale = 0.0;
  for (const cplx& z : e) escale = std::max(escale, std::abs(z));
  double worst = 0.0;
  const double dxi = grid.dxi();
  for (int j = 2; j <= grid.n() - 2; ++j) {
    const std::size_t u = static_cast<std::size_t>(j);
    const cplx deriv =
        (-e[u + 2] + 8.0 * e[u + 1] - 8.0 * e[u - 1] + e[u - 2]) /
        (12.0 * dxi);
    const double xi = grid.xi(j);
    const cplx rhs = sol.lambda * e[u] + xi * set.f0_hat(xi);
    worst = std::max(worst, std::abs(deriv - rhs));
  }
  CHECK(worst / escale <= 2e-6);

  // Loose energy floor used by the instability experiment's seeding.
  double l2sq = 0.0;
  for (const cplx& z : e) l2sq += std::norm(z);
  l2sq *= dxi;
  CHECK(l2sq * gamma >= 0.05);

  // Too small a window for the bump tail must be refused.
  CHECK_THROWS(eigenfunction_hat(set, sol.lambda, XiGrid(50.0, 512)));
}

TEST_CASE("collisional margin: damping constant sizing is a power of two") {
  const double nu = 1e-4;
  const double gamma = std::pow(nu, 1.0 / 3.0 - 0.05);
  const BackgroundSet set(default_bump(), 1.0, gamma);
  const double M0 = m0_anchor(set);
  const BackgroundSet stable(default_bump(), 0.5 * M0, gamma);

  const double kappa0 = penrose_margin_maxwellian({1}).margin;
  REQUIRE(kappa0 > 0.0);
  const double C0 = size_C0(stable, nu, 1, kappa0);
  CHECK(C0 > 0.0);
  int exp2 = 0;
  CHECK(std::frexp(C0, &exp2) == 0.5);  // exact power of two

  const MarginReport coll =
      penrose_margin_collisional(stable, nu, {1}, C0);
  CHECK(coll.margin > 0.0);
  CHECK(coll.tail_floor > 0.0);
}

TEST_CASE("collisional dispersion: nu -> 0 limit and damped root") {
  // At nu = 0 the Laplace transform of the memory kernel and the
  // frequency-side function are the same object computed two ways.
  const BackgroundSet set(default_bump(), 1.0, 0.1);
  for (const double lam : {0.02, 0.1, 0.4}) {
    const double time_side = collisional_dispersion(set, 0.0, 1, lam);
    const double freq_side = psi_eval(set, cplx(lam, 0.0), set.M()).real();
    CHECK(std::abs(time_side - freq_side) <= 1e-9);
  }

  const double nu = 1e-4;
  const double gamma = std::pow(nu, 1.0 / 3.0 - 0.05);
  const BackgroundSet probe(default_bump(), 0.0, gamma);
  const double M0 = m0_anchor(probe);
  const BackgroundSet unstable(default_bump(), M0 + 1.0, gamma);
  const EigenSolution sol = continue_eigenvalue(unstable, M0 + 1.0);
  const double lambda_r = sol.lambda.real();

  // Collisionless secant lands on the continuation's root even from a
  // deliberately offset start.
  CHECK(collisional_rate(unstable, 0.0, 1, 0.7 * lambda_r) ==
        doctest::Approx(lambda_r).epsilon(1e-8));

  // Collisions drag the root left; the relative shift closes like
  // nu^{3 eps0} (about 6% of lambda_r at nu = 1e-4).  An independent
  // product-trapezoidal solve of the memory equation realizes the same
  // rate, so the band below is pinned, not aspirational.
  const double r_nu = collisional_rate(unstable, nu, 1, lambda_r);
  CHECK(r_nu < lambda_r);
  const double shift = (lambda_r - r_nu) / lambda_r;
  CHECK(shift >= 0.02);
  CHECK(shift <= 0.20);
}

TEST_CASE("collisional neutral mass") {
  // Along the matched path gamma = nu^{1/3 - eps0} the collisional
  // reshaping of the memory kernel displaces the neutral mass from the
  // collisionless anchor by at most a few percent.  The displacement is a
  // near-cancellation between the damping of the bump's two lobes; its
  // sign flips with nu (above the anchor at 1e-3, below at 1e-4) and it
  // relaxes only on the nu^{3 eps0} scale, so only the band and the exact
  // root property are stable things to pin.
  for (const double nu : {1e-3, 1e-4, 1e-5}) {
    const double gamma = std::pow(nu, 1.0 / 3.0 - 0.05);
    const BackgroundSet probe(default_bump(), 0.0, gamma);
    const double M0 = m0_anchor(probe);
    const double m_star = collisional_neutral_mass(probe, nu, 1);
    CHECK(std::abs(m_star / M0 - 1.0) <= 0.05);
    const BackgroundSet at_star(default_bump(), m_star, gamma);
    CHECK(std::abs(collisional_dispersion(at_star, nu, 1, 0.0)) <= 1e-10);
  }
}
