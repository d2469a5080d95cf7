#include "vpfp/simulator.hpp"

#include <algorithm>
#include <cmath>

namespace vpfp {

std::vector<cplx> electric_field(const SpectralField& state) {
  const int k_max = state.modes().k_max();
  std::vector<cplx> e(static_cast<std::size_t>(state.modes().count()));
  for (int k = -k_max; k <= k_max; ++k)
    e[static_cast<std::size_t>(state.modes().index_of(k))] =
        (k == 0) ? cplx(0.0, 0.0)
                 : cplx(0.0, -1.0) * state.rho(k) / static_cast<double>(k);
  return e;
}

namespace {

// Hermite basis on [0, 1].
inline double h00(double s) { return 1.0 + s * s * (2.0 * s - 3.0); }
inline double h10(double s) { return s * (1.0 + s * (s - 2.0)); }
inline double h01(double s) { return s * s * (3.0 - 2.0 * s); }
inline double h11(double s) { return s * s * (s - 1.0); }

}  // namespace

Simulator::Simulator(SpectralField initial, SimParams params)
    : params_(std::move(params)), state_(std::move(initial)) {
  const XiGrid& grid = state_.grid();
  require(params_.nu >= 0.0, "Simulator: nu must be >= 0");
  dt_ = (params_.dt > 0.0) ? params_.dt : grid.dxi();

  // Exact-shift condition: dt an integer number of xi cells.
  const double cells = dt_ / grid.dxi();
  shift_cells_ = static_cast<int>(std::lround(cells));
  require(shift_cells_ >= 1 && std::abs(cells - shift_cells_) < 1e-9,
          strf("Simulator: dt=%.9g is not an integer multiple of "
               "dxi=%.9g",
               dt_, grid.dxi()));

  require(params_.nu * dt_ * grid.xi_max() < 0.5,
          strf("Simulator: collisional contraction per step too strong "
               "(nu*dt*xi_max=%.3g >= 0.5)",
               params_.nu * dt_ * grid.xi_max()));
  if (params_.t_end > 0.0 && !params_.allow_long_horizon)
    require(params_.nu * params_.t_end <= 1.0,
            strf("Simulator: nu*t_end=%.3g > 1; set allow_long_horizon to "
                 "confirm",
                 params_.nu * params_.t_end));

  // Background transform on the grid (pure Maxwellian when no set given).
  bg_hat_.resize(static_cast<std::size_t>(grid.n_nodes()));
  for (int j = 0; j < grid.n_nodes(); ++j) {
    const double xi = grid.xi(j);
    bg_hat_[static_cast<std::size_t>(j)] =
        params_.background ? params_.background->f0_hat(xi)
                           : std::exp(-0.5 * xi * xi);
  }

  // Collision plan for the half step.
  const double delta = 0.5 * dt_;
  if (params_.nu > 0.0) {
    const double c = std::exp(-params_.nu * delta);
    const double spread = 0.5 * (1.0 - c * c);
    const int n = grid.n();
    half_plan_.identity = false;
    half_plan_.base.resize(static_cast<std::size_t>(n) + 1);
    half_plan_.w00.resize(static_cast<std::size_t>(n) + 1);
    half_plan_.w01.resize(static_cast<std::size_t>(n) + 1);
    half_plan_.w10.resize(static_cast<std::size_t>(n) + 1);
    half_plan_.w11.resize(static_cast<std::size_t>(n) + 1);
    half_plan_.damp.resize(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
      const double xi = grid.xi(j);
      const double foot = xi * c;  // strictly inside the grid
      double pos = (foot + grid.xi_max()) / grid.dxi();
      int base = static_cast<int>(std::floor(pos));
      base = std::min(std::max(base, 0), n - 1);
      double s = pos - base;
      // The center node reads itself exactly; snap round-off so the mass
      // sample is reproduced bitwise.
      if (j == grid.center()) {
        base = j;
        s = 0.0;
      }
      half_plan_.base[static_cast<std::size_t>(j)] = base;
      half_plan_.w00[static_cast<std::size_t>(j)] = h00(s);
      half_plan_.w01[static_cast<std::size_t>(j)] = h01(s);
      half_plan_.w10[static_cast<std::size_t>(j)] = h10(s) * grid.dxi();
      half_plan_.w11[static_cast<std::size_t>(j)] = h11(s) * grid.dxi();
      half_plan_.damp[static_cast<std::size_t>(j)] =
          std::exp(-xi * xi * spread);
    }
  }

  // Mode circle for the nonlinear field map: the exponential of a small
  // field couples beyond k_max, padding keeps aliasing far below round-off.
  const int k_max = state_.modes().k_max();
  if (k_max > 0) {
    n_x_ = std::max(8, 8 * k_max);
    phase_.resize(static_cast<std::size_t>(state_.modes().count()) *
                  static_cast<std::size_t>(n_x_));
    for (int k = -k_max; k <= k_max; ++k)
      for (int p = 0; p < n_x_; ++p) {
        const double x = 2.0 * pi * p / n_x_;
        phase_[static_cast<std::size_t>(state_.modes().index_of(k)) *
                   static_cast<std::size_t>(n_x_) +
               static_cast<std::size_t>(p)] =
            cplx(std::cos(k * x), std::sin(k * x));
      }
  }

  rho0_initial_ = state_.rho(0);
}

void Simulator::fd6_derivative(const cplx* f, cplx* d) const {
  const int n = state_.grid().n();
  const double inv = 1.0 / state_.grid().dxi();
  const double c1 = 0.75 * inv, c2 = -0.15 * inv, c3 = inv / 60.0;
  const auto at = [&](int j) -> cplx {
    return (j < 0 || j > n) ? cplx(0.0, 0.0) : f[j];
  };
  for (int j = 0; j <= n; ++j) {
    if (j >= 3 && j <= n - 3) {
      d[j] = c1 * (f[j + 1] - f[j - 1]) + c2 * (f[j + 2] - f[j - 2]) +
             c3 * (f[j + 3] - f[j - 3]);
    } else {
      d[j] = c1 * (at(j + 1) - at(j - 1)) + c2 * (at(j + 2) - at(j - 2)) +
             c3 * (at(j + 3) - at(j - 3));
    }
  }
}

void Simulator::substep_collision(const StretchPlan& plan) {
  if (plan.identity) return;
  const XiGrid& grid = state_.grid();
  const int n = grid.n();
  const int k_max = state_.modes().k_max();
  std::vector<cplx> deriv(static_cast<std::size_t>(n) + 1);
  std::vector<cplx> out(static_cast<std::size_t>(n) + 1);
  // Fritsch-Carlson clamp, per component and per cell (the slope copies are
  // local: one cell's clamp must not leak into its neighbors): slopes of
  // opposite sign to the secant are zeroed, overshooting pairs are scaled
  // back onto the monotone circle alpha^2 + beta^2 <= 9.
  const auto clamp = [](double fa, double fb, double& da, double& db) {
    const double sec = fb - fa;
    if (sec == 0.0) {
      da = db = 0.0;
      return;
    }
    double a = da / sec, b = db / sec;
    if (a < 0.0) a = 0.0;
    if (b < 0.0) b = 0.0;
    const double r = a * a + b * b;
    if (r > 9.0) {
      const double tau = 3.0 / std::sqrt(r);
      a *= tau;
      b *= tau;
    }
    da = a * sec;
    db = b * sec;
  };
  for (int k = -k_max; k <= k_max; ++k) {
    cplx* row = state_.row(k);
    fd6_derivative(row, deriv.data());
    for (int j = 0; j <= n; ++j) {
      const std::size_t b = static_cast<std::size_t>(
          plan.base[static_cast<std::size_t>(j)]);
      cplx da = deriv[b], db = deriv[b + 1];
      if (params_.limit_stretch) {
        double re_a = da.real(), re_b = db.real();
        double im_a = da.imag(), im_b = db.imag();
        clamp(row[b].real(), row[b + 1].real(), re_a, re_b);
        clamp(row[b].imag(), row[b + 1].imag(), im_a, im_b);
        da = cplx(re_a, im_a);
        db = cplx(re_b, im_b);
      }
      out[static_cast<std::size_t>(j)] =
          plan.damp[static_cast<std::size_t>(j)] *
          (plan.w00[static_cast<std::size_t>(j)] * row[b] +
           plan.w01[static_cast<std::size_t>(j)] * row[b + 1] +
           plan.w10[static_cast<std::size_t>(j)] * da +
           plan.w11[static_cast<std::size_t>(j)] * db);
    }
    std::copy(out.begin(), out.end(), row);
  }
}

void Simulator::substep_transport() {
  const int n = state_.grid().n();
  const int k_max = state_.modes().k_max();
  const double global_max = state_.max_abs();
  double dropped = 0.0;
  std::vector<cplx> out(static_cast<std::size_t>(n) + 1);
  for (int k = -k_max; k <= k_max; ++k) {
    if (k == 0) continue;
    const int m = shift_cells_ * k;
    cplx* row = state_.row(k);
    for (int j = 0; j <= n; ++j) {
      const int src = j + m;
      out[static_cast<std::size_t>(j)] =
          (src >= 0 && src <= n) ? row[src] : cplx(0.0, 0.0);
    }
    if (m > 0)
      for (int j = 0; j < m && j <= n; ++j)
        dropped = std::max(dropped, std::abs(row[j]));
    else
      for (int j = std::max(0, n + m + 1); j <= n; ++j)
        dropped = std::max(dropped, std::abs(row[j]));
    std::copy(out.begin(), out.end(), row);
  }
  if (global_max > 0.0 && dropped > 0.0) {
    const double rel = dropped / global_max;
    max_spill_ = std::max(max_spill_, rel);
    if (rel > params_.spill_tol) {
      ++spill_events_;
      if (params_.spill_policy == SpillPolicy::strict)
        fail_domain(strf("Simulator: edge outflow %.3g exceeds tolerance "
                         "%.3g at t=%.6g",
                         rel, params_.spill_tol, time()));
    }
  }
}

void Simulator::substep_field(double delta) {
  if (!params_.field_coupling) return;
  const XiGrid& grid = state_.grid();
  const int n = grid.n();
  const int k_max = state_.modes().k_max();
  if (k_max == 0) return;
  const auto e_modes = electric_field(state_);

  if (!params_.nonlinear) {
    // d/dt ghat_k = -E_k * i xi * f0hat(xi), E frozen (exact: rho_k sits at
    // xi = 0 where the source vanishes).
    for (int k = -k_max; k <= k_max; ++k) {
      if (k == 0) continue;
      const cplx ek =
          e_modes[static_cast<std::size_t>(state_.modes().index_of(k))];
      cplx* row = state_.row(k);
      for (int j = 0; j <= n; ++j)
        row[j] -= delta * ek * cplx(0.0, grid.xi(j)) *
                  bg_hat_[static_cast<std::size_t>(j)];
    }
    return;
  }

  // Nonlinear: for each xi, rotate the mode circle to x space, apply the
  // exact frozen-field shift of (f0 + g), rotate back, truncate.  Work with
  // the perturbation only,
  //     new g(x) = g(x) e^{i arg} + f0hat (e^{i arg} - 1),
  // so no O(1) pedestal travels through the round trip: cancellation noise
  // would otherwise swamp small-amplitude data, and the e^{i arg} - 1 factor
  // vanishes identically at xi = 0, conserving mass pointwise.
  std::vector<double> e_x(static_cast<std::size_t>(n_x_));
  for (int p = 0; p < n_x_; ++p) {
    cplx acc(0.0, 0.0);
    for (int k = 1; k <= k_max; ++k)
      acc += e_modes[static_cast<std::size_t>(state_.modes().index_of(k))] *
             phase_[static_cast<std::size_t>(state_.modes().index_of(k)) *
                        static_cast<std::size_t>(n_x_) +
                    static_cast<std::size_t>(p)];
    e_x[static_cast<std::size_t>(p)] = 2.0 * acc.real();
  }

  const int count = state_.modes().count();
  std::vector<cplx> x_vals(static_cast<std::size_t>(n_x_));
  for (int j = 0; j <= n; ++j) {
    const double xi = grid.xi(j);
    for (int p = 0; p < n_x_; ++p) {
      cplx acc(0.0, 0.0);
      for (int idx = 0; idx < count; ++idx)
        acc += state_.value(state_.modes().k_of(idx), j) *
               phase_[static_cast<std::size_t>(idx) *
                          static_cast<std::size_t>(n_x_) +
                      static_cast<std::size_t>(p)];
      const double arg = -xi * e_x[static_cast<std::size_t>(p)] * delta;
      const double half_s = std::sin(0.5 * arg);
      // e^{i arg} - 1 without cancellation: cos(arg) - 1 = -2 sin^2(arg/2).
      const cplx shift_m1(-2.0 * half_s * half_s, std::sin(arg));
      x_vals[static_cast<std::size_t>(p)] =
          acc * (shift_m1 + 1.0) +
          bg_hat_[static_cast<std::size_t>(j)] * shift_m1;
    }
    for (int idx = 0; idx < count; ++idx) {
      cplx acc(0.0, 0.0);
      for (int p = 0; p < n_x_; ++p)
        acc += x_vals[static_cast<std::size_t>(p)] *
               std::conj(phase_[static_cast<std::size_t>(idx) *
                                    static_cast<std::size_t>(n_x_) +
                                static_cast<std::size_t>(p)]);
      acc /= static_cast<double>(n_x_);
      state_.value(state_.modes().k_of(idx), j) = acc;
    }
  }
}

void Simulator::step() {
  const double half = 0.5 * dt_;
  substep_field(half);
  substep_collision(half_plan_);
  substep_transport();
  substep_collision(half_plan_);
  substep_field(half);
  state_.set_time(state_.time() + dt_);
}

void Simulator::run_until(double t) {
  while (time() < t - 0.5 * dt_) step();
}

double Simulator::mass_drift() const {
  return std::abs(state_.rho(0) - rho0_initial_);
}

SpectralField vpfp_step(const SpectralField& state, const SimParams& p) {
  Simulator sim(state, p);
  sim.step();
  return sim.state();
}

}  // namespace vpfp
