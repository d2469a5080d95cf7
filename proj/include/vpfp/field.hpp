#pragma once

// Fourier-side state of a velocity perturbation: one complex row per spatial
// wavenumber k, sampled on a shared XiGrid.  A real-valued physical field
// obeys the mirror symmetry  value(-k, -xi) == conj(value(k, xi)); helpers
// here measure the deviation and enforce it.

#include <complex>
#include <functional>
#include <vector>

#include "vpfp/grid.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

class SpectralField {
 public:
  SpectralField(ModeSet modes, XiGrid grid, double time = 0.0)
      : modes_(modes),
        grid_(grid),
        time_(time),
        values_(static_cast<size_t>(modes.count()) *
                static_cast<size_t>(grid.n_nodes())) {}

  const ModeSet& modes() const { return modes_; }
  const XiGrid& grid() const { return grid_; }
  double time() const { return time_; }
  void set_time(double t) { time_ = t; }

  cplx& value(int k, int j) {
    return values_[row_offset(k) + static_cast<size_t>(j)];
  }
  const cplx& value(int k, int j) const {
    return values_[row_offset(k) + static_cast<size_t>(j)];
  }

  cplx* row(int k) { return values_.data() + row_offset(k); }
  const cplx* row(int k) const { return values_.data() + row_offset(k); }

  std::vector<cplx> row_copy(int k) const {
    const cplx* r = row(k);
    return std::vector<cplx>(r, r + grid_.n_nodes());
  }
  void set_row(int k, const std::vector<cplx>& vals) {
    require(vals.size() == static_cast<size_t>(grid_.n_nodes()),
            "SpectralField::set_row: size mismatch");
    std::copy(vals.begin(), vals.end(), row(k));
  }

  // Density of mode k: the xi = 0 sample.
  cplx rho(int k) const { return value(k, grid_.center()); }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& z : values_) m = std::max(m, std::abs(z));
    return m;
  }

  // Largest |value| on the xi-edges, relative to the global maximum.
  // A value near 1 means the state no longer fits on the grid.
  double edge_spill() const {
    const double m = max_abs();
    if (m == 0.0) return 0.0;
    double e = 0.0;
    for (int k = -modes_.k_max(); k <= modes_.k_max(); ++k) {
      e = std::max(e, std::abs(value(k, 0)));
      e = std::max(e, std::abs(value(k, grid_.n())));
    }
    return e / m;
  }

  // Max deviation from the real-field mirror symmetry, relative to max |value|.
  double reality_defect() const {
    const double m = max_abs();
    if (m == 0.0) return 0.0;
    double d = 0.0;
    const int n = grid_.n();
    for (int k = 0; k <= modes_.k_max(); ++k)
      for (int j = 0; j <= n; ++j)
        d = std::max(d,
                     std::abs(value(-k, n - j) - std::conj(value(k, j))));
    return d / m;
  }

  // Projects onto the symmetric part; exact no-op for already-real fields.
  void symmetrize() {
    const int n = grid_.n();
    for (int k = 0; k <= modes_.k_max(); ++k)
      for (int j = 0; j <= n; ++j) {
        const cplx a = value(k, j);
        const cplx b = std::conj(value(-k, n - j));
        const cplx avg = 0.5 * (a + b);
        value(k, j) = avg;
        value(-k, n - j) = std::conj(avg);
      }
  }

  bool all_finite() const {
    for (const cplx& z : values_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

 private:
  size_t row_offset(int k) const {
    return static_cast<size_t>(modes_.index_of(k)) *
           static_cast<size_t>(grid_.n_nodes());
  }

  ModeSet modes_;
  XiGrid grid_;
  double time_;
  std::vector<cplx> values_;
};

// Fills a field from a pointwise sampler (k, xi) -> complex, enforces the
// mirror symmetry by averaging, and rejects non-finite samples.  `spill_tol`
// only flags (does not reject): callers that need hard guarantees check
// edge_spill() themselves.
inline SpectralField build_field(
    const std::function<cplx(int, double)>& sampler, const ModeSet& modes,
    const XiGrid& grid, double spill_tol = 1e-8, bool* spill_flag = nullptr) {
  SpectralField f(modes, grid);
  for (int k = -modes.k_max(); k <= modes.k_max(); ++k)
    for (int j = 0; j < grid.n_nodes(); ++j) {
      const cplx z = sampler(k, grid.xi(j));
      require(std::isfinite(z.real()) && std::isfinite(z.imag()),
              strf("build_field: non-finite sample at k=%d xi=%.6g", k,
                   grid.xi(j)));
      f.value(k, j) = z;
    }
  f.symmetrize();
  if (spill_flag) *spill_flag = f.edge_spill() > spill_tol;
  return f;
}

}  // namespace vpfp
