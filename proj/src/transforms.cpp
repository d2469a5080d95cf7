#include "vpfp/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <mutex>

namespace vpfp {
namespace {

// One cached FFTW plan pair per transform length.  FFTW planning is not
// thread-safe and FFTW_ESTIMATE plans are cheap, so everything runs under a
// single mutex; the heavy lifting happens on one core anyway.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  fftw_complex* buf = nullptr;
  int n = 0;
};

class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  // Executes an in-place transform of `data` (length n) in direction `sign`.
  void execute(cplx* data, int n, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    PlanPair& p = pair(n);
    std::memcpy(p.buf, data, sizeof(cplx) * static_cast<size_t>(n));
    fftw_execute(sign == FFTW_FORWARD ? p.fwd : p.bwd);
    std::memcpy(data, p.buf, sizeof(cplx) * static_cast<size_t>(n));
  }

 private:
  PlanPair& pair(int n) {
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    PlanPair p;
    p.n = n;
    p.buf = fftw_alloc_complex(static_cast<size_t>(n));
    require(p.buf != nullptr, "fft: allocation failed");
    p.fwd = fftw_plan_dft_1d(n, p.buf, p.buf, FFTW_FORWARD, FFTW_ESTIMATE);
    p.bwd = fftw_plan_dft_1d(n, p.buf, p.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    return plans_.emplace(n, p).first->second;
  }

  std::mutex mu_;
  std::map<int, PlanPair> plans_;
};

inline double parity(int j) { return (j & 1) ? -1.0 : 1.0; }

}  // namespace

std::vector<cplx> v_to_xi(const std::vector<cplx>& v_samples,
                          const XiGrid& grid) {
  const int n = grid.n();
  require(v_samples.size() == static_cast<size_t>(n + 1),
          "v_to_xi: sample count must be n_xi + 1");
  std::vector<cplx> work(static_cast<size_t>(n));
  // The symmetric node layout v_j = (j - n/2) dv turns the continuous phase
  // into a centered DFT; both centerings fold into (-1)^j / (-1)^m factors
  // (the constant phase exp(-i pi n/2) is 1 because n % 4 == 0).
  for (int j = 0; j < n; ++j)
    work[static_cast<size_t>(j)] = parity(j) * v_samples[static_cast<size_t>(j)];
  PlanCache::instance().execute(work.data(), n, FFTW_FORWARD);
  std::vector<cplx> out(static_cast<size_t>(n + 1));
  const double dv = grid.dv();
  for (int m = 0; m < n; ++m)
    out[static_cast<size_t>(m)] = dv * parity(m) * work[static_cast<size_t>(m)];
  out[static_cast<size_t>(n)] = out[0];
  return out;
}

std::vector<cplx> xi_to_v(const std::vector<cplx>& xi_samples,
                          const XiGrid& grid) {
  const int n = grid.n();
  require(xi_samples.size() == static_cast<size_t>(n + 1),
          "xi_to_v: sample count must be n_xi + 1");
  std::vector<cplx> work(static_cast<size_t>(n));
  for (int m = 0; m < n; ++m)
    work[static_cast<size_t>(m)] =
        parity(m) * xi_samples[static_cast<size_t>(m)];
  PlanCache::instance().execute(work.data(), n, FFTW_BACKWARD);
  std::vector<cplx> out(static_cast<size_t>(n + 1));
  const double scale = grid.dxi() / (2.0 * pi);
  for (int j = 0; j < n; ++j)
    out[static_cast<size_t>(j)] =
        scale * parity(j) * work[static_cast<size_t>(j)];
  out[static_cast<size_t>(n)] = out[0];
  return out;
}

std::vector<cplx> hilbert_transform(const std::vector<cplx>& xi_samples,
                                    const XiGrid& grid, double spill_tol) {
  const int n = grid.n();
  require(xi_samples.size() == static_cast<size_t>(n + 1),
          "hilbert_transform: sample count must be n_xi + 1");
  double m = 0.0;
  for (const cplx& z : xi_samples) m = std::max(m, std::abs(z));
  const double edge = std::max(std::abs(xi_samples.front()),
                               std::abs(xi_samples.back()));
  if (m > 0.0 && edge > spill_tol * m)
    fail_domain(strf(
        "hilbert_transform: input carries edge weight %.3g (tolerance %.3g)",
        edge / m, spill_tol));
  std::vector<cplx> out(xi_samples.size());
  const cplx mi(0.0, -1.0);
  for (int j = 0; j <= n; ++j) {
    const double xi = grid.xi(j);
    const double s = (xi > 0.0) - (xi < 0.0);
    out[static_cast<size_t>(j)] = mi * s * xi_samples[static_cast<size_t>(j)];
  }
  return out;
}

double image_sum(int q, double v, double L) {
  require(q >= 1 && q <= 4, "image_sum: order must be 1..4");
  require(L > 0.0, "image_sum: period must be positive");
  const double th = pi * v / L;
  const double f = pi / L;
  if (std::abs(th) < 0.25) {
    // Laurent series of the lattice sums; the 1/v^q self-term is excluded.
    const double t2 = th * th;
    switch (q) {
      case 1:
        return f * (-th / 3.0 - th * t2 / 45.0 - 2.0 * th * t2 * t2 / 945.0);
      case 2:
        return f * f * (1.0 / 3.0 + t2 / 15.0 + 2.0 * t2 * t2 / 189.0);
      case 3:
        return f * f * f * (-th / 15.0 - 4.0 * th * t2 / 189.0);
      default:
        return f * f * f * f * (1.0 / 45.0 + 4.0 * t2 / 189.0);
    }
  }
  const double s = std::sin(th), c = std::cos(th);
  const double csc2 = 1.0 / (s * s);
  switch (q) {
    case 1:
      return f * (c / s) - 1.0 / v;
    case 2:
      return f * f * csc2 - 1.0 / (v * v);
    case 3:
      return f * f * f * csc2 * (c / s) - 1.0 / (v * v * v);
    default:
      return f * f * f * f *
                 ((2.0 / 3.0) * csc2 * (c / s) * (c / s) +
                  (1.0 / 3.0) * csc2 * csc2) -
             1.0 / (v * v * v * v);
  }
}

std::vector<cplx> hilbert_velocity(const std::vector<cplx>& v_samples,
                                   const XiGrid& grid, int image_order) {
  require(image_order >= 0 && image_order <= 4,
          "hilbert_velocity: image_order must be 0..4");
  std::vector<cplx> out =
      xi_to_v(hilbert_transform(v_to_xi(v_samples, grid), grid,
                                /*spill_tol=*/1e308),
              grid);
  if (image_order == 0) return out;
  const double L = 2.0 * grid.v_max();
  // Moments (1/pi) * integral v^{q-1} f dv drive the large-v Laurent tail of
  // the line transform, hence the periodization images.
  cplx c[5] = {};
  {
    std::vector<cplx> integ(v_samples.size());
    for (int q = 1; q <= image_order; ++q) {
      for (size_t j = 0; j < v_samples.size(); ++j) {
        const double v = grid.v(static_cast<int>(j));
        integ[j] = v_samples[j] * std::pow(v, q - 1);
      }
      c[q] = trapz(integ, grid.dv()) / pi;
    }
  }
  for (int j = 0; j < grid.n_nodes(); ++j) {
    const double v = grid.v(j);
    cplx corr(0.0, 0.0);
    for (int q = 1; q <= image_order; ++q)
      corr += c[q] * image_sum(q, v, L);
    out[static_cast<size_t>(j)] -= corr;
  }
  return out;
}

}  // namespace vpfp
