#pragma once

// Symmetric uniform grid in the velocity-frequency variable xi, plus the
// finite set of spatial wavenumbers carried by a Fourier-in-x state.
//
// Layout:   xi_j = -xi_max + j*dxi,  j = 0..n_xi   (n_xi + 1 nodes)
// so xi = 0 sits exactly at node n_xi/2 and both edges +-xi_max are nodes.
// The FFT bridge to velocity space uses the n_xi-point periodic core
// (node n_xi is the wrap image of node 0); see transforms.hpp.  The dual
// velocity grid has spacing dv = 2*pi/(n_xi*dxi) and half-width pi/dxi.

#include <vector>

#include "vpfp/util.hpp"

namespace vpfp {

class XiGrid {
 public:
  XiGrid(double xi_max, int n_xi) : xi_max_(xi_max), n_xi_(n_xi) {
    require(xi_max > 0.0, "XiGrid: xi_max must be positive");
    require(n_xi >= 8, "XiGrid: n_xi too small");
    require(n_xi % 4 == 0, "XiGrid: n_xi must be divisible by 4");
    dxi_ = 2.0 * xi_max / n_xi;
  }

  double xi_max() const { return xi_max_; }
  int n() const { return n_xi_; }              // number of cells (FFT length)
  int n_nodes() const { return n_xi_ + 1; }    // stored samples per mode
  double dxi() const { return dxi_; }
  int center() const { return n_xi_ / 2; }     // node index of xi = 0

  double xi(int j) const { return -xi_max_ + dxi_ * j; }

  // Dual velocity grid (same symmetric layout, n_xi + 1 nodes).
  double dv() const { return 2.0 * pi / (n_xi_ * dxi_); }
  double v_max() const { return pi / dxi_; }
  double v(int j) const { return -v_max() + dv() * j; }

  std::vector<double> xi_nodes() const {
    std::vector<double> out(static_cast<size_t>(n_nodes()));
    for (int j = 0; j < n_nodes(); ++j) out[static_cast<size_t>(j)] = xi(j);
    return out;
  }

  std::vector<double> v_nodes() const {
    std::vector<double> out(static_cast<size_t>(n_nodes()));
    for (int j = 0; j < n_nodes(); ++j) out[static_cast<size_t>(j)] = v(j);
    return out;
  }

  bool operator==(const XiGrid& o) const {
    return xi_max_ == o.xi_max_ && n_xi_ == o.n_xi_;
  }

 private:
  double xi_max_;
  int n_xi_;
  double dxi_;
};

// Wavenumbers k = -k_max..k_max (integer, box length 2*pi in x).
class ModeSet {
 public:
  explicit ModeSet(int k_max) : k_max_(k_max) {
    require(k_max >= 0, "ModeSet: k_max must be >= 0");
  }

  int k_max() const { return k_max_; }
  int count() const { return 2 * k_max_ + 1; }
  int index_of(int k) const {
    require(k >= -k_max_ && k <= k_max_, "ModeSet: wavenumber out of range");
    return k + k_max_;
  }
  int k_of(int idx) const { return idx - k_max_; }

  bool operator==(const ModeSet& o) const { return k_max_ == o.k_max_; }

 private:
  int k_max_;
};

}  // namespace vpfp
