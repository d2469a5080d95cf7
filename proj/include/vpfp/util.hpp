#pragma once

// Small shared helpers: error raising, constants, dense-output formatting.

#include <complex>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace vpfp {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846264338327950288;

// sqrt(pi/2), shows up in the odd part of the plasma response integral.
inline constexpr double sqrt_pi_over_2 = 1.25331413731550025120788264240552263;

[[noreturn]] inline void fail(const std::string& what) {
  throw std::runtime_error(what);
}

[[noreturn]] inline void fail_domain(const std::string& what) {
  throw std::domain_error(what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

inline void require_domain(bool cond, const std::string& what) {
  if (!cond) throw std::domain_error(what);
}

// printf-style formatting into std::string (libstdc++ 11 has no std::format).
inline std::string strf(const char* fmt, ...) {
  va_list ap;
  va_start(ap, fmt);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), fmt, ap);
  va_end(ap);
  return std::string(buf);
}

// Shortest round-trip decimal representation; used for byte-reproducible CSV.
inline std::string fmt_g17(double x) { return strf("%.17g", x); }

inline std::vector<double> linspace(double a, double b, int n) {
  require(n >= 2, "linspace: need at least two points");
  std::vector<double> out(static_cast<size_t>(n));
  const double h = (b - a) / (n - 1);
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = a + h * i;
  out.back() = b;
  return out;
}

// Trapezoid sum on a uniform grid; spectrally accurate for smooth decaying data.
template <class T>
T trapz(const std::vector<T>& y, double h) {
  if (y.size() < 2) return T{};
  T s = (y.front() + y.back()) * 0.5;
  for (size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
  return s * h;
}

inline double sq(double x) { return x * x; }

}  // namespace vpfp
