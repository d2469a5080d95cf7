#pragma once

// Run artifacts: a flat time-series table (series.csv), a structured
// summary (summary.json), and the sweep outcome matrix (matrix.csv).
// Numbers are printed with %.17g so a re-parse reproduces the doubles
// bit-for-bit; the JSON writer re-reads what it wrote and insists on
// equality, making "the file on disk is what the run computed" a checked
// property rather than a hope.

#include <cmath>
#include <string>
#include <vector>

#include "vpfp/rates.hpp"
#include "vpfp/util.hpp"

namespace vpfp {

struct RateEntry {
  std::string label;
  double rate = 0.0;
  double r2 = 0.0;
  double window_lo = 0.0;
  double window_hi = 0.0;
};

struct VerdictEntry {
  std::string name;
  double measured = 0.0;
  double target = 0.0;
  double tolerance = 0.0;  // 0 for one-sided bounds
  bool pass = false;
  double wall_time_s = 0.0;
  std::string detail;

  static VerdictEntry two_sided(std::string name, double measured,
                                double target, double tol,
                                std::string detail = "") {
    VerdictEntry v;
    v.name = std::move(name);
    v.measured = measured;
    v.target = target;
    v.tolerance = tol;
    v.pass = std::abs(measured - target) <= tol;
    v.detail = std::move(detail);
    return v;
  }
  static VerdictEntry upper(std::string name, double measured, double bound,
                            std::string detail = "") {
    VerdictEntry v;
    v.name = std::move(name);
    v.measured = measured;
    v.target = bound;
    v.pass = measured <= bound;
    v.detail = std::move(detail);
    return v;
  }
  static VerdictEntry lower(std::string name, double measured, double bound,
                            std::string detail = "") {
    VerdictEntry v;
    v.name = std::move(name);
    v.measured = measured;
    v.target = bound;
    v.pass = measured >= bound;
    v.detail = std::move(detail);
    return v;
  }
};

struct RunReport {
  std::string experiment;
  int k_max = 0;
  double wall_time_s = 0.0;
  std::vector<double> t;
  // Per time sample, modes k = 0..k_max (reality makes k < 0 redundant).
  std::vector<std::vector<cplx>> rho;      // [ti][k]
  std::vector<std::vector<double>> abs_e;  // [ti][k], |E_k|; zero at k = 0
  double rho0_mass_drift = 0.0;
  std::vector<double> e_norm;       // sqrt(sum_{k!=0} |E_k|^2), both signs
  std::vector<double> mode_norm;    // sqrt(sum_k ||<v>^m g_k||^2)
  std::vector<double> energy;       // E^s_m(t)
  std::vector<double> dissipation;  // D^s_m(t)
  std::vector<RateEntry> rates;
  std::vector<VerdictEntry> verdicts;

  bool all_pass() const {
    for (const auto& v : verdicts)
      if (!v.pass) return false;
    return true;
  }
};

// series.csv: one row per (t, k), global columns repeated on every row of
// the same time sample.
void write_series_csv(const std::string& path, const RunReport& report);

// summary.json: configuration echo (pre-filled by the caller in `extra`,
// serialized JSON object text or empty), rates, verdicts, and scalars.
// Returns the serialized text after a parse-back equality check.
std::string write_summary_json(const std::string& path,
                               const RunReport& report,
                               const std::string& extra_json = "");

struct SweepCell {
  double nu = 0.0;
  double beta = 0.0;
  double growth_rate = 0.0;
  std::string verdict;  // "grow" | "decay"
};

void write_matrix_csv(const std::string& path,
                      const std::vector<SweepCell>& cells);

}  // namespace vpfp
