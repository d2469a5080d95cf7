#include "vpfp/report.hpp"

#include <fstream>

#include "json.hpp"

namespace vpfp {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // '\n' endings on every platform
  require(out.good(), "report: cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_series_csv(const std::string& path, const RunReport& report) {
  const size_t nt = report.t.size();
  require(report.rho.size() == nt && report.abs_e.size() == nt &&
              report.energy.size() == nt && report.dissipation.size() == nt,
          "write_series_csv: ragged report");
  auto out = open_out(path);
  out << "t,k,re_rho,im_rho,abs_E,energy_s_m,dissipation_s_m\n";
  for (size_t i = 0; i < nt; ++i) {
    require(report.rho[i].size() == static_cast<size_t>(report.k_max) + 1 &&
                report.abs_e[i].size() == report.rho[i].size(),
            "write_series_csv: ragged mode row");
    for (int k = 0; k <= report.k_max; ++k) {
      const cplx r = report.rho[i][static_cast<size_t>(k)];
      out << fmt_g17(report.t[i]) << ',' << k << ',' << fmt_g17(r.real())
          << ',' << fmt_g17(r.imag()) << ','
          << fmt_g17(report.abs_e[i][static_cast<size_t>(k)]) << ','
          << fmt_g17(report.energy[i]) << ',' << fmt_g17(report.dissipation[i])
          << '\n';
    }
  }
  require(out.good(), "write_series_csv: write failed: " + path);
}

std::string write_summary_json(const std::string& path,
                               const RunReport& report,
                               const std::string& extra_json) {
  using json = nlohmann::ordered_json;
  json root;
  root["experiment"] = report.experiment;
  if (!extra_json.empty()) root["config"] = json::parse(extra_json);
  root["k_max"] = report.k_max;
  root["samples"] = report.t.size();
  root["t_end"] = report.t.empty() ? 0.0 : report.t.back();
  root["mass_drift"] = report.rho0_mass_drift;
  root["wall_time_s"] = report.wall_time_s;

  json rates = json::array();
  for (const auto& r : report.rates) {
    rates.push_back({{"label", r.label},
                     {"rate", r.rate},
                     {"r2", r.r2},
                     {"window", {r.window_lo, r.window_hi}}});
  }
  root["fitted_rates"] = rates;

  json verdicts = json::array();
  bool all = true;
  for (const auto& v : report.verdicts) {
    all = all && v.pass;
    verdicts.push_back({{"name", v.name},
                        {"measured", v.measured},
                        {"target", v.target},
                        {"tolerance", v.tolerance},
                        {"pass", v.pass},
                        {"wall_time_s", v.wall_time_s},
                        {"detail", v.detail}});
  }
  root["verdicts"] = verdicts;
  root["all_pass"] = all;

  const std::string text = root.dump(2) + "\n";
  {
    auto out = open_out(path);
    out << text;
    require(out.good(), "write_summary_json: write failed: " + path);
  }
  // Parse back and compare: catches truncated writes and any non-round-trip
  // number formatting before a downstream consumer does.
  std::ifstream in(path, std::ios::binary);
  require(in.good(), "write_summary_json: cannot re-open: " + path);
  json echo = json::parse(in);
  require(echo == root, "write_summary_json: round-trip mismatch: " + path);
  return text;
}

void write_matrix_csv(const std::string& path,
                      const std::vector<SweepCell>& cells) {
  auto out = open_out(path);
  out << "nu,beta,growth_rate,verdict\n";
  for (const auto& c : cells) {
    out << fmt_g17(c.nu) << ',' << fmt_g17(c.beta) << ','
        << fmt_g17(c.growth_rate) << ',' << c.verdict << '\n';
  }
  require(out.good(), "write_matrix_csv: write failed: " + path);
}

}  // namespace vpfp
