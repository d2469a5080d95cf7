// Command-line front end:
//
//   vpfp run   <config.json>   run the experiment named in the config
//   vpfp sweep <config.json>   threshold sweep (forces the sweep driver)
//   vpfp check                 fast invariant suite
//
// Flags: --out DIR, --threads N, --tol-scale X override the config.
// Exit status: 0 all verdicts pass, 1 a verdict failed, 2 usage/runtime error.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "vpfp/experiments.hpp"

namespace {

int finish_report(const vpfp::RunReport& rep) {
  for (const auto& v : rep.verdicts) {
    std::printf("[%s] %-38s measured %.6g  target %.6g%s%s\n",
                v.pass ? "PASS" : "FAIL", v.name.c_str(), v.measured,
                v.target,
                v.tolerance > 0.0
                    ? vpfp::strf(" +- %.3g", v.tolerance).c_str()
                    : "",
                v.detail.empty() ? "" : ("  (" + v.detail + ")").c_str());
  }
  std::printf("%s: %zu verdicts, %s (%.2f s)\n", rep.experiment.c_str(),
              rep.verdicts.size(), rep.all_pass() ? "all pass" : "FAILURES",
              rep.wall_time_s);
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale kinetic stability laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  double tol_scale = 0.0;
  int threads = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_dir, "output directory (overrides config)");
    sub->add_option("--threads", threads, "worker threads for sweep cells");
    sub->add_option("--tol-scale", tol_scale,
                    "multiply verdict tolerances (1 = nominal)");
  };

  CLI::App* run = app.add_subcommand("run", "run the configured experiment");
  run->add_option("config", config_path, "JSON config file")->required();
  add_common(run);

  CLI::App* sweep = app.add_subcommand("sweep", "threshold dichotomy sweep");
  sweep->add_option("config", config_path, "JSON config file")->required();
  add_common(sweep);

  CLI::App* check = app.add_subcommand("check", "run the invariant suite");
  add_common(check);

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      const auto results =
          vpfp::run_check_suite(tol_scale > 0.0 ? tol_scale : 1.0);
      int failures = 0;
      for (const auto& r : results) {
        failures += r.pass ? 0 : 1;
        std::printf("[%s] %-24s %s\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.detail.c_str());
      }
      std::printf("check: %zu invariants, %d failure(s)\n", results.size(),
                  failures);
      return failures == 0 ? 0 : 1;
    }

    vpfp::ExperimentConfig cfg = vpfp::load_config(config_path);
    if (sweep->parsed()) cfg.experiment = "threshold_sweep";
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (threads > 0) cfg.threads = threads;
    if (tol_scale > 0.0) cfg.tol_scale = tol_scale;
    cfg.validate();

    const vpfp::RunReport rep = vpfp::run_experiment(cfg);
    std::printf("artifacts: %s/series.csv, %s/summary.json%s\n",
                cfg.out_dir.c_str(), cfg.out_dir.c_str(),
                cfg.experiment == "threshold_sweep" ? ", matrix.csv" : "");
    return finish_report(rep);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
