// Command-line front end: single simulations, parameter sweeps and SPM-onset
// scans driven by a declarative JSON scenario file.

#include <CLI11.hpp>
#include <cstdio>
#include <string>
#include <vector>

#include "twm/harness.hpp"

namespace {

int guarded(const std::function<void()>& body) {
  try {
    body();
    return 0;
  } catch (const twm::SimError& e) {
    std::fprintf(stderr, "error [%s/%s]: %s\n", e.module().c_str(), e.op().c_str(), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pulsed three-wave-mixing waveguide simulator"};
  app.require_subcommand(1);

  std::string config_path;
  twm::RunOptions opt;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "scenario config file (JSON)")->required();
    cmd->add_option("--out", opt.out_dir, "output directory")->capture_default_str();
    cmd->add_flag("--emit-plots", opt.emit_plots, "also write PNG plots");
    cmd->add_option("--workers", opt.workers,
                    "worker threads (default: TWM_WORKERS env var or hardware)");
  };

  CLI::App* simulate = app.add_subcommand("simulate", "run one scenario");
  add_common(simulate);

  CLI::App* sweep = app.add_subcommand("sweep", "sweep one config parameter");
  add_common(sweep);
  twm::SweepSpec spec;
  sweep->add_option("--param", spec.param, "dotted config path, e.g. errors.loss_db_cm")
      ->required();
  sweep->add_option("--values", spec.values, "parameter values")->required()->delimiter(',');
  sweep->add_option("--seeds", spec.seeds, "repetitions per value")->capture_default_str();
  sweep->add_option("--aggregate", spec.aggregation, "per-value aggregation: mean, min or max")
      ->capture_default_str();

  CLI::App* scan = app.add_subcommand("spm-scan", "pump-power scan of the SPM overlap");
  add_common(scan);
  std::vector<double> photons;
  double t_near = 0.99, t_weak = 0.9;
  scan->add_option("--pump-photons", photons, "pump photon numbers")->required()->delimiter(',');
  scan->add_option("--near-zero-threshold", t_near, "overlap FOM bound of the near-zero regime")
      ->capture_default_str();
  scan->add_option("--weak-threshold", t_weak, "overlap FOM bound of the weak regime")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  return guarded([&] {
    twm::ScenarioConfig cfg = twm::load_config(config_path);
    if (simulate->parsed()) {
      twm::RunResult r = twm::run_single(cfg, opt);
      std::printf("wrote %s (seed %llu)\n", opt.out_dir.c_str(),
                  static_cast<unsigned long long>(r.seed));
    } else if (sweep->parsed()) {
      auto rows = twm::run_sweep(cfg, spec, opt);
      std::printf("wrote %s/sweep.csv (%zu rows)\n", opt.out_dir.c_str(), rows.size());
    } else {
      auto rows = twm::run_spm_scan(cfg, photons, opt, t_near, t_weak);
      std::printf("wrote %s/spm_scan.csv (%zu rows)\n", opt.out_dir.c_str(), rows.size());
    }
  });
}
