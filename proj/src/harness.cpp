#include "twm/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <thread>

#include "twm/pump.hpp"
#include "twm/rng.hpp"

namespace twm {

namespace {

constexpr const char* kModule = "cli-harness";

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SimError(kModule, "run", "cannot create output directory: " + dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

// Runs fn(i) for i in [0, count) on a deterministic-output worker pool.
void parallel_for(int count, int workers, const std::function<void(int)>& fn) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

RunResult simulate_seeded(const ScenarioConfig& cfg, std::uint64_t seed) {
  BuiltScenario built = build_scenario(cfg, seed);
  RunResult r;
  r.seed = seed;
  r.prop = trotter_propagate(built.scenario);
  r.fom = figures_of_merit(r.prop);
  r.spm_overlap =
      spm_overlap_fom(built.scenario.pump, built.scenario.spm, built.scenario.length);
  if (r.prop.kind == ProcessKind::PDC) {
    Eigen::MatrixXcd m = moment_M(r.prop);
    r.amplitude = jsa_decompose(m).j;
    r.edge_energy = edge_energy_fraction(m);
  } else {
    r.amplitude = r.prop.ksi();
    r.edge_energy = edge_energy_fraction(r.amplitude);
  }
  return r;
}

double flagged_or_nan(const FlaggedValue& v) {
  return v.defined ? v.value : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

int resolve_workers(const RunOptions& opt) {
  if (opt.workers > 0) return opt.workers;
  if (const char* env = std::getenv("TWM_WORKERS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

const std::vector<std::string>& fom_column_names() {
  static const std::vector<std::string> names = {
      "n_signal", "n_idler", "r1", "schmidt_number", "gamma1", "separability",
      "spm_overlap", "edge_energy"};
  return names;
}

std::vector<double> fom_columns(const RunResult& r) {
  return {r.fom.n_signal,
          r.fom.n_idler,
          r.fom.r1,
          flagged_or_nan(r.fom.schmidt_number),
          r.fom.gamma1,
          flagged_or_nan(r.fom.separability),
          r.spm_overlap,
          r.edge_energy};
}

RunResult run_single(const ScenarioConfig& cfg, const RunOptions& opt, bool write_outputs) {
  RunResult r = simulate_seeded(cfg, cfg.master_seed());
  if (!write_outputs) return r;

  ensure_dir(opt.out_dir);
  nlohmann::json extra;
  extra["seed"] = r.seed;
  extra["spm_overlap"] = r.spm_overlap;
  extra["edge_energy"] = r.edge_energy;
  write_fom_json(join(opt.out_dir, "fom.json"), r.fom, cfg.hash, extra);
  write_matrix_csv(join(opt.out_dir, "jsa_abs.csv"), r.amplitude.cwiseAbs());
  Eigen::MatrixXd phase(r.amplitude.rows(), r.amplitude.cols());
  for (int i = 0; i < phase.rows(); ++i)
    for (int j = 0; j < phase.cols(); ++j) phase(i, j) = std::arg(r.amplitude(i, j));
  write_matrix_csv(join(opt.out_dir, "jsa_phase.csv"), phase);
  write_propagator_json(join(opt.out_dir, "propagator.json"), r.prop, cfg.hash);
  if (opt.emit_plots) write_png_gray(join(opt.out_dir, "jsa_abs.png"), r.amplitude.cwiseAbs());
  return r;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec,
                                const RunOptions& opt, bool write_outputs) {
  if (spec.values.empty()) throw SimError(kModule, "run_sweep", "sweep needs at least one value");
  if (spec.seeds < 1) throw SimError(kModule, "run_sweep", "sweep needs at least one seed");
  if (spec.aggregation != "mean" && spec.aggregation != "min" && spec.aggregation != "max")
    throw SimError(kModule, "run_sweep", "aggregation must be mean, min or max");
  get_config_value(cfg, spec.param);  // validates the parameter path up front

  const std::uint64_t master = cfg.master_seed();
  const int total = static_cast<int>(spec.values.size()) * spec.seeds;
  std::vector<SweepRow> points(total);

  parallel_for(total, resolve_workers(opt), [&](int i) {
    int vi = i / spec.seeds, ri = i % spec.seeds;
    ScenarioConfig local = cfg;
    set_config_value(local, spec.param, spec.values[vi]);
    std::uint64_t seed = derive_seed(master, static_cast<std::uint64_t>(i));
    RunResult r = simulate_seeded(local, seed);
    points[i] = {spec.values[vi], seed, false, "", fom_columns(r)};
    (void)ri;
  });

  std::vector<SweepRow> rows;
  const size_t ncol = fom_column_names().size();
  for (size_t vi = 0; vi < spec.values.size(); ++vi) {
    std::vector<double> agg(ncol, 0.0);
    for (int ri = 0; ri < spec.seeds; ++ri) {
      const SweepRow& row = points[vi * spec.seeds + ri];
      rows.push_back(row);
      for (size_t c = 0; c < ncol; ++c) {
        double v = row.foms[c];
        if (spec.aggregation == "mean")
          agg[c] += v / spec.seeds;
        else if (spec.aggregation == "min")
          agg[c] = ri == 0 ? v : std::fmin(agg[c], v);
        else
          agg[c] = ri == 0 ? v : std::fmax(agg[c], v);
      }
    }
    rows.push_back({spec.values[vi], 0, true, spec.aggregation, agg});
  }

  if (write_outputs) {
    ensure_dir(opt.out_dir);
    write_sweep_csv(join(opt.out_dir, "sweep.csv"), fom_column_names(), spec.param, rows,
                    cfg.hash);
    if (opt.emit_plots) {
      // Coarse raster of the mean of the first informative column vs value.
      const int w = 400, h = 300;
      Eigen::MatrixXd img = Eigen::MatrixXd::Zero(h, w);
      std::vector<double> xs, ys;
      for (const SweepRow& row : rows)
        if (row.aggregate && row.aggregate_kind == "mean") {
          xs.push_back(row.value);
          ys.push_back(row.foms[0]);
        }
      double x0 = *std::min_element(xs.begin(), xs.end());
      double x1 = *std::max_element(xs.begin(), xs.end());
      double y0 = *std::min_element(ys.begin(), ys.end());
      double y1 = *std::max_element(ys.begin(), ys.end());
      double xs_span = x1 > x0 ? x1 - x0 : 1.0, ys_span = y1 > y0 ? y1 - y0 : 1.0;
      for (size_t p = 0; p < xs.size(); ++p) {
        int cx = static_cast<int>((xs[p] - x0) / xs_span * (w - 1));
        int cy = h - 1 - static_cast<int>((ys[p] - y0) / ys_span * (h - 1));
        for (int di = -2; di <= 2; ++di)
          for (int dj = -2; dj <= 2; ++dj) {
            int i = cy + di, j = cx + dj;
            if (i >= 0 && i < h && j >= 0 && j < w) img(i, j) = 1.0;
          }
      }
      write_png_gray(join(opt.out_dir, "sweep.png"), img);
    }
  }
  return rows;
}

std::vector<SpmScanRow> run_spm_scan(const ScenarioConfig& cfg, std::vector<double> photons,
                                     const RunOptions& opt, double near_zero_threshold,
                                     double weak_threshold, bool write_outputs) {
  if (photons.empty())
    throw SimError(kModule, "run_spm_scan", "scan needs at least one photon number");
  if (!(near_zero_threshold >= weak_threshold))
    throw SimError(kModule, "run_spm_scan", "thresholds must satisfy near-zero >= weak");

  std::vector<SpmScanRow> rows(photons.size());
  const std::uint64_t master = cfg.master_seed();
  parallel_for(static_cast<int>(photons.size()), resolve_workers(opt), [&](int i) {
    ScenarioConfig local = cfg;
    set_config_value(local, "pump.photon_number", photons[i]);
    RunResult r = simulate_seeded(local, master);
    SpmScanRow row;
    row.pump_photons = photons[i];
    row.overlap_fom = r.spm_overlap;
    row.schmidt_number = flagged_or_nan(r.fom.schmidt_number);
    row.r1 = r.fom.r1;
    row.regime = r.spm_overlap >= near_zero_threshold ? "near-zero"
                 : r.spm_overlap >= weak_threshold    ? "weak"
                                                      : "strong";
    rows[i] = std::move(row);
  });

  if (write_outputs) {
    ensure_dir(opt.out_dir);
    std::ofstream out(join(opt.out_dir, "spm_scan.csv"));
    if (!out) throw SimError(kModule, "run_spm_scan", "cannot write spm_scan.csv");
    out << "# config_hash=" << cfg.hash << '\n';
    out << "pump_photons,overlap_fom,schmidt_number,r1,regime\n";
    char buf[160];
    for (const SpmScanRow& row : rows) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,", row.pump_photons,
                    row.overlap_fom, row.schmidt_number, row.r1);
      out << buf << row.regime << '\n';
    }
  }
  return rows;
}

}  // namespace twm
