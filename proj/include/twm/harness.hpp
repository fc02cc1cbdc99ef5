#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twm/analysis.hpp"
#include "twm/config.hpp"
#include "twm/outputs.hpp"

namespace twm {

struct RunOptions {
  std::string out_dir = "out";
  bool emit_plots = false;
  int workers = 0;  // 0: TWM_WORKERS env var, else hardware concurrency
};

struct RunResult {
  Propagator prop;
  FiguresOfMerit fom;
  double edge_energy = 0.0;      // fraction of |M| (or |K^si|) mass on the band edges
  double spm_overlap = 1.0;      // pump-distortion figure of merit
  Eigen::MatrixXcd amplitude;    // JSA (PDC) or conversion amplitude block (QFC)
  std::uint64_t seed = 0;
};

// Ordered FOM columns shared by sweep/scan CSV exports.
const std::vector<std::string>& fom_column_names();
std::vector<double> fom_columns(const RunResult& r);

// Single simulation; writes fom.json, jsa_abs.csv, jsa_phase.csv and
// propagator.json into out_dir (plus jsa_abs.png with emit_plots) unless
// write_outputs is false.
RunResult run_single(const ScenarioConfig& cfg, const RunOptions& opt, bool write_outputs = true);

struct SweepSpec {
  std::string param;               // dotted config path
  std::vector<double> values;      // at least one
  int seeds = 1;                   // repetitions per value
  std::string aggregation = "mean";  // mean | min | max over seeds
};

// One row per (value, repetition) plus one aggregate row per value;
// deterministic regardless of worker count. Writes sweep.csv.
std::vector<SweepRow> run_sweep(const ScenarioConfig& cfg, const SweepSpec& spec,
                                const RunOptions& opt, bool write_outputs = true);

struct SpmScanRow {
  double pump_photons = 0.0;
  double overlap_fom = 1.0;
  double schmidt_number = std::numeric_limits<double>::quiet_NaN();
  double r1 = 0.0;
  std::string regime;  // near-zero / weak / strong
};

// SPM-onset scan over pump photon numbers; regime labels from the two
// overlap-FOM thresholds. Writes spm_scan.csv.
std::vector<SpmScanRow> run_spm_scan(const ScenarioConfig& cfg, std::vector<double> photons,
                                     const RunOptions& opt, double near_zero_threshold = 0.99,
                                     double weak_threshold = 0.9, bool write_outputs = true);

int resolve_workers(const RunOptions& opt);

}  // namespace twm
