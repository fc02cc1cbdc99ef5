#pragma once

#include <Eigen/Core>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "twm/analysis.hpp"
#include "twm/propagator.hpp"

namespace twm {

// CSV matrix export with full round-trip precision, row per signal bin.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(const std::string& path);

// Figures of merit plus arbitrary extra fields, stamped with the config hash.
void write_fom_json(const std::string& path, const FiguresOfMerit& fom,
                    const std::string& config_hash, const nlohmann::json& extra = {});

void write_propagator_json(const std::string& path, const Propagator& prop,
                           const std::string& config_hash);
Propagator read_propagator_json(const std::string& path);

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  bool aggregate = false;
  std::string aggregate_kind;  // mean/min/max for aggregate rows
  std::vector<double> foms;
};

void write_sweep_csv(const std::string& path, const std::vector<std::string>& fom_names,
                     const std::string& param_name, const std::vector<SweepRow>& rows,
                     const std::string& config_hash);

// 8-bit grayscale PNG; values min-max normalized, row 0 at the top.
void write_png_gray(const std::string& path, const Eigen::MatrixXd& values);

}  // namespace twm
