#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>

#include "twm/poling.hpp"
#include "twm/scenario.hpp"

namespace twm {

// Declarative scenario description (JSON, // and /* */ comments allowed).
// Paths inside the document resolve relative to base_dir.
struct ScenarioConfig {
  nlohmann::json doc;
  std::string base_dir;
  std::string hash;  // 64-bit FNV-1a of the canonical dump, hex

  std::uint64_t master_seed() const;
};

ScenarioConfig parse_config(const std::string& text, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

// Resolves a dotted key path ("errors.loss_db_cm") and overwrites the value;
// the path must already exist so typos cannot create silent knobs.
void set_config_value(ScenarioConfig& cfg, const std::string& dotted_path, double value);
double get_config_value(const ScenarioConfig& cfg, const std::string& dotted_path);

// Scenario plus the artifacts needed for reporting and error injection.
struct BuiltScenario {
  Scenario scenario;
  PolingPattern ideal_poling;  // before domain-error injection
  double loss_db_cm = 0.0;
  std::uint64_t seed = 0;
};

// Instantiates a propagation-ready scenario. The seed drives the fabrication
// error draws (domain errors, inhomogeneity); pass the master seed for single
// runs or a derived one per sweep repetition.
BuiltScenario build_scenario(const ScenarioConfig& cfg, std::uint64_t seed);

inline double db_per_cm_to_linear(double db_cm) {
  // alpha in 1/m for the power law exp(-alpha z).
  return db_cm * std::log(10.0) / 10.0 * 100.0;
}

}  // namespace twm
