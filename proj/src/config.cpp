#include "twm/config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "twm/constants.hpp"
#include "twm/rng.hpp"

namespace twm {

namespace {

constexpr const char* kModule = "cli-harness";

[[noreturn]] void config_error(const std::string& key, const std::string& why) {
  throw SimError(kModule, "config", "key '" + key + "': " + why);
}

const nlohmann::json& require(const nlohmann::json& doc, const std::string& key) {
  if (!doc.contains(key)) config_error(key, "missing");
  return doc.at(key);
}

double require_number(const nlohmann::json& doc, const std::string& key) {
  const auto& v = require(doc, key);
  if (!v.is_number()) config_error(key, "must be a number");
  return v.get<double>();
}

double require_positive(const nlohmann::json& doc, const std::string& key) {
  double v = require_number(doc, key);
  if (!(v > 0.0)) config_error(key, "must be positive");
  return v;
}

double optional_number(const nlohmann::json& doc, const std::string& key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc.at(key).is_number()) config_error(key, "must be a number");
  return doc.at(key).get<double>();
}

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << h;
  return out.str();
}

std::string resolve_path(const ScenarioConfig& cfg, const std::string& rel) {
  std::filesystem::path p(rel);
  if (p.is_absolute()) return rel;
  return (std::filesystem::path(cfg.base_dir) / p).string();
}

DispersionModel load_dispersion_for(const ScenarioConfig& cfg, const nlohmann::json& disp,
                                    const std::string& key, double omega_central) {
  const auto& v = require(disp, key);
  if (!v.is_string()) config_error("dispersion." + key, "must be a file path");
  std::string path = resolve_path(cfg, v.get<std::string>());
  if (!std::filesystem::exists(path))
    throw SimError(kModule, "config",
                   "key 'dispersion." + key + "': file not found: " + path);
  return load_dispersion_csv(path, omega_central);
}

std::vector<Chi2Entry> parse_chi2(const nlohmann::json& arr) {
  std::vector<Chi2Entry> out;
  for (const auto& e : arr)
    out.push_back({e.at("j").get<int>(), e.at("k").get<int>(), e.at("l").get<int>(),
                   e.at("value").get<double>()});
  return out;
}

std::vector<Chi3Entry> parse_chi3(const nlohmann::json& arr) {
  std::vector<Chi3Entry> out;
  for (const auto& e : arr)
    out.push_back({e.at("j").get<int>(), e.at("k").get<int>(), e.at("l").get<int>(),
                   e.at("m").get<int>(), e.at("value").get<double>()});
  return out;
}

}  // namespace

std::uint64_t ScenarioConfig::master_seed() const {
  if (!doc.contains("seed") || !doc.at("seed").is_number_unsigned())
    config_error("seed", "missing or not a non-negative integer");
  return doc.at("seed").get<std::uint64_t>();
}

ScenarioConfig parse_config(const std::string& text, const std::string& base_dir) {
  ScenarioConfig cfg;
  try {
    cfg.doc = nlohmann::json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::exception& e) {
    throw SimError(kModule, "config", std::string("malformed JSON: ") + e.what());
  }
  if (!cfg.doc.is_object()) throw SimError(kModule, "config", "top level must be an object");
  cfg.base_dir = base_dir;
  cfg.hash = fnv1a_hex(cfg.doc.dump());
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError(kModule, "config", "cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::filesystem::path(path).parent_path().string());
}

void set_config_value(ScenarioConfig& cfg, const std::string& dotted_path, double value) {
  nlohmann::json* node = &cfg.doc;
  std::istringstream parts(dotted_path);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(parts, key, '.')) keys.push_back(key);
  if (keys.empty()) config_error(dotted_path, "empty parameter path");
  for (size_t i = 0; i + 1 < keys.size(); ++i) {
    if (!node->is_object() || !node->contains(keys[i]))
      config_error(dotted_path, "unknown parameter path");
    node = &(*node)[keys[i]];
  }
  if (!node->is_object() || !node->contains(keys.back()))
    config_error(dotted_path, "unknown parameter path");
  (*node)[keys.back()] = value;
  cfg.hash = fnv1a_hex(cfg.doc.dump());
}

double get_config_value(const ScenarioConfig& cfg, const std::string& dotted_path) {
  const nlohmann::json* node = &cfg.doc;
  std::istringstream parts(dotted_path);
  std::string key;
  while (std::getline(parts, key, '.')) {
    if (!node->is_object() || !node->contains(key))
      config_error(dotted_path, "unknown parameter path");
    node = &node->at(key);
  }
  if (!node->is_number()) config_error(dotted_path, "not a numeric value");
  return node->get<double>();
}

BuiltScenario build_scenario(const ScenarioConfig& cfg, std::uint64_t seed) {
  const nlohmann::json& doc = cfg.doc;
  BuiltScenario built;
  built.seed = seed;
  Scenario& s = built.scenario;

  std::string process = require(doc, "process").get<std::string>();
  if (process == "pdc")
    s.kind = ProcessKind::PDC;
  else if (process == "qfc")
    s.kind = ProcessKind::QFC;
  else
    config_error("process", "must be 'pdc' or 'qfc'");

  s.length = require_positive(require(doc, "device"), "length_m");

  const nlohmann::json& grids = require(doc, "grids");
  auto read_grid = [&](const std::string& key, FieldLabel label) {
    const nlohmann::json& g = require(grids, key);
    double center = require_positive(g, "center_rad_s");
    double width = require_positive(g, "width_rad_s");
    int count = require(g, "count").get<int>();
    if (count < 2) config_error("grids." + key + ".count", "must be at least 2");
    return grid_from_band(center, width, count, label);
  };
  s.signal_grid = read_grid("signal", FieldLabel::Signal);
  s.idler_grid = read_grid("idler", FieldLabel::Idler);

  double omega_s0 = 0.5 * (s.signal_grid.first() + s.signal_grid.last());
  double omega_i0 = 0.5 * (s.idler_grid.first() + s.idler_grid.last());
  double omega_p = s.kind == ProcessKind::PDC ? omega_s0 + omega_i0 : omega_i0 - omega_s0;
  if (omega_p <= 0.0) config_error("grids", "band centers violate energy conservation");

  const nlohmann::json& disp = require(doc, "dispersion");
  DispersionModel pump_disp = load_dispersion_for(cfg, disp, "pump_csv", omega_p);
  DispersionModel signal_disp = load_dispersion_for(cfg, disp, "signal_csv", omega_s0);
  DispersionModel idler_disp = load_dispersion_for(cfg, disp, "idler_csv", omega_i0);

  s.dk_s = walk_off(signal_disp, pump_disp, s.signal_grid);
  s.dk_i = walk_off(idler_disp, pump_disp, s.idler_grid);
  s.baseline_mismatch = baseline_phase_mismatch(pump_disp, signal_disp, idler_disp, omega_p,
                                                omega_s0, omega_i0, s.kind);

  const nlohmann::json& pump = require(doc, "pump");
  double photons = require_number(pump, "photon_number");
  if (photons < 0.0) config_error("pump.photon_number", "must be non-negative");
  double duration = require_positive(pump, "duration_fwhm_s");
  s.pump = PumpPulse::gaussian(photons, omega_p, pump_disp.central_group_velocity(), duration);
  s.c_spm_value = optional_number(pump, "c_spm", 0.0);

  const nlohmann::json& coeffs = require(doc, "coefficients");
  if (coeffs.contains("mode_grids")) {
    const nlohmann::json& mg = coeffs.at("mode_grids");
    ModeFieldGrid pm = load_mode_grid_csv(resolve_path(cfg, require(mg, "pump").get<std::string>()));
    ModeFieldGrid sm =
        load_mode_grid_csv(resolve_path(cfg, require(mg, "signal").get<std::string>()));
    ModeFieldGrid im =
        load_mode_grid_csv(resolve_path(cfg, require(mg, "idler").get<std::string>()));
    s.coeffs = overlap_coefficients(pm, sm, im, parse_chi2(require(coeffs, "chi2")),
                                    parse_chi3(require(coeffs, "chi3")), omega_p, omega_s0,
                                    omega_i0, s.kind);
    if (s.c_spm_value == 0.0) s.c_spm_value = s.coeffs.c_spm;
  } else {
    s.coeffs.c_twm = {require_number(coeffs, "c_twm_re"), optional_number(coeffs, "c_twm_im", 0.0)};
    s.coeffs.c_xpm_s = optional_number(coeffs, "c_xpm_s", 0.0);
    s.coeffs.c_xpm_i = optional_number(coeffs, "c_xpm_i", 0.0);
    s.coeffs.c_spm = s.c_spm_value;
  }

  const nlohmann::json& errors = require(doc, "errors");
  built.loss_db_cm = optional_number(errors, "loss_db_cm", 0.0);
  if (built.loss_db_cm < 0.0) config_error("errors.loss_db_cm", "must be non-negative");
  s.loss.alpha_uniform = db_per_cm_to_linear(built.loss_db_cm);
  s.loss.alpha_pump = db_per_cm_to_linear(optional_number(errors, "pump_loss_db_cm", 0.0));
  if (s.loss.alpha_pump < 0.0) config_error("errors.pump_loss_db_cm", "must be non-negative");

  const nlohmann::json& poling = require(doc, "poling");
  std::string type = require(poling, "type").get<std::string>();
  if (type != "none") {
    double period;
    const auto& pv = require(poling, "period_m");
    if (pv.is_string() && pv.get<std::string>() == "auto") {
      if (s.baseline_mismatch == 0.0)
        config_error("poling.period_m", "auto period requires a nonzero phase mismatch");
      period = 2.0 * M_PI / std::abs(s.baseline_mismatch);
    } else if (pv.is_number() && pv.get<double>() > 0.0) {
      period = pv.get<double>();
    } else {
      config_error("poling.period_m", "must be a positive number or 'auto'");
    }
    if (type == "periodic") {
      double duty = optional_number(poling, "duty", 0.5);
      if (duty <= 0.0 || duty >= 1.0) config_error("poling.duty", "must be inside (0, 1)");
      built.ideal_poling = periodic_poling(period, s.length, duty);
    } else if (type == "apodized") {
      double frac = optional_number(poling, "apodization_fwhm_fraction", 0.5);
      if (frac <= 0.0) config_error("poling.apodization_fwhm_fraction", "must be positive");
      double sigma = frac * s.length / (2.0 * std::sqrt(2.0 * std::log(2.0)));
      double mid = 0.5 * s.length;
      built.ideal_poling = apodized_poling(
          [sigma, mid](double z) {
            double u = (z - mid) / sigma;
            return std::exp(-0.5 * u * u);
          },
          period, s.length);
    } else {
      config_error("poling.type", "must be 'none', 'periodic' or 'apodized'");
    }
    DomainErrorModel dem;
    dem.boundary_shift = optional_number(errors, "boundary_shift_m", 0.0);
    dem.missing_probability = optional_number(errors, "missing_probability", 0.0);
    if (dem.missing_probability < 0.0 || dem.missing_probability > 1.0)
      config_error("errors.missing_probability", "must be inside [0, 1]");
    dem.seed = derive_seed(seed, 1);
    s.poling = inject_domain_errors(built.ideal_poling, dem);
  } else {
    built.ideal_poling.device_length = s.length;
    s.poling.device_length = s.length;
  }

  double range = optional_number(errors, "inhomogeneity_range", 0.0);
  if (range < 0.0) config_error("errors.inhomogeneity_range", "must be non-negative");
  int nodes = static_cast<int>(optional_number(errors, "inhomogeneity_nodes", 201));
  if (nodes < 2) config_error("errors.inhomogeneity_nodes", "must be at least 2");
  std::vector<double> inhom_mesh(nodes);
  for (int i = 0; i < nodes; ++i) inhom_mesh[i] = s.length * i / (nodes - 1);
  if (range > 0.0) {
    double smoothing = require_positive(errors, "smoothing_length_m");
    s.inhomogeneity = generate_inhomogeneity(range, smoothing, inhom_mesh, derive_seed(seed, 2));
  } else {
    s.inhomogeneity = flat_profile({0.0, s.length});
  }

  if (doc.contains("mesh")) {
    const nlohmann::json& mesh = doc.at("mesh");
    s.mesh.max_step = optional_number(mesh, "max_step_m", s.mesh.max_step);
    s.mesh.phase_budget = optional_number(mesh, "phase_budget", s.mesh.phase_budget);
    s.mesh.min_steps = static_cast<int>(optional_number(mesh, "min_steps", s.mesh.min_steps));
    if (s.mesh.max_step <= 0.0 || s.mesh.phase_budget <= 0.0 || s.mesh.min_steps < 1)
      config_error("mesh", "mesh controls must be positive");
  }

  s.finalize();
  return built;
}

}  // namespace twm
