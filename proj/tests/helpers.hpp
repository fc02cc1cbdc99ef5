#pragma once

#include <cmath>
#include <vector>

#include "twm/scenario.hpp"

namespace twm::testing {

// Synthetic but physically plausible scenario around 1550 nm, with walk-off
// profiles given directly (no dispersion files). The TWM coupling is passed
// as-is; use calibrate_coupling to hit a target low-gain strength.
struct ScenarioKnobs {
  ProcessKind kind = ProcessKind::PDC;
  int n = 8;
  double omega_s0 = 1.2153e15;      // rad/s
  double omega_i0 = 1.2153e15;      // PDC: partner band; QFC: output band (above signal)
  double band_width = 6.0e12;       // rad/s
  double length = 1.0e-3;           // m
  double v_p = 1.36e8;              // m/s
  double duration_fwhm = 1.0e-12;   // s
  double photons = 1.0e6;
  double c_twm = 0.0;
  double inv_group_mismatch_s = 4.0e-10;  // 1/v_s - 1/v_p, s/m
  double inv_group_mismatch_i = -2.0e-10;
  double gvd_s = 0.0;               // quadratic walk-off coefficient, s^2/m
  double gvd_i = 0.0;
  double baseline_mismatch = 0.0;   // rad/m
  double c_spm = 0.0;
  double alpha_uniform = 0.0;       // 1/m
  double alpha_pump = 0.0;
};

inline Scenario make_scenario(const ScenarioKnobs& k) {
  Scenario s;
  s.kind = k.kind;
  s.signal_grid = grid_from_band(k.omega_s0, k.band_width, k.n, FieldLabel::Signal);
  s.idler_grid = grid_from_band(k.omega_i0, k.band_width, k.n, FieldLabel::Idler);

  auto walkoff = [&](const FrequencyGrid& g, double center, double inv_mismatch, double gvd) {
    WalkOffProfile p;
    p.grid = g;
    p.values.resize(g.count);
    for (int m = 1; m <= g.count; ++m) {
      double d = g.point(m) - center;
      p.values[m - 1] = inv_mismatch * d + gvd * d * d;
    }
    return p;
  };
  s.dk_s = walkoff(s.signal_grid, k.omega_s0, k.inv_group_mismatch_s, k.gvd_s);
  s.dk_i = walkoff(s.idler_grid, k.omega_i0, k.inv_group_mismatch_i, k.gvd_i);

  s.baseline_mismatch = k.baseline_mismatch;
  s.length = k.length;
  double omega_p = k.kind == ProcessKind::PDC ? k.omega_s0 + k.omega_i0 : k.omega_i0 - k.omega_s0;
  s.pump = PumpPulse::gaussian(k.photons, omega_p, k.v_p, k.duration_fwhm);
  s.c_spm_value = k.c_spm;
  s.coeffs.c_twm = {k.c_twm, 0.0};
  s.coeffs.c_spm = k.c_spm;
  s.poling.device_length = k.length;
  s.inhomogeneity = flat_profile({0.0, k.length});
  s.loss.alpha_uniform = k.alpha_uniform;
  s.loss.alpha_pump = k.alpha_pump;
  s.finalize();
  return s;
}

// Chooses c_twm so that the peak entry of F times L equals `gain` (a proxy
// for the single-pair coupling strength; << 1 keeps the run in the low-gain
// regime).
inline double calibrate_coupling(const ScenarioKnobs& k, double gain) {
  ScenarioKnobs probe = k;
  probe.c_twm = 1.0;
  Scenario s = make_scenario(probe);
  double omega_p = s.pump.omega_p();
  double peak = std::abs(pump_spectral_amplitude(s.pump, s.spm, 0.0, omega_p));
  double dw = s.signal_grid.spacing;
  return gain * std::sqrt(2.0 * M_PI) / (peak * dw * k.length);
}

}  // namespace twm::testing
