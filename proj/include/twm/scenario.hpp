#pragma once

#include <limits>
#include <vector>

#include "twm/dispersion.hpp"
#include "twm/grid.hpp"
#include "twm/inhomogeneity.hpp"
#include "twm/mode_overlap.hpp"
#include "twm/poling.hpp"
#include "twm/pump.hpp"

namespace twm {

struct LossModel {
  double alpha_uniform = 0.0;           // 1/m, signal and idler bands
  double alpha_pump = 0.0;              // 1/m
  bool frequency_dependent = false;
  std::vector<double> alpha_signal;     // 1/m per signal grid point
  std::vector<double> alpha_idler;      // 1/m per idler grid point
};

struct MeshControls {
  double max_step = std::numeric_limits<double>::infinity();  // m
  double phase_budget = 0.1;  // max phase advance (rad) of any Q entry per step
  int min_steps = 16;
};

// Everything needed to propagate one device configuration. Immutable once
// finalized; safe to share across sweep workers.
struct Scenario {
  ProcessKind kind = ProcessKind::PDC;
  FrequencyGrid signal_grid, idler_grid;
  WalkOffProfile dk_s, dk_i;
  double baseline_mismatch = 0.0;  // rad/m
  double length = 0.0;             // m
  PumpPulse pump = PumpPulse::gaussian(0.0, 1.0, 1.0, 1.0);
  SpmPhase spm;                    // built by finalize()
  double c_spm_value = 0.0;        // raw C_SPM used to build spm
  PolingPattern poling;            // empty domains = unpoled (+1 throughout)
  InhomogeneityProfile inhomogeneity;
  InteractionCoefficients coeffs;
  LossModel loss;
  MeshControls mesh;

  // Validates grid compatibility and builds the SPM phase accumulator and the
  // pump decay samples on an internal device mesh.
  void finalize(int spm_mesh_nodes = 257);
};

// Propagation mesh: poling boundaries, inhomogeneity nodes, and a step
// ceiling keeping both |Q| dz and the fastest mismatch phase below the
// configured budget. A step never straddles a domain boundary.
std::vector<double> build_mesh(const Scenario& s);

}  // namespace twm
