#include "twm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "twm/propagator.hpp"

namespace twm {

namespace {
constexpr const char* kModule = "propagator-core";
}

void Scenario::finalize(int spm_mesh_nodes) {
  if (signal_grid.count != idler_grid.count)
    throw SimError(kModule, "finalize", "signal and idler grids must have equal N");
  if (std::abs(signal_grid.spacing - idler_grid.spacing) >
      1e-9 * std::abs(signal_grid.spacing))
    throw SimError(kModule, "finalize", "signal and idler grids must share the spacing");
  if (length <= 0.0) throw SimError(kModule, "finalize", "device length must be positive");
  if (static_cast<int>(dk_s.values.size()) != signal_grid.count ||
      static_cast<int>(dk_i.values.size()) != idler_grid.count)
    throw SimError(kModule, "finalize", "walk-off profiles must match the grids");
  if (loss.frequency_dependent &&
      (static_cast<int>(loss.alpha_signal.size()) != signal_grid.count ||
       static_cast<int>(loss.alpha_idler.size()) != idler_grid.count))
    throw SimError(kModule, "finalize", "frequency-dependent loss must match the grids");

  std::vector<double> nodes(spm_mesh_nodes);
  for (int i = 0; i < spm_mesh_nodes; ++i)
    nodes[i] = length * static_cast<double>(i) / (spm_mesh_nodes - 1);
  std::vector<double> decay;
  if (loss.alpha_pump > 0.0) {
    decay.resize(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i) decay[i] = std::exp(-loss.alpha_pump * nodes[i]);
  }
  spm = SpmPhase::build(c_spm_value, pump.group_velocity(), nodes, decay);
}

std::vector<double> build_mesh(const Scenario& s) {
  // Base breakpoints: device ends, poling boundaries, inhomogeneity nodes.
  std::set<double> base{0.0, s.length};
  for (double b : s.poling.boundaries())
    if (b > 0.0 && b < s.length) base.insert(b);
  for (double z : s.inhomogeneity.z)
    if (z > 0.0 && z < s.length) base.insert(z);

  // Step ceiling from the generator magnitude and the fastest phase.
  PumpFieldSampler sampler(s);
  const int n = s.signal_grid.count;
  const double dw = s.signal_grid.spacing;
  double f_frob2 = 0.0;
  for (int m = 1; m <= n; ++m)
    for (int nn = 1; nn <= n; ++nn) {
      int idx = s.kind == ProcessKind::PDC ? m + nn : nn - m;
      f_frob2 += std::norm(sampler.pump_amplitude(0.0, idx));
    }
  double f_norm = std::abs(s.coeffs.c_twm) / std::sqrt(2.0 * M_PI) * dw * std::sqrt(f_frob2);

  double e_frob2 = 0.0;
  if (s.coeffs.c_xpm_s != 0.0 || s.coeffs.c_xpm_i != 0.0)
    for (int m = 1; m <= n; ++m)
      for (int nn = 1; nn <= n; ++nn) e_frob2 += std::norm(sampler.energy(m - nn));
  double xpm_norm = std::max(std::abs(s.coeffs.c_xpm_s), std::abs(s.coeffs.c_xpm_i)) /
                    (2.0 * M_PI) * dw * std::sqrt(e_frob2);

  double dk_max = 0.0;
  for (double v : s.dk_s.values) dk_max = std::max(dk_max, std::abs(v));
  for (double v : s.dk_i.values) dk_max = std::max(dk_max, std::abs(v));

  double inhom_max = 0.0;
  for (double v : s.inhomogeneity.values) inhom_max = std::max(inhom_max, std::abs(v));

  double q_bound = dk_max + f_norm + xpm_norm;
  double phase_rate = std::abs(s.baseline_mismatch) + inhom_max + dk_max;

  double dz_max = s.mesh.max_step;
  if (q_bound > 0.0) dz_max = std::min(dz_max, 0.1 / q_bound);
  if (phase_rate > 0.0) dz_max = std::min(dz_max, s.mesh.phase_budget / phase_rate);
  dz_max = std::min(dz_max, s.length / std::max(1, s.mesh.min_steps));

  std::vector<double> mesh;
  double prev = 0.0;
  bool first = true;
  for (double b : base) {
    if (first) {
      mesh.push_back(b);
      prev = b;
      first = false;
      continue;
    }
    double len = b - prev;
    int parts = std::max(1, static_cast<int>(std::ceil(len / dz_max)));
    for (int p = 1; p <= parts; ++p) mesh.push_back(prev + len * p / parts);
    prev = b;
  }
  return mesh;
}

}  // namespace twm
