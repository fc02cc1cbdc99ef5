#pragma once

#include <Eigen/Core>
#include <complex>

#include "twm/scenario.hpp"

namespace twm {

// Step generator blocks of the discretized equations of motion at one z.
struct StepGenerator {
  Eigen::MatrixXcd f, g, h;  // N x N
  double dz = 0.0;
};

// 2N x 2N transfer matrix. For PDC it acts on (a_s, a_i^dag) and is
// pseudo-unitary w.r.t. J = diag(I, -I); for QFC it acts on (a_s, a_i) and is
// unitary (lossless). With uniform-band loss the physical map is
// eta_tot * K plus vacuum noise; eta_tot is kept separate so the stored K
// retains its commutator-preserving structure.
struct Propagator {
  Eigen::MatrixXcd k;
  ProcessKind kind = ProcessKind::PDC;
  int n = 0;
  double eta_tot = 1.0;
  bool frequency_dependent_loss = false;

  // Physical blocks in the paper's labeling (conjugation conventions for the
  // PDC lower row applied). include_loss multiplies by eta_tot.
  Eigen::MatrixXcd kss(bool include_loss = true) const;
  Eigen::MatrixXcd ksi(bool include_loss = true) const;
  Eigen::MatrixXcd kis(bool include_loss = true) const;
  Eigen::MatrixXcd kii(bool include_loss = true) const;
};

// Samples the pump spectral amplitude and energy distribution at the
// sum/difference frequencies required by the step generator, caching the
// z-independent case (no SPM).
class PumpFieldSampler {
public:
  explicit PumpFieldSampler(const Scenario& s);

  // A(z, omega_{i,n} +/- omega_{s,m}) with idx = m+n (PDC) or n-m (QFC).
  std::complex<double> pump_amplitude(double z, int idx);
  // E(omega_m - omega_n) at the pump input; idx = m-n. Per-step pump decay is
  // applied by the caller.
  std::complex<double> energy(int idx);

private:
  const Scenario& s_;
  bool static_pump_;
  int offset_;  // idx -> storage index shift
  std::vector<std::complex<double>> cached_amp_;
  std::vector<bool> cached_amp_valid_;
  std::vector<std::complex<double>> cached_energy_;
  std::vector<bool> cached_energy_valid_;
};

StepGenerator assemble_step(const Scenario& s, PumpFieldSampler& sampler, double z, double dz,
                            int g_override);

// Q(z) with the process-kind block structure applied.
Eigen::MatrixXcd step_q_matrix(const Scenario& s, PumpFieldSampler& sampler, double z,
                               int g_override);

// exp(i Q dz) via scaling-and-squaring Pade.
Eigen::MatrixXcd step_exponential(const Eigen::MatrixXcd& q, double dz);

Propagator trotter_propagate(const Scenario& s);
Propagator trotter_propagate(const Scenario& s, const std::vector<double>& mesh);

// Independent check: classical RK4 on dK/dz = i Q(z) K over the same mesh
// (substeps per interval), lossless or uniform loss only.
Propagator ode_reference(const Scenario& s, const std::vector<double>& mesh, int substeps = 4);

// Backward-evolution blocks for non-vacuum inputs. Lossless propagators
// invert exactly (J K^dag J for PDC, K^dag for QFC); uniform loss yields the
// system part of the minimum-norm right inverse of [eta K | sqrt(1-eta^2) I].
struct InversePropagator {
  Eigen::MatrixXcd kbar;  // 2N x 2N, numeric convention of Propagator::k
  ProcessKind kind = ProcessKind::PDC;
  int n = 0;
  double eta_tot = 1.0;

  Eigen::MatrixXcd kbar_ss() const { return kbar.topLeftCorner(n, n); }
  Eigen::MatrixXcd kbar_si() const { return kbar.topRightCorner(n, n); }
  Eigen::MatrixXcd kbar_is() const;
  Eigen::MatrixXcd kbar_ii() const;
};

InversePropagator inverse_propagator(const Propagator& prop);

}  // namespace twm
