#include "twm/propagator.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace twm {

namespace {

constexpr const char* kModule = "propagator-core";
const std::complex<double> kI(0.0, 1.0);

void check_finite(const Eigen::MatrixXcd& m, const char* op) {
  if (!m.allFinite()) throw SimError(kModule, op, "non-finite entries in the generator");
}

}  // namespace

Eigen::MatrixXcd Propagator::kss(bool include_loss) const {
  double e = include_loss ? eta_tot : 1.0;
  return e * k.topLeftCorner(n, n);
}

Eigen::MatrixXcd Propagator::ksi(bool include_loss) const {
  double e = include_loss ? eta_tot : 1.0;
  return e * k.topRightCorner(n, n);
}

Eigen::MatrixXcd Propagator::kis(bool include_loss) const {
  double e = include_loss ? eta_tot : 1.0;
  Eigen::MatrixXcd b = k.bottomLeftCorner(n, n);
  return e * (kind == ProcessKind::PDC ? b.conjugate().eval() : b);
}

Eigen::MatrixXcd Propagator::kii(bool include_loss) const {
  double e = include_loss ? eta_tot : 1.0;
  Eigen::MatrixXcd b = k.bottomRightCorner(n, n);
  return e * (kind == ProcessKind::PDC ? b.conjugate().eval() : b);
}

PumpFieldSampler::PumpFieldSampler(const Scenario& s)
    : s_(s), static_pump_(s.spm.zero()) {
  const int n = s.signal_grid.count;
  offset_ = s.kind == ProcessKind::PDC ? 0 : n - 1;
  cached_amp_.assign(2 * n + 1, {0.0, 0.0});
  cached_amp_valid_.assign(2 * n + 1, false);
  cached_energy_.assign(2 * n - 1, {0.0, 0.0});
  cached_energy_valid_.assign(2 * n - 1, false);
}

std::complex<double> PumpFieldSampler::pump_amplitude(double z, int idx) {
  const double dw = s_.signal_grid.spacing;
  double omega = s_.kind == ProcessKind::PDC
                     ? s_.signal_grid.band_start + s_.idler_grid.band_start + idx * dw
                     : s_.idler_grid.band_start - s_.signal_grid.band_start + idx * dw;
  if (!static_pump_) return pump_spectral_amplitude(s_.pump, s_.spm, z, omega);

  int slot = idx + offset_;
  if (slot < 0 || slot >= static_cast<int>(cached_amp_.size()))
    throw SimError(kModule, "assemble_step", "pump sample outside the covered band");
  if (!cached_amp_valid_[slot]) {
    // Without SPM the amplitude is z-independent up to the loss decay, which
    // pump_spectral_amplitude applies separately.
    cached_amp_[slot] = pump_spectral_amplitude(s_.pump, s_.spm, 0.0, omega);
    cached_amp_valid_[slot] = true;
  }
  double rel_decay = std::sqrt(s_.spm.decay_at(z) / s_.spm.decay_at(0.0));
  return cached_amp_[slot] * rel_decay;
}

std::complex<double> PumpFieldSampler::energy(int idx) {
  const int n = s_.signal_grid.count;
  int slot = idx + n - 1;
  if (slot < 0 || slot >= static_cast<int>(cached_energy_.size()))
    throw SimError(kModule, "assemble_step", "energy sample outside the covered band");
  if (!cached_energy_valid_[slot]) {
    cached_energy_[slot] = energy_distribution(s_.pump, idx * s_.signal_grid.spacing);
    cached_energy_valid_[slot] = true;
  }
  return cached_energy_[slot];
}

StepGenerator assemble_step(const Scenario& s, PumpFieldSampler& sampler, double z, double dz,
                            int g_override) {
  const int n = s.signal_grid.count;
  const double dw = s.signal_grid.spacing;
  StepGenerator step;
  step.dz = dz;
  step.f.resize(n, n);
  step.g = Eigen::MatrixXcd::Zero(n, n);
  step.h = Eigen::MatrixXcd::Zero(n, n);

  int g_sign = g_override != 0 ? g_override : s.poling.sample_g(std::min(z, s.length));
  double phase = s.inhomogeneity.cumulative_phase(s.baseline_mismatch, z);
  std::complex<double> f_pref = s.coeffs.c_twm * static_cast<double>(g_sign) /
                                std::sqrt(2.0 * M_PI) * std::exp(kI * phase) * dw;

  // A is needed at 2N-1 distinct sum/difference frequencies only.
  std::vector<std::complex<double>> amp(2 * n + 1);
  if (s.kind == ProcessKind::PDC)
    for (int idx = 2; idx <= 2 * n; ++idx) amp[idx] = sampler.pump_amplitude(z, idx);
  else
    for (int idx = -(n - 1); idx <= n - 1; ++idx)
      amp[idx + n - 1] = sampler.pump_amplitude(z, idx);

  for (int m = 1; m <= n; ++m)
    for (int nn = 1; nn <= n; ++nn) {
      int slot = s.kind == ProcessKind::PDC ? m + nn : (nn - m) + n - 1;
      step.f(m - 1, nn - 1) = f_pref * amp[slot];
    }

  const int h_here = 1;  // chi3 present over the whole device
  double decay = s.spm.decay_at(z);
  bool xpm_s = s.coeffs.c_xpm_s != 0.0;
  bool xpm_i = s.coeffs.c_xpm_i != 0.0;
  for (int m = 1; m <= n; ++m) {
    step.g(m - 1, m - 1) = s.dk_s.at(m);
    step.h(m - 1, m - 1) = s.dk_i.at(m);
  }
  if (xpm_s || xpm_i) {
    for (int m = 1; m <= n; ++m)
      for (int nn = 1; nn <= n; ++nn) {
        std::complex<double> e = sampler.energy(m - nn) * decay * static_cast<double>(h_here);
        if (xpm_s) step.g(m - 1, nn - 1) += s.coeffs.c_xpm_s / (2.0 * M_PI) * e * dw;
        if (xpm_i) step.h(m - 1, nn - 1) += s.coeffs.c_xpm_i / (2.0 * M_PI) * e * dw;
      }
  }
  return step;
}

Eigen::MatrixXcd step_q_matrix(const Scenario& s, PumpFieldSampler& sampler, double z,
                               int g_override) {
  StepGenerator step = assemble_step(s, sampler, z, 0.0, g_override);
  const int n = s.signal_grid.count;
  Eigen::MatrixXcd q(2 * n, 2 * n);
  q.topLeftCorner(n, n) = step.g;
  if (s.kind == ProcessKind::PDC) {
    q.topRightCorner(n, n) = step.f;
    q.bottomLeftCorner(n, n) = -step.f.adjoint();
    q.bottomRightCorner(n, n) = -step.h;
  } else {
    q.topRightCorner(n, n) = step.f.conjugate();
    q.bottomLeftCorner(n, n) = step.f.transpose();
    q.bottomRightCorner(n, n) = step.h;
  }
  return q;
}

Eigen::MatrixXcd step_exponential(const Eigen::MatrixXcd& q, double dz) {
  check_finite(q, "step_exponential");
  Eigen::MatrixXcd a = kI * dz * q;
  return a.exp();
}

Propagator trotter_propagate(const Scenario& s) { return trotter_propagate(s, build_mesh(s)); }

Propagator trotter_propagate(const Scenario& s, const std::vector<double>& mesh) {
  if (mesh.size() < 2 || mesh.front() < 0.0 || mesh.back() > s.length * (1.0 + 1e-12))
    throw SimError(kModule, "trotter_propagate", "mesh must lie inside [0, L]");
  for (double b : s.poling.boundaries()) {
    if (b <= mesh.front() || b >= mesh.back()) continue;
    auto it = std::lower_bound(mesh.begin(), mesh.end(), b - 1e-15 * s.length);
    if (it == mesh.end() || std::abs(*it - b) > 1e-12 * s.length)
      throw SimError(kModule, "trotter_propagate",
                     "mesh error: a step straddles a poling domain boundary");
  }

  PumpFieldSampler sampler(s);
  const int n = s.signal_grid.count;
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Identity(2 * n, 2 * n);

  Eigen::VectorXd eta_step;
  if (s.loss.frequency_dependent) {
    eta_step.resize(2 * n);
    for (int m = 0; m < n; ++m) {
      eta_step(m) = s.loss.alpha_signal[m];
      eta_step(n + m) = s.loss.alpha_idler[m];
    }
  }

  for (size_t l = 0; l + 1 < mesh.size(); ++l) {
    double dz = mesh[l + 1] - mesh[l];
    if (dz <= 0.0) continue;
    double mid = 0.5 * (mesh[l] + mesh[l + 1]);
    Eigen::MatrixXcd q = step_q_matrix(s, sampler, mid, s.poling.sample_g(mid));
    k = (step_exponential(q, dz) * k).eval();
    if (s.loss.frequency_dependent)
      k = ((-0.5 * dz * eta_step.array()).exp().matrix().asDiagonal() * k).eval();
  }

  Propagator prop;
  prop.k = std::move(k);
  prop.kind = s.kind;
  prop.n = n;
  prop.frequency_dependent_loss = s.loss.frequency_dependent;
  prop.eta_tot = s.loss.frequency_dependent
                     ? 1.0
                     : std::exp(-0.5 * s.loss.alpha_uniform * (mesh.back() - mesh.front()));
  return prop;
}

Propagator ode_reference(const Scenario& s, const std::vector<double>& mesh, int substeps) {
  if (s.loss.frequency_dependent)
    throw SimError(kModule, "ode_reference", "oracle supports lossless or uniform-band loss only");
  if (mesh.size() < 2) throw SimError(kModule, "ode_reference", "mesh must cover [0, L]");

  PumpFieldSampler sampler(s);
  const int n = s.signal_grid.count;
  Eigen::MatrixXcd k = Eigen::MatrixXcd::Identity(2 * n, 2 * n);

  for (size_t l = 0; l + 1 < mesh.size(); ++l) {
    double a = mesh[l], b = mesh[l + 1];
    if (b <= a) continue;
    // g is constant within a base interval; sample it once at the midpoint so
    // endpoint evaluations never read across a domain wall.
    int g_here = s.poling.sample_g(0.5 * (a + b));
    double h = (b - a) / substeps;
    for (int ss = 0; ss < substeps; ++ss) {
      double z0 = a + ss * h;
      Eigen::MatrixXcd q1 = kI * step_q_matrix(s, sampler, z0, g_here);
      Eigen::MatrixXcd qm = kI * step_q_matrix(s, sampler, z0 + 0.5 * h, g_here);
      Eigen::MatrixXcd q2 = kI * step_q_matrix(s, sampler, z0 + h, g_here);
      Eigen::MatrixXcd k1 = q1 * k;
      Eigen::MatrixXcd k2 = qm * (k + 0.5 * h * k1);
      Eigen::MatrixXcd k3 = qm * (k + 0.5 * h * k2);
      Eigen::MatrixXcd k4 = q2 * (k + h * k3);
      k += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
  }

  Propagator prop;
  prop.k = std::move(k);
  prop.kind = s.kind;
  prop.n = n;
  prop.eta_tot = std::exp(-0.5 * s.loss.alpha_uniform * (mesh.back() - mesh.front()));
  return prop;
}

Eigen::MatrixXcd InversePropagator::kbar_is() const {
  Eigen::MatrixXcd b = kbar.bottomLeftCorner(n, n);
  return kind == ProcessKind::PDC ? b.conjugate().eval() : b;
}

Eigen::MatrixXcd InversePropagator::kbar_ii() const {
  Eigen::MatrixXcd b = kbar.bottomRightCorner(n, n);
  return kind == ProcessKind::PDC ? b.conjugate().eval() : b;
}

InversePropagator inverse_propagator(const Propagator& prop) {
  if (prop.frequency_dependent_loss)
    throw SimError(kModule, "inverse_propagator",
                   "right inverse is defined for uniform-band loss only");
  if (prop.eta_tot <= 0.0)
    throw SimError(kModule, "inverse_propagator", "degenerate loss: eta_tot must be positive");

  InversePropagator inv;
  inv.kind = prop.kind;
  inv.n = prop.n;
  inv.eta_tot = prop.eta_tot;

  const int d = 2 * prop.n;
  if (prop.eta_tot == 1.0) {
    if (prop.kind == ProcessKind::QFC) {
      inv.kbar = prop.k.adjoint();
    } else {
      Eigen::VectorXcd jd(d);
      jd.head(prop.n).setOnes();
      jd.tail(prop.n).setConstant(-1.0);
      inv.kbar = jd.asDiagonal() * prop.k.adjoint() * jd.asDiagonal();
    }
    double err = (prop.k * inv.kbar - Eigen::MatrixXcd::Identity(d, d)).norm();
    if (err > 1e-9 * d)
      throw SimError(kModule, "inverse_propagator",
                     "numeric error: inverse verification exceeded tolerance");
  } else {
    // Minimum-norm right inverse of [eta K | sqrt(1-eta^2) I], system part.
    double eta = prop.eta_tot;
    Eigen::MatrixXcd gram = eta * eta * (prop.k * prop.k.adjoint()) +
                            (1.0 - eta * eta) * Eigen::MatrixXcd::Identity(d, d);
    inv.kbar = eta * prop.k.adjoint() * gram.ldlt().solve(Eigen::MatrixXcd::Identity(d, d));
  }
  return inv;
}

}  // namespace twm
