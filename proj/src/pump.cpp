#include "twm/pump.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "twm/constants.hpp"

namespace twm {

namespace {

constexpr const char* kModule = "pump-field";
constexpr double kRelTol = 1e-6;

using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;

// `scale` sets the natural magnitude of the result so that nearly-cancelling
// oscillatory integrals (values far below scale) are not rejected.
std::complex<double> integrate_complex(const std::function<std::complex<double>(double)>& f,
                                       double a, double b, double scale, const char* op) {
  double err_re = 0.0, err_im = 0.0;
  double re = Quad::integrate([&](double x) { return f(x).real(); }, a, b, 12, kRelTol, &err_re);
  double im = Quad::integrate([&](double x) { return f(x).imag(); }, a, b, 12, kRelTol, &err_im);
  double mag = std::hypot(re, im);
  double err = err_re + err_im;
  if (err > kRelTol * std::max(mag, scale))
    throw SimError(kModule, op, "quadrature did not converge to tolerance");
  return {re, im};
}

}  // namespace

PumpPulse PumpPulse::gaussian(double photon_number, double omega_p, double group_velocity,
                              double duration_fwhm_s) {
  if (photon_number < 0.0)
    throw SimError(kModule, "pump_pulse", "photon number must be non-negative");
  if (group_velocity <= 0.0 || duration_fwhm_s <= 0.0)
    throw SimError(kModule, "pump_pulse", "group velocity and duration must be positive");
  PumpPulse p;
  p.photon_number_ = photon_number;
  p.omega_p_ = omega_p;
  p.v_p_ = group_velocity;
  p.is_gaussian_ = true;
  // Intensity FWHM in time -> spatial 1/e half width of the amplitude.
  p.sigma_z_ = group_velocity * duration_fwhm_s / (2.0 * std::sqrt(std::log(2.0)));
  p.peak_ = std::sqrt(photon_number / (p.sigma_z_ * std::sqrt(M_PI)));
  p.support_min_ = -8.0 * p.sigma_z_;
  p.support_max_ = 8.0 * p.sigma_z_;
  return p;
}

PumpPulse PumpPulse::tabulated(double photon_number, double omega_p, double group_velocity,
                               std::vector<double> z, std::vector<std::complex<double>> amplitude) {
  if (z.size() != amplitude.size() || z.size() < 2)
    throw SimError(kModule, "pump_pulse", "tabulated envelope needs matching samples (>= 2)");
  for (size_t i = 1; i < z.size(); ++i)
    if (!(z[i] > z[i - 1]))
      throw SimError(kModule, "pump_pulse", "tabulated envelope abscissae must increase");

  PumpPulse p;
  p.photon_number_ = photon_number;
  p.omega_p_ = omega_p;
  p.v_p_ = group_velocity;
  p.is_gaussian_ = false;
  p.tab_z_ = std::move(z);
  p.tab_a_ = std::move(amplitude);
  p.support_min_ = p.tab_z_.front();
  p.support_max_ = p.tab_z_.back();

  // Rescale so integral |Lambda|^2 dz = N_p.
  // Exact norm of the piecewise-linear interpolant:
  // integral |a + t (b - a)|^2 dt = (|a|^2 + Re(a conj(b)) + |b|^2) / 3.
  double norm = 0.0;
  for (size_t i = 1; i < p.tab_z_.size(); ++i) {
    const auto& a = p.tab_a_[i - 1];
    const auto& b = p.tab_a_[i];
    double seg = (std::norm(a) + (a * std::conj(b)).real() + std::norm(b)) / 3.0;
    norm += seg * (p.tab_z_[i] - p.tab_z_[i - 1]);
  }
  if (norm <= 0.0 && photon_number > 0.0)
    throw SimError(kModule, "pump_pulse", "tabulated envelope has zero norm");
  double scale = photon_number > 0.0 ? std::sqrt(photon_number / norm) : 0.0;
  for (auto& a : p.tab_a_) a *= scale;
  return p;
}

std::complex<double> PumpPulse::amplitude(double z) const {
  if (photon_number_ == 0.0) return 0.0;
  if (is_gaussian_) return peak_ * std::exp(-z * z / (2.0 * sigma_z_ * sigma_z_));
  if (z <= tab_z_.front() || z >= tab_z_.back()) return 0.0;
  auto it = std::upper_bound(tab_z_.begin(), tab_z_.end(), z);
  size_t i = static_cast<size_t>(it - tab_z_.begin()) - 1;
  double t = (z - tab_z_[i]) / (tab_z_[i + 1] - tab_z_[i]);
  return tab_a_[i] + t * (tab_a_[i + 1] - tab_a_[i]);
}

SpmPhase SpmPhase::build(double c_spm, double v_p, const std::vector<double>& mesh,
                         const std::vector<double>& pump_decay) {
  if (mesh.size() < 2)
    throw SimError(kModule, "spm_phase", "mesh needs at least two nodes");
  if (!pump_decay.empty() && pump_decay.size() != mesh.size())
    throw SimError(kModule, "spm_phase", "pump decay samples must match the mesh");

  SpmPhase out;
  out.z = mesh;
  out.pump_decay = pump_decay.empty() ? std::vector<double>(mesh.size(), 1.0) : pump_decay;
  out.cumulative.resize(mesh.size());
  out.cumulative[0] = 0.0;
  for (size_t i = 1; i < mesh.size(); ++i) {
    double fa = c_spm * out.pump_decay[i - 1] / v_p;
    double fb = c_spm * out.pump_decay[i] / v_p;
    out.cumulative[i] = out.cumulative[i - 1] + 0.5 * (fa + fb) * (mesh[i] - mesh[i - 1]);
  }
  return out;
}

double SpmPhase::at(double position) const {
  if (z.empty()) return 0.0;
  if (position <= z.front()) return cumulative.front();
  if (position >= z.back()) return cumulative.back();
  auto it = std::upper_bound(z.begin(), z.end(), position);
  size_t i = static_cast<size_t>(it - z.begin()) - 1;
  double t = (position - z[i]) / (z[i + 1] - z[i]);
  return cumulative[i] + t * (cumulative[i + 1] - cumulative[i]);
}

double SpmPhase::decay_at(double position) const {
  if (z.empty()) return 1.0;
  if (position <= z.front()) return pump_decay.front();
  if (position >= z.back()) return pump_decay.back();
  auto it = std::upper_bound(z.begin(), z.end(), position);
  size_t i = static_cast<size_t>(it - z.begin()) - 1;
  double t = (position - z[i]) / (z[i + 1] - z[i]);
  return pump_decay[i] + t * (pump_decay[i + 1] - pump_decay[i]);
}

bool SpmPhase::zero() const {
  return z.empty() || (cumulative.back() == 0.0 && cumulative.front() == 0.0);
}

std::complex<double> pump_spectral_amplitude(const PumpPulse& pulse, const SpmPhase& spm,
                                             double z, double omega) {
  if (pulse.photon_number() == 0.0) return 0.0;
  const double v_p = pulse.group_velocity();
  const double kappa = (omega - pulse.omega_p()) / v_p;
  const double s_z = spm.at(z);
  const double prefactor = std::sqrt(kHbar * pulse.omega_p() / (2.0 * M_PI * v_p));
  // Pump loss: amplitude decays with sqrt(N_p(z)/N_p(0)), and the decayed
  // power enters the SPM phase.
  const double decay = spm.decay_at(z);

  auto integrand = [&](double zp) -> std::complex<double> {
    std::complex<double> lam = pulse.amplitude(zp);
    double power = std::norm(lam) * spm.decay_at(zp);
    double phase = -kappa * zp + power * (s_z - spm.at(zp));
    return lam * std::complex<double>(std::cos(phase), std::sin(phase));
  };
  double scale =
      std::abs(pulse.amplitude(0.0)) * (pulse.support_max() - pulse.support_min());
  std::complex<double> value = integrate_complex(
      integrand, pulse.support_min(), pulse.support_max(), scale, "pump_spectral_amplitude");
  return prefactor * std::sqrt(decay) * value;
}

std::complex<double> energy_distribution(const PumpPulse& pulse, double omega) {
  if (pulse.photon_number() == 0.0) return 0.0;
  const double inv_vp = 1.0 / pulse.group_velocity();
  auto integrand = [&](double zp) -> std::complex<double> {
    double p = std::norm(pulse.amplitude(zp));
    double phase = -omega * zp * inv_vp;
    return p * std::complex<double>(std::cos(phase), std::sin(phase));
  };
  double scale =
      std::norm(pulse.amplitude(0.0)) * (pulse.support_max() - pulse.support_min());
  std::complex<double> value = integrate_complex(integrand, pulse.support_min(),
                                                 pulse.support_max(), scale, "energy_distribution");
  return kHbar * pulse.omega_p() * value;
}

std::vector<double> pump_loss_schedule(const PumpPulse& pulse,
                                       const std::vector<double>& alpha_lin,
                                       const std::vector<double>& positions) {
  if (alpha_lin.size() != positions.size())
    throw SimError(kModule, "pump_loss_schedule", "alpha samples must match the positions");
  for (double a : alpha_lin)
    if (a < 0.0) throw SimError(kModule, "pump_loss_schedule", "invalid loss: alpha must be >= 0");

  std::vector<double> out(positions.size());
  double integral = 0.0;
  for (size_t i = 0; i < positions.size(); ++i) {
    if (i > 0)
      integral += 0.5 * (alpha_lin[i - 1] + alpha_lin[i]) * (positions[i] - positions[i - 1]);
    out[i] = std::exp(-integral) * pulse.photon_number();
  }
  return out;
}

double spm_overlap_fom(const PumpPulse& pulse, const SpmPhase& spm, double device_length) {
  if (pulse.photon_number() <= 0.0)
    throw SimError(kModule, "spm_overlap_fom", "undefined overlap: zero-norm field");

  SpmPhase no_spm = spm;
  std::fill(no_spm.cumulative.begin(), no_spm.cumulative.end(), 0.0);

  // Spectral window: the bare Gaussian width inflated by the peak SPM phase,
  // which bounds the nonlinear broadening.
  double sigma_z = pulse.sigma_z() > 0.0
                       ? pulse.sigma_z()
                       : 0.25 * (pulse.support_max() - pulse.support_min());
  double sigma_w = pulse.group_velocity() / sigma_z;
  double peak_power = std::norm(pulse.amplitude(0.0));
  double peak_phase = std::abs(peak_power * (spm.at(device_length) - spm.at(pulse.support_min())));
  double half_window = 8.0 * sigma_w * (1.0 + peak_phase);

  const int n = 1201;
  const double dw = 2.0 * half_window / (n - 1);
  std::complex<double> cross(0.0, 0.0);
  double norm_a = 0.0, norm_b = 0.0;
  for (int i = 0; i < n; ++i) {
    double w = pulse.omega_p() - half_window + i * dw;
    double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    std::complex<double> a = pump_spectral_amplitude(pulse, spm, device_length, w);
    std::complex<double> b = pump_spectral_amplitude(pulse, no_spm, device_length, w);
    cross += weight * a * std::conj(b);
    norm_a += weight * std::norm(a);
    norm_b += weight * std::norm(b);
  }
  if (norm_a <= 0.0 || norm_b <= 0.0)
    throw SimError(kModule, "spm_overlap_fom", "undefined overlap: zero-norm field");
  return std::norm(cross) / (norm_a * norm_b);
}

}  // namespace twm
