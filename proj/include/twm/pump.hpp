#pragma once

#include <complex>
#include <vector>

#include "twm/error.hpp"

namespace twm {

// Classical, undepleted pump pulse. The envelope lives in the co-moving
// coordinate z' and is normalized so that integral |Lambda|^2 dz' equals the
// total photon number.
class PumpPulse {
public:
  // Transform-limited Gaussian, parameterized by the intensity FWHM duration
  // (seconds) mapped into space through the pump group velocity.
  static PumpPulse gaussian(double photon_number, double omega_p, double group_velocity,
                            double duration_fwhm_s);

  // Tabulated envelope override; samples are interpolated linearly and
  // rescaled so the norm matches the photon number.
  static PumpPulse tabulated(double photon_number, double omega_p, double group_velocity,
                             std::vector<double> z, std::vector<std::complex<double>> amplitude);

  std::complex<double> amplitude(double z) const;  // photons^1/2 / m^1/2
  double photon_number() const { return photon_number_; }
  double omega_p() const { return omega_p_; }
  double group_velocity() const { return v_p_; }
  double support_min() const { return support_min_; }
  double support_max() const { return support_max_; }
  double sigma_z() const { return sigma_z_; }  // 0 for tabulated envelopes

private:
  PumpPulse() = default;

  double photon_number_ = 0.0;
  double omega_p_ = 0.0;
  double v_p_ = 0.0;
  double support_min_ = 0.0, support_max_ = 0.0;
  // Gaussian parameters
  bool is_gaussian_ = true;
  double sigma_z_ = 0.0;
  double peak_ = 0.0;
  // Tabulated samples
  std::vector<double> tab_z_;
  std::vector<std::complex<double>> tab_a_;
};

// Self-phase-modulation accumulator: S(z) = integral_0^z C_SPM(z'')/v_p dz''
// on a fixed mesh, clamped outside the device. With pump loss the decayed
// photon number rescales the pulse power seen by the phase.
struct SpmPhase {
  std::vector<double> z;           // device mesh
  std::vector<double> cumulative;  // S(z) values, cumulative trapezoid
  std::vector<double> pump_decay;  // N_p(z)/N_p(0) on the same mesh (all 1 if lossless)

  static SpmPhase build(double c_spm, double v_p, const std::vector<double>& mesh,
                        const std::vector<double>& pump_decay = {});

  double at(double position) const;           // S(position), clamped
  double decay_at(double position) const;     // N_p/N_p(0), clamped
  bool zero() const;
};

// Pump spectral amplitude A(z, omega) including the SPM phase; evaluated by
// adaptive quadrature over the envelope coordinate (t_0 = 0 throughout).
std::complex<double> pump_spectral_amplitude(const PumpPulse& pulse, const SpmPhase& spm,
                                             double z, double omega);

// Moving-frame energy distribution E(omega) of the pump.
std::complex<double> energy_distribution(const PumpPulse& pulse, double omega);

// N_p(z_l) = exp[-integral alpha] N_p(z_0) for the sampled loss profile
// alpha_lin(z) >= 0 (1/m), trapezoid-accumulated on the mesh.
std::vector<double> pump_loss_schedule(const PumpPulse& pulse,
                                       const std::vector<double>& alpha_lin,
                                       const std::vector<double>& positions);

// Overlap between the SPM-dressed and SPM-free spectral amplitude at the end
// of the device; 1 for vanishing SPM, decreasing with pump power.
double spm_overlap_fom(const PumpPulse& pulse, const SpmPhase& spm, double device_length);

}  // namespace twm
