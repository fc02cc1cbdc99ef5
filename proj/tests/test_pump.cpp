#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "twm/constants.hpp"
#include "twm/pump.hpp"

using namespace twm;

namespace {

const double kVp = 1.36e8;        // m/s
const double kOmegaP = 2.43e15;   // rad/s
const double kFwhm = 1.0e-12;     // s

std::vector<double> device_mesh(double length, int nodes) {
  std::vector<double> z(nodes);
  for (int i = 0; i < nodes; ++i) z[i] = length * i / (nodes - 1);
  return z;
}

SpmPhase no_spm(double length) { return SpmPhase::build(0.0, kVp, device_mesh(length, 33)); }

double spectral_norm(const PumpPulse& pulse, const SpmPhase& spm, double z, double half_window,
                     int n) {
  double acc = 0.0;
  double dw = 2.0 * half_window / (n - 1);
  for (int i = 0; i < n; ++i) {
    double w = kOmegaP - half_window + i * dw;
    double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += weight * std::norm(pump_spectral_amplitude(pulse, spm, z, w));
  }
  return acc * dw;
}

}  // namespace

TEST_CASE("Gaussian envelope integrates to the photon number") {
  PumpPulse p = PumpPulse::gaussian(2.5e7, kOmegaP, kVp, kFwhm);
  const int n = 20001;
  double a = p.support_min(), b = p.support_max();
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    double z = a + (b - a) * i / (n - 1);
    double weight = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += weight * std::norm(p.amplitude(z));
  }
  acc *= (b - a) / (n - 1);
  CHECK(acc == doctest::Approx(2.5e7).epsilon(1e-6));

  // Intensity FWHM maps to v_p * duration.
  double half = p.amplitude(0.0).real();
  double z_half = p.sigma_z() * std::sqrt(std::log(2.0));
  CHECK(std::norm(p.amplitude(z_half)) == doctest::Approx(0.5 * half * half).epsilon(1e-12));
  CHECK(2.0 * z_half == doctest::Approx(kVp * kFwhm).epsilon(1e-12));
}

TEST_CASE("tabulated envelopes are renormalized and interpolated") {
  std::vector<double> z = {-1e-4, 0.0, 1e-4};
  std::vector<std::complex<double>> a = {{0.0, 0.0}, {3.0, 0.0}, {0.0, 0.0}};
  PumpPulse p = PumpPulse::tabulated(1e6, kOmegaP, kVp, z, a);
  double mid = std::norm(p.amplitude(0.0));
  // triangle shape: integral |amp|^2 = mid^2 * (2/3) * 1e-4... renormalized to 1e6
  double acc = 0.0;
  const int n = 5001;
  for (int i = 0; i < n; ++i) {
    double zz = -1e-4 + 2e-4 * i / (n - 1);
    acc += std::norm(p.amplitude(zz)) * 2e-4 / (n - 1);
  }
  CHECK(acc == doctest::Approx(1e6).epsilon(1e-3));
  CHECK(mid > 0.0);
  CHECK_THROWS_AS(PumpPulse::tabulated(1e6, kOmegaP, kVp, {0.0, 0.0}, a), SimError);
}

TEST_CASE("spectral amplitude matches the analytic Gaussian transform without SPM") {
  PumpPulse p = PumpPulse::gaussian(1.5e6, kOmegaP, kVp, kFwhm);
  SpmPhase spm = no_spm(1e-3);
  double sigma = p.sigma_z();
  double prefactor = std::sqrt(kHbar * kOmegaP / (2.0 * M_PI * kVp));
  double peak = std::sqrt(1.5e6 / (sigma * std::sqrt(M_PI)));
  for (double detune : {0.0, 5.0e11, -1.2e12}) {
    double kappa = detune / kVp;
    std::complex<double> expected =
        prefactor * peak * sigma * std::sqrt(2.0 * M_PI) * std::exp(-0.5 * kappa * kappa * sigma * sigma);
    for (double z : {0.0, 5e-4, 1e-3}) {
      std::complex<double> got = pump_spectral_amplitude(p, spm, z, kOmegaP + detune);
      CHECK(std::abs(got - expected) < 1e-6 * std::abs(expected));
    }
  }
}

TEST_CASE("zero pump gives a vanishing spectral amplitude") {
  PumpPulse p = PumpPulse::gaussian(0.0, kOmegaP, kVp, kFwhm);
  SpmPhase spm = no_spm(1e-3);
  CHECK(pump_spectral_amplitude(p, spm, 0.0, kOmegaP) == std::complex<double>(0.0, 0.0));
}

TEST_CASE("SPM only redistributes spectral weight") {
  const double length = 1e-2;
  PumpPulse p = PumpPulse::gaussian(1e6, kOmegaP, kVp, kFwhm);
  double peak_power = std::norm(p.amplitude(0.0));
  double c_spm = 2.0 * kVp / (peak_power * length);  // ~2 rad peak phase
  SpmPhase spm = SpmPhase::build(c_spm, kVp, device_mesh(length, 257));

  double sigma_w = kVp / p.sigma_z();
  double half_window = 8.0 * sigma_w * 3.0;
  double n0 = spectral_norm(p, spm, 0.0, half_window, 4001);
  double n1 = spectral_norm(p, spm, length, half_window, 4001);
  CHECK(n1 == doctest::Approx(n0).epsilon(1e-4));

  // Parseval: the spectral norm carries the pulse energy hbar*omega_p*N_p.
  CHECK(n0 == doctest::Approx(kHbar * kOmegaP * 1e6).epsilon(1e-4));
}

TEST_CASE("energy distribution is the transform of the pulse power") {
  const double np = 5e3;
  PumpPulse p = PumpPulse::gaussian(np, kOmegaP, kVp, kFwhm);
  CHECK(std::abs(energy_distribution(p, 0.0) - kHbar * kOmegaP * np) <
        1e-6 * kHbar * kOmegaP * np);

  double sigma = p.sigma_z();
  for (double w : {4.0e11, 1.1e12, 2.5e12}) {
    std::complex<double> expected =
        kHbar * kOmegaP * np * std::exp(-w * w * sigma * sigma / (4.0 * kVp * kVp));
    std::complex<double> got = energy_distribution(p, w);
    CHECK(std::abs(got - expected) < 1e-6 * kHbar * kOmegaP * np);
    // Hermitian symmetry at t0 = 0
    std::complex<double> neg = energy_distribution(p, -w);
    CHECK(std::abs(neg - std::conj(got)) < 1e-12 * std::abs(got));
  }
}

TEST_CASE("pump loss schedule follows the exponential law") {
  PumpPulse p = PumpPulse::gaussian(1e6, kOmegaP, kVp, kFwhm);
  auto z = device_mesh(1e-2, 101);  // 1 cm

  std::vector<double> zero(z.size(), 0.0);
  auto flat = pump_loss_schedule(p, zero, z);
  for (double v : flat) CHECK(v == 1e6);

  // 0.5 dB/cm over 1 cm: power ratio 10^-0.05
  double alpha = 0.5 * std::log(10.0) / 10.0 * 100.0;  // 1/m
  std::vector<double> uniform(z.size(), alpha);
  auto lossy = pump_loss_schedule(p, uniform, z);
  CHECK(lossy.front() == 1e6);
  CHECK(lossy.back() / lossy.front() == doctest::Approx(std::pow(10.0, -0.05)).epsilon(1e-10));

  // exponential additivity across segments
  auto first_half = pump_loss_schedule(p, std::vector<double>(51, alpha), device_mesh(5e-3, 51));
  double whole = lossy.back() / lossy.front();
  double seg = first_half.back() / first_half.front();
  CHECK(whole == doctest::Approx(seg * seg).epsilon(1e-12));

  std::vector<double> bad(z.size(), -1.0);
  CHECK_THROWS_AS(pump_loss_schedule(p, bad, z), SimError);
}

TEST_CASE("SPM overlap figure of merit") {
  const double length = 1e-2;
  PumpPulse ref = PumpPulse::gaussian(1e6, kOmegaP, kVp, kFwhm);
  double peak_power = std::norm(ref.amplitude(0.0));
  double c_spm = 3.0 * kVp / (peak_power * length);  // ~3 rad at N_p = 1e6

  SUBCASE("no SPM gives exactly one") {
    SpmPhase spm = SpmPhase::build(0.0, kVp, device_mesh(length, 65));
    CHECK(spm_overlap_fom(ref, spm, length) == 1.0);
  }

  SUBCASE("vanishing photon number tends to one") {
    PumpPulse weak = PumpPulse::gaussian(1e-2, kOmegaP, kVp, kFwhm);
    SpmPhase spm = SpmPhase::build(c_spm, kVp, device_mesh(length, 257));
    CHECK(spm_overlap_fom(weak, spm, length) == doctest::Approx(1.0).epsilon(1e-6));
  }

  SUBCASE("monotone non-increasing in pump photons") {
    double prev = 1.0 + 1e-12;
    for (int k = 0; k < 10; ++k) {
      double np = 1e3 * std::pow(10.0, 3.0 * k / 9.0);  // 1e3 .. 1e6
      PumpPulse p = PumpPulse::gaussian(np, kOmegaP, kVp, kFwhm);
      SpmPhase spm = SpmPhase::build(c_spm, kVp, device_mesh(length, 257));
      double fom = spm_overlap_fom(p, spm, length);
      CHECK(fom <= prev + 1e-9);
      CHECK(fom >= 0.0);
      CHECK(fom <= 1.0 + 1e-12);
      prev = fom;
    }
    CHECK(prev < 0.9);  // the strongest point actually distorts the pump
  }

  SUBCASE("zero-norm pump is rejected") {
    PumpPulse none = PumpPulse::gaussian(0.0, kOmegaP, kVp, kFwhm);
    SpmPhase spm = SpmPhase::build(c_spm, kVp, device_mesh(length, 65));
    CHECK_THROWS_AS(spm_overlap_fom(none, spm, length), SimError);
  }
}

TEST_CASE("pump loss rescales the SPM phase and the amplitude") {
  const double length = 1e-2;
  PumpPulse p = PumpPulse::gaussian(1e6, kOmegaP, kVp, kFwhm);
  auto mesh = device_mesh(length, 129);
  double alpha = 0.5 * std::log(10.0) / 10.0 * 100.0;
  std::vector<double> decay(mesh.size());
  for (size_t i = 0; i < mesh.size(); ++i) decay[i] = std::exp(-alpha * mesh[i]);
  SpmPhase lossy = SpmPhase::build(0.0, kVp, mesh, decay);
  SpmPhase lossless = SpmPhase::build(0.0, kVp, mesh);

  std::complex<double> a0 = pump_spectral_amplitude(p, lossless, length, kOmegaP);
  std::complex<double> a1 = pump_spectral_amplitude(p, lossy, length, kOmegaP);
  CHECK(std::abs(a1) / std::abs(a0) ==
        doctest::Approx(std::sqrt(std::pow(10.0, -0.05))).epsilon(1e-9));
}
