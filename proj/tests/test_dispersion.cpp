#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "twm/constants.hpp"
#include "twm/dispersion.hpp"

using namespace twm;

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("constant n_eff gives v_g = c/n everywhere") {
  auto omega = linspace(1.0e15, 1.4e15, 9);
  std::vector<double> n_eff(omega.size(), 2.0);
  DispersionModel m = load_dispersion(omega, n_eff, 1.2e15);
  for (double w : {1.05e15, 1.2e15, 1.35e15}) {
    CHECK(m.group_velocity(w) == doctest::Approx(kSpeedOfLight / 2.0).epsilon(1e-12));
    CHECK(m.beta(w) == doctest::Approx(2.0 * w / kSpeedOfLight).epsilon(1e-12));
  }
}

TEST_CASE("linear n_eff slope enters the group velocity analytically") {
  const double a = 1.0e-17;  // s
  auto omega = linspace(1.0e15, 1.4e15, 9);
  std::vector<double> n_eff(omega.size());
  for (size_t i = 0; i < omega.size(); ++i) n_eff[i] = 2.0 + a * omega[i];
  DispersionModel m = load_dispersion(omega, n_eff, 1.2e15);
  for (double w : {1.1e15, 1.2e15, 1.3e15}) {
    double expected = kSpeedOfLight / (2.0 + 2.0 * a * w);
    CHECK(m.group_velocity(w) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("interpolation reproduces every input sample") {
  auto omega = linspace(1.0e15, 1.5e15, 11);
  std::vector<double> n_eff(omega.size());
  for (size_t i = 0; i < omega.size(); ++i)
    n_eff[i] = 2.0 + 0.1 * std::sin(omega[i] / 1.0e14);
  DispersionModel m = load_dispersion(omega, n_eff, 1.2e15);
  for (size_t i = 0; i < omega.size(); ++i)
    CHECK(m.n_eff(omega[i]) == doctest::Approx(n_eff[i]).epsilon(1e-14));
}

TEST_CASE("out-of-range queries and malformed tables are rejected") {
  auto omega = linspace(1.0e15, 1.4e15, 5);
  std::vector<double> n_eff(omega.size(), 2.0);
  DispersionModel m = load_dispersion(omega, n_eff, 1.2e15);
  CHECK_THROWS_AS((void)m.beta(0.9e15), SimError);
  CHECK_THROWS_AS((void)m.group_velocity(1.5e15), SimError);

  std::vector<double> bad = omega;
  std::swap(bad[1], bad[2]);
  CHECK_THROWS_AS(load_dispersion(bad, n_eff, 1.2e15), SimError);
  CHECK_THROWS_AS(load_dispersion({1.0e15, 1.1e15, 1.2e15}, {2.0, 2.0, 2.0}, 1.1e15), SimError);
}

namespace {

// Builds a model whose beta(omega) matches the given values exactly at the
// sample abscissae (n_eff back-computed from beta).
DispersionModel model_from_beta(const std::vector<double>& omega,
                                const std::vector<double>& beta, double omega_central) {
  std::vector<double> n_eff(omega.size());
  for (size_t i = 0; i < omega.size(); ++i) n_eff[i] = beta[i] * kSpeedOfLight / omega[i];
  return load_dispersion(omega, n_eff, omega_central);
}

}  // namespace

TEST_CASE("walk-off vanishes for a co-propagating identical linear field") {
  const double w0 = 1.2e15, v = 1.3e8;
  FrequencyGrid grid = grid_from_band(w0, 4.0e13, 9, FieldLabel::Signal);
  std::vector<double> omega = grid.points();
  omega.insert(omega.begin(), grid.first() - 2.0 * grid.spacing);
  omega.push_back(grid.last() + 2.0 * grid.spacing);
  std::vector<double> beta(omega.size());
  for (size_t i = 0; i < omega.size(); ++i) beta[i] = 1.0e6 + (omega[i] - w0) / v;
  DispersionModel field = model_from_beta(omega, beta, w0);
  WalkOffProfile p = walk_off(field, field, grid);
  for (int m = 1; m <= grid.count; ++m) CHECK(std::abs(p.at(m)) < 1e-6 * 1.0e6);
}

TEST_CASE("quadratic beta term appears verbatim in the walk-off") {
  const double w0 = 1.2e15, b = 3.0e-25;  // s^2/m
  FrequencyGrid grid = grid_from_band(w0, 4.0e13, 8, FieldLabel::Signal);

  // Pump with constant n_eff so v_p is exact; field shares its group slope.
  auto pump_omega = linspace(2.3e15, 2.5e15, 7);
  std::vector<double> pump_n(pump_omega.size(), 2.2);
  DispersionModel pump = load_dispersion(pump_omega, pump_n, 2.4e15);
  double v_p = kSpeedOfLight / 2.2;

  std::vector<double> omega = grid.points();
  omega.insert(omega.begin(), grid.first() - 2.0 * grid.spacing);
  omega.push_back(w0);  // band center must be a sample so beta(w0) is exact
  omega.push_back(grid.last() + 2.0 * grid.spacing);
  std::sort(omega.begin(), omega.end());
  std::vector<double> beta(omega.size());
  for (size_t i = 0; i < omega.size(); ++i) {
    double d = omega[i] - w0;
    beta[i] = 2.0e6 + d / v_p + b * d * d;
  }
  DispersionModel field = model_from_beta(omega, beta, w0);
  WalkOffProfile p = walk_off(field, pump, grid);
  for (int m : {1, 4, 8}) {
    double d = grid.point(m) - w0;
    CHECK(p.at(m) == doctest::Approx(b * d * d).epsilon(1e-6));
  }
}

TEST_CASE("linear beta with a group mismatch recovers the first-order form") {
  const double w0 = 1.2e15;
  const double v_j = 1.30e8, v_p_val = 1.36e8;
  FrequencyGrid grid = grid_from_band(w0, 4.0e13, 8, FieldLabel::Signal);

  auto pump_omega = linspace(2.3e15, 2.5e15, 7);
  std::vector<double> pump_n(pump_omega.size(), kSpeedOfLight / v_p_val);
  DispersionModel pump = load_dispersion(pump_omega, pump_n, 2.4e15);

  std::vector<double> omega = grid.points();
  omega.insert(omega.begin(), grid.first() - 2.0 * grid.spacing);
  omega.push_back(grid.last() + 2.0 * grid.spacing);
  std::vector<double> beta(omega.size());
  for (size_t i = 0; i < omega.size(); ++i) beta[i] = 2.0e6 + (omega[i] - w0) / v_j;
  DispersionModel field = model_from_beta(omega, beta, w0);
  WalkOffProfile p = walk_off(field, pump, grid);
  for (int m : {2, 5, 7}) {
    double d = grid.point(m) - w0;
    double expected = (1.0 / v_j - 1.0 / v_p_val) * d;
    CHECK(p.at(m) == doctest::Approx(expected).epsilon(1e-6));
  }
}

TEST_CASE("walk-off agrees at shared frequencies under grid refinement") {
  const double w0 = 1.2e15, b = 3.0e-25;
  auto pump_omega = linspace(2.3e15, 2.5e15, 7);
  std::vector<double> pump_n(pump_omega.size(), 2.2);
  DispersionModel pump = load_dispersion(pump_omega, pump_n, 2.4e15);

  auto omega = linspace(w0 - 4.0e13, w0 + 4.0e13, 81);
  std::vector<double> beta(omega.size());
  for (size_t i = 0; i < omega.size(); ++i) {
    double d = omega[i] - w0;
    beta[i] = 2.0e6 + d / (kSpeedOfLight / 2.2) + b * d * d;
  }
  DispersionModel field = model_from_beta(omega, beta, w0);

  FrequencyGrid coarse = build_grid(w0 - 2.4e13, 8.0e12, 4, FieldLabel::Signal);
  FrequencyGrid fine = build_grid(w0 - 2.0e13, 4.0e12, 8, FieldLabel::Signal);
  WalkOffProfile pc = walk_off(field, pump, coarse);
  WalkOffProfile pf = walk_off(field, pump, fine);
  for (int m = 1; m <= coarse.count; ++m)
    CHECK(pc.at(m) == doctest::Approx(pf.at(2 * m - 1)).epsilon(1e-9));
}

TEST_CASE("baseline phase mismatch follows the beta arithmetic") {
  const double w_s = 1.2e15, w_i = 1.3e15, w_p = w_s + w_i;
  // beta with a physical group slope whose central value hits the target.
  auto make_const_beta = [&](double beta_target, double w_center) {
    auto omega = linspace(w_center * 0.9, w_center * 1.1, 7);
    std::vector<double> n_eff(omega.size());
    for (size_t i = 0; i < omega.size(); ++i) {
      double beta = beta_target + (omega[i] - w_center) / 1.3e8;
      n_eff[i] = beta * kSpeedOfLight / omega[i];
    }
    return load_dispersion(omega, n_eff, w_center);
  };
  DispersionModel p = make_const_beta(10.0, w_p);
  DispersionModel s = make_const_beta(4.0, w_s);
  DispersionModel i = make_const_beta(3.0, w_i);
  CHECK(baseline_phase_mismatch(p, s, i, w_p, w_s, w_i, ProcessKind::PDC) ==
        doctest::Approx(3.0).epsilon(1e-9));

  // Phase-matched combination gives zero.
  DispersionModel s2 = make_const_beta(4.0, w_s);
  DispersionModel i2 = make_const_beta(6.0, w_i);
  CHECK(std::abs(baseline_phase_mismatch(p, s2, i2, w_p, w_s, w_i, ProcessKind::PDC)) < 1e-9);

  // QFC flips the signal sign: beta_p + beta_s - beta_i with w_i = w_p + w_s.
  double w_i_qfc = w_p + w_s;
  DispersionModel i3 = make_const_beta(5.0, w_i_qfc);
  CHECK(baseline_phase_mismatch(p, s, i3, w_p, w_s, w_i_qfc, ProcessKind::QFC) ==
        doctest::Approx(10.0 + 4.0 - 5.0).epsilon(1e-9));

  CHECK_THROWS_AS(
      baseline_phase_mismatch(p, s, i, w_p * (1.0 + 1e-6), w_s, w_i, ProcessKind::PDC), SimError);
}

TEST_CASE("dispersion CSV ingest supports both header conventions") {
  auto omega = linspace(1.0e15, 1.4e15, 6);
  std::string p1 = "/tmp/twm_disp_omega.csv";
  {
    std::ofstream out(p1);
    out << "omega_rad_s,n_eff\n";
    for (double w : omega) out << std::scientific << w << "," << 2.0 + 1e-17 * w << "\n";
  }
  DispersionModel m1 = load_dispersion_csv(p1, 1.2e15);
  CHECK(m1.n_eff(1.2e15) == doctest::Approx(2.0 + 1e-17 * 1.2e15).epsilon(1e-10));

  std::string p2 = "/tmp/twm_disp_lambda.csv";
  {
    std::ofstream out(p2);
    out << "lambda_m,n_eff\n";
    for (double w : omega) {
      double lambda = 2.0 * M_PI * kSpeedOfLight / w;
      out.precision(17);
      out << std::scientific << lambda << "," << 2.0 + 1e-17 * w << "\n";
    }
  }
  DispersionModel m2 = load_dispersion_csv(p2, 1.2e15);
  CHECK(m2.n_eff(1.1e15) == doctest::Approx(m1.n_eff(1.1e15)).epsilon(1e-9));

  CHECK_THROWS_AS(load_dispersion_csv("/tmp/twm_missing_file.csv", 1.2e15), SimError);
}
