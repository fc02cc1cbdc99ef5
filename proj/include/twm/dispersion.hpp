#pragma once

#include <string>
#include <vector>

#include "twm/grid.hpp"

namespace twm {

// Cubic interpolant with continuous first derivative (not-a-knot boundary
// conditions, so polynomials up to degree three are reproduced exactly).
class CubicSpline {
public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double derivative(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }

private:
  int segment(double x) const;
  std::vector<double> x_, y_, b_, c_, d_;  // y + b t + c t^2 + d t^3, t = x - x_i
};

// Effective-index dispersion of one guided field, ingested from a sampled
// table. beta(omega) = n_eff(omega) * omega / c; the group velocity comes from
// the analytic derivative of the interpolant.
class DispersionModel {
public:
  DispersionModel(std::vector<double> omega, std::vector<double> n_eff, double omega_central);

  double n_eff(double omega) const;
  double beta(double omega) const;            // rad/m
  double group_velocity(double omega) const;  // m/s

  double central_frequency() const { return omega_central_; }
  double central_group_velocity() const { return v_central_; }
  double central_beta() const { return beta_central_; }
  double omega_min() const { return spline_.x_min(); }
  double omega_max() const { return spline_.x_max(); }

private:
  void check_range(double omega, const char* op) const;

  CubicSpline spline_;
  double omega_central_ = 0.0;
  double v_central_ = 0.0;
  double beta_central_ = 0.0;
};

// Dispersion ingest: CSV with header `omega_rad_s,n_eff` or `lambda_m,n_eff`.
DispersionModel load_dispersion_csv(const std::string& path, double omega_central);
DispersionModel load_dispersion(std::vector<double> omega, std::vector<double> n_eff,
                                double omega_central);

struct WalkOffProfile {
  FrequencyGrid grid;
  std::vector<double> values;  // rad/m, one per grid point

  double at(int n) const { return values[n - 1]; }  // n in [1, count]
};

// Full-dispersion walk-off relative to the pump frame:
// dk_j(omega) = beta_j(omega) - beta_j(omega_j) - (omega - omega_j)/v_p(omega_p).
WalkOffProfile walk_off(const DispersionModel& field, const DispersionModel& pump,
                        const FrequencyGrid& grid);

enum class ProcessKind { PDC, QFC };

// Uncompensated three-wave-mixing phase mismatch at the band centers.
// PDC: beta_p - beta_s - beta_i with omega_p = omega_s + omega_i.
// QFC: beta_p + beta_s - beta_i with omega_p + omega_s = omega_i.
double baseline_phase_mismatch(const DispersionModel& pump, const DispersionModel& signal,
                               const DispersionModel& idler, double omega_p, double omega_s,
                               double omega_i, ProcessKind kind = ProcessKind::PDC);

}  // namespace twm
