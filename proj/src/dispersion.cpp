#include "twm/dispersion.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "twm/constants.hpp"

namespace twm {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const int n = static_cast<int>(x_.size());
  if (n < 4 || y_.size() != x_.size())
    throw SimError("spectral-dispersion", "load_dispersion", "malformed table: need >= 4 samples");
  for (int i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw SimError("spectral-dispersion", "load_dispersion",
                     "malformed table: abscissae must be strictly increasing");

  // Solve for the second derivatives M_i with not-a-knot boundary conditions.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  std::vector<double> h(n - 1);
  for (int i = 0; i < n - 1; ++i) h[i] = x_[i + 1] - x_[i];

  for (int i = 1; i < n - 1; ++i) {
    A(i, i - 1) = h[i - 1];
    A(i, i) = 2.0 * (h[i - 1] + h[i]);
    A(i, i + 1) = h[i];
    rhs(i) = 6.0 * ((y_[i + 1] - y_[i]) / h[i] - (y_[i] - y_[i - 1]) / h[i - 1]);
  }
  // Not-a-knot: third derivative continuous across the first and last
  // interior knots.
  A(0, 0) = h[1];
  A(0, 1) = -(h[0] + h[1]);
  A(0, 2) = h[0];
  A(n - 1, n - 3) = h[n - 2];
  A(n - 1, n - 2) = -(h[n - 3] + h[n - 2]);
  A(n - 1, n - 1) = h[n - 3];

  Eigen::VectorXd m = A.partialPivLu().solve(rhs);

  b_.resize(n - 1);
  c_.resize(n - 1);
  d_.resize(n - 1);
  for (int i = 0; i < n - 1; ++i) {
    b_[i] = (y_[i + 1] - y_[i]) / h[i] - h[i] * (2.0 * m(i) + m(i + 1)) / 6.0;
    c_[i] = m(i) / 2.0;
    d_[i] = (m(i + 1) - m(i)) / (6.0 * h[i]);
  }
}

int CubicSpline::segment(double x) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  int i = static_cast<int>(it - x_.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
}

double CubicSpline::operator()(double x) const {
  int i = segment(x);
  double t = x - x_[i];
  return y_[i] + t * (b_[i] + t * (c_[i] + t * d_[i]));
}

double CubicSpline::derivative(double x) const {
  int i = segment(x);
  double t = x - x_[i];
  return b_[i] + t * (2.0 * c_[i] + t * 3.0 * d_[i]);
}

DispersionModel::DispersionModel(std::vector<double> omega, std::vector<double> n_eff,
                                 double omega_central)
    : spline_(std::move(omega), std::move(n_eff)), omega_central_(omega_central) {
  if (omega_central_ < spline_.x_min() || omega_central_ > spline_.x_max())
    throw SimError("spectral-dispersion", "load_dispersion",
                   "central frequency outside the sampled range");
  v_central_ = group_velocity(omega_central_);
  beta_central_ = beta(omega_central_);
}

void DispersionModel::check_range(double omega, const char* op) const {
  if (omega < spline_.x_min() || omega > spline_.x_max())
    throw SimError("spectral-dispersion", op, "extrapolation: frequency outside the sampled range");
}

double DispersionModel::n_eff(double omega) const {
  check_range(omega, "n_eff");
  return spline_(omega);
}

double DispersionModel::beta(double omega) const {
  check_range(omega, "beta");
  return spline_(omega) * omega / kSpeedOfLight;
}

double DispersionModel::group_velocity(double omega) const {
  check_range(omega, "group_velocity");
  double denom = spline_(omega) + omega * spline_.derivative(omega);
  double vg = kSpeedOfLight / denom;
  if (!std::isfinite(vg) || vg <= 0.0)
    throw SimError("spectral-dispersion", "group_velocity",
                   "non-positive or non-finite group velocity in the sampled data");
  return vg;
}

DispersionModel load_dispersion(std::vector<double> omega, std::vector<double> n_eff,
                                double omega_central) {
  return DispersionModel(std::move(omega), std::move(n_eff), omega_central);
}

DispersionModel load_dispersion_csv(const std::string& path, double omega_central) {
  std::ifstream in(path);
  if (!in)
    throw SimError("spectral-dispersion", "load_dispersion", "cannot open file: " + path);

  std::string header;
  std::getline(in, header);
  // Strip potential whitespace/CR.
  header.erase(std::remove_if(header.begin(), header.end(),
                              [](unsigned char ch) { return std::isspace(ch); }),
               header.end());
  bool wavelength_input;
  if (header == "omega_rad_s,n_eff")
    wavelength_input = false;
  else if (header == "lambda_m,n_eff")
    wavelength_input = true;
  else
    throw SimError("spectral-dispersion", "load_dispersion",
                   "malformed table: unrecognized header in " + path);

  std::vector<std::pair<double, double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    double a, b;
    char comma;
    if (!(ls >> a >> comma >> b) || comma != ',')
      throw SimError("spectral-dispersion", "load_dispersion",
                     "malformed table row in " + path + ": " + line);
    double w = wavelength_input ? 2.0 * M_PI * kSpeedOfLight / a : a;
    rows.emplace_back(w, b);
  }
  std::sort(rows.begin(), rows.end());
  std::vector<double> omega(rows.size()), n(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    omega[i] = rows[i].first;
    n[i] = rows[i].second;
  }
  return DispersionModel(std::move(omega), std::move(n), omega_central);
}

WalkOffProfile walk_off(const DispersionModel& field, const DispersionModel& pump,
                        const FrequencyGrid& grid) {
  WalkOffProfile profile{grid, {}};
  profile.values.reserve(grid.count);
  const double omega_c = field.central_frequency();
  const double beta_c = field.central_beta();
  const double inv_vp = 1.0 / pump.central_group_velocity();
  for (int n = 1; n <= grid.count; ++n) {
    double w = grid.point(n);
    profile.values.push_back(field.beta(w) - beta_c - (w - omega_c) * inv_vp);
  }
  return profile;
}

double baseline_phase_mismatch(const DispersionModel& pump, const DispersionModel& signal,
                               const DispersionModel& idler, double omega_p, double omega_s,
                               double omega_i, ProcessKind kind) {
  double balance = kind == ProcessKind::PDC ? omega_p - omega_s - omega_i
                                            : omega_p + omega_s - omega_i;
  if (std::abs(balance) > 1e-9 * std::max({omega_p, omega_s, omega_i}))
    throw SimError("spectral-dispersion", "baseline_phase_mismatch",
                   "inconsistent bands: energy conservation violated at band centers");
  double sign_s = kind == ProcessKind::PDC ? -1.0 : 1.0;
  return pump.beta(omega_p) + sign_s * signal.beta(omega_s) - idler.beta(omega_i);
}

}  // namespace twm
