#include "twm/poling.hpp"

#include <algorithm>
#include <cmath>

#include "twm/rng.hpp"

namespace twm {

namespace {

constexpr const char* kModule = "nonlinearity-profile";

// Rebuild a full cover of [0, poled_end] from the inverted intervals only,
// filling gaps with background +1 domains.
PolingPattern from_inverted(const std::vector<std::pair<double, double>>& inverted,
                            double poled_end, double device_length) {
  PolingPattern out;
  out.device_length = device_length;
  double cursor = 0.0;
  for (const auto& [l, r] : inverted) {
    if (l > cursor) out.domains.push_back({cursor, l, +1});
    out.domains.push_back({l, r, -1});
    cursor = r;
  }
  if (cursor < poled_end) out.domains.push_back({cursor, poled_end, +1});
  return out;
}

}  // namespace

int PolingPattern::sample_g(double z) const {
  if (z < 0.0 || z > device_length)
    throw SimError(kModule, "sample_g", "position outside the device");
  // Half-open [z_left, z_right); beyond the poled section the background
  // orientation applies.
  auto it = std::upper_bound(domains.begin(), domains.end(), z,
                             [](double v, const Domain& d) { return v < d.z_right; });
  if (it == domains.end() || z < it->z_left) return +1;
  return it->orientation;
}

std::vector<double> PolingPattern::boundaries() const {
  std::vector<double> b;
  b.reserve(domains.size() + 1);
  for (const auto& d : domains) b.push_back(d.z_left);
  if (!domains.empty()) b.push_back(domains.back().z_right);
  return b;
}

double PolingPattern::min_domain_width() const {
  double w = device_length;
  for (const auto& d : domains) w = std::min(w, d.z_right - d.z_left);
  return w;
}

PolingPattern periodic_poling(double period, double length, double duty) {
  if (period <= 0.0 || period > length)
    throw SimError(kModule, "periodic_poling", "invalid pattern: period must be in (0, length]");
  if (duty <= 0.0 || duty >= 1.0)
    throw SimError(kModule, "periodic_poling", "invalid pattern: duty must be in (0, 1)");

  PolingPattern out;
  out.device_length = length;
  const double eps = 1e-9 * period;  // guards float slivers at the device end
  for (long i = 0;; ++i) {
    double z = i * period;
    if (z >= length - eps) break;
    double inv_end = std::min(z + duty * period, length);
    out.domains.push_back({z, inv_end, -1});
    if (inv_end >= length - eps) break;
    double bg_end = std::min(z + period, length);
    out.domains.push_back({inv_end, bg_end, +1});
  }
  return out;
}

PolingPattern apodized_poling(const std::function<double(double)>& target, double period,
                              double length) {
  if (period <= 0.0 || period > length)
    throw SimError(kModule, "apodized_poling", "invalid pattern: period must be in (0, length]");

  const double k = 2.0 * M_PI / period;
  const std::complex<double> ik(0.0, k);

  // Accumulated first-harmonic amplitude of an ideal duty-0.5 pattern points
  // along -i; the greedy choice tracks (2/pi) * integral of the target along
  // that direction.
  const std::complex<double> direction(0.0, -1.0);

  PolingPattern out;
  out.device_length = length;
  std::complex<double> acc(0.0, 0.0);
  double target_integral = 0.0;
  double z = 0.0;
  while (z < length - 1e-9 * period) {
    double r = std::min(z + period / 2.0, length);
    double mid = 0.5 * (z + r);
    double amp = target(mid);
    if (amp < 0.0 || amp > 1.0 + 1e-9)
      throw SimError(kModule, "apodized_poling",
                     "infeasible apodization: target amplitude outside [0, 1]");
    target_integral += amp * (r - z);
    std::complex<double> contrib = (std::exp(ik * r) - std::exp(ik * z)) / ik;
    std::complex<double> goal = direction * (2.0 / M_PI) * target_integral;
    double err_plus = std::abs(acc + contrib - goal);
    double err_minus = std::abs(acc - contrib - goal);
    int orientation = err_minus < err_plus ? -1 : +1;
    acc += static_cast<double>(orientation) * contrib;
    out.domains.push_back({z, r, orientation});
    z = r;
  }

  // Merge adjacent domains of equal orientation so error injection sees
  // physically written domains.
  std::vector<Domain> merged;
  for (const auto& d : out.domains) {
    if (!merged.empty() && merged.back().orientation == d.orientation)
      merged.back().z_right = d.z_right;
    else
      merged.push_back(d);
  }
  out.domains = std::move(merged);
  return out;
}

PolingPattern inject_domain_errors(const PolingPattern& pattern, const DomainErrorModel& errors) {
  if (errors.missing_probability < 0.0 || errors.missing_probability > 1.0)
    throw SimError(kModule, "inject_domain_errors", "missing-domain probability outside [0, 1]");
  if (std::abs(errors.boundary_shift) >= pattern.min_domain_width())
    throw SimError(kModule, "inject_domain_errors",
                   "over-broadening: |delta| must be below the minimum domain width");

  if (errors.boundary_shift == 0.0 && errors.missing_probability == 0.0) return pattern;

  double poled_end = pattern.domains.empty() ? 0.0 : pattern.domains.back().z_right;

  // Collect inverted intervals, shift both boundaries outward by delta
  // (inward for negative delta), clipped against neighboring inverted domains
  // and the device ends.
  std::vector<std::pair<double, double>> inverted;
  for (const auto& d : pattern.domains)
    if (d.orientation == -1) inverted.emplace_back(d.z_left, d.z_right);

  const double delta = errors.boundary_shift;
  std::vector<std::pair<double, double>> shifted;
  shifted.reserve(inverted.size());
  for (size_t i = 0; i < inverted.size(); ++i) {
    double lo_limit = i == 0 ? 0.0 : 0.5 * (inverted[i - 1].second + inverted[i].first);
    double hi_limit =
        i + 1 < inverted.size() ? 0.5 * (inverted[i].second + inverted[i + 1].first) : poled_end;
    double l = std::max(inverted[i].first - delta, lo_limit);
    double r = std::min(inverted[i].second + delta, hi_limit);
    if (r > l) shifted.emplace_back(l, r);
  }

  // Not-written domains revert to the background orientation, one Bernoulli
  // draw per inverted domain in z-order.
  SplitMix64 rng(errors.seed);
  std::vector<std::pair<double, double>> kept;
  kept.reserve(shifted.size());
  for (const auto& iv : shifted) {
    bool missing = rng.uniform() < errors.missing_probability;
    if (!missing) kept.push_back(iv);
  }

  return from_inverted(kept, poled_end, pattern.device_length);
}

std::complex<double> poling_fourier(const PolingPattern& pattern, double k) {
  std::complex<double> sum(0.0, 0.0);
  auto segment = [&](double l, double r, double s) {
    if (k == 0.0) {
      sum += s * (r - l);
    } else {
      const std::complex<double> ik(0.0, k);
      sum += s * (std::exp(ik * r) - std::exp(ik * l)) / ik;
    }
  };
  double cursor = 0.0;
  for (const auto& d : pattern.domains) {
    if (d.z_left > cursor) segment(cursor, d.z_left, +1.0);
    segment(d.z_left, d.z_right, static_cast<double>(d.orientation));
    cursor = d.z_right;
  }
  if (cursor < pattern.device_length) segment(cursor, pattern.device_length, +1.0);
  return sum;
}

}  // namespace twm
