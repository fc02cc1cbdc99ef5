#include "twm/inhomogeneity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twm/rng.hpp"

namespace twm {

namespace {
constexpr const char* kModule = "nonlinearity-profile";
}

double InhomogeneityProfile::value(double position) const {
  if (z.empty()) return 0.0;
  if (position <= z.front()) return values.front();
  if (position >= z.back()) return values.back();
  auto it = std::upper_bound(z.begin(), z.end(), position);
  size_t i = static_cast<size_t>(it - z.begin()) - 1;
  double t = (position - z[i]) / (z[i + 1] - z[i]);
  return values[i] + t * (values[i + 1] - values[i]);
}

double InhomogeneityProfile::cumulative_phase(double baseline, double position) const {
  double phase = baseline * position;
  if (z.empty()) return phase;
  // Trapezoid over the piecewise-linear profile, exact per segment.
  double prev_z = 0.0;
  double prev_v = value(0.0);
  for (size_t i = 0; i < z.size() && z[i] < position; ++i) {
    if (z[i] <= prev_z) continue;
    double v = values[i];
    phase += 0.5 * (prev_v + v) * (z[i] - prev_z);
    prev_z = z[i];
    prev_v = v;
  }
  if (position > prev_z) phase += 0.5 * (prev_v + value(position)) * (position - prev_z);
  return phase;
}

InhomogeneityProfile flat_profile(const std::vector<double>& mesh) {
  return InhomogeneityProfile{mesh, std::vector<double>(mesh.size(), 0.0), 0.0};
}

InhomogeneityProfile generate_inhomogeneity(double range, double smoothing_length,
                                            const std::vector<double>& mesh, std::uint64_t seed) {
  const int n = static_cast<int>(mesh.size());
  if (range < 0.0)
    throw SimError(kModule, "generate_inhomogeneity", "range must be non-negative");
  if (n < 2)
    throw SimError(kModule, "generate_inhomogeneity", "mesh needs at least two nodes");
  double mean_dz = (mesh.back() - mesh.front()) / (n - 1);
  if (smoothing_length < mean_dz)
    throw SimError(kModule, "generate_inhomogeneity",
                   "smoothing length must be at least the mesh spacing");

  if (range == 0.0) return flat_profile(mesh);

  // Random walk.
  SplitMix64 rng(seed);
  std::vector<double> walk(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += rng.normal();
    walk[i] = acc;
  }

  // Moving average over the smoothing window, truncated at the edges.
  int half = std::max(1, static_cast<int>(std::llround(smoothing_length / mean_dz))) / 2;
  std::vector<double> smooth(n);
  for (int i = 0; i < n; ++i) {
    int lo = std::max(0, i - half);
    int hi = std::min(n - 1, i + half);
    double s = 0.0;
    for (int j = lo; j <= hi; ++j) s += walk[j];
    smooth[i] = s / (hi - lo + 1);
  }

  double mean = std::accumulate(smooth.begin(), smooth.end(), 0.0) / n;
  for (double& v : smooth) v -= mean;

  auto [lo_it, hi_it] = std::minmax_element(smooth.begin(), smooth.end());
  double span = *hi_it - *lo_it;
  if (span <= 0.0) return flat_profile(mesh);
  double scale = range / span;
  for (double& v : smooth) v *= scale;

  // Rescaling preserves the zero mean; re-subtract to clean up rounding.
  double residual = std::accumulate(smooth.begin(), smooth.end(), 0.0) / n;
  for (double& v : smooth) v -= residual;

  return InhomogeneityProfile{mesh, std::move(smooth), range};
}

}  // namespace twm
