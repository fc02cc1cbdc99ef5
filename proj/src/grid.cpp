#include "twm/grid.hpp"

namespace twm {

FrequencyGrid build_grid(double band_start, double spacing, int count, FieldLabel label) {
  if (spacing <= 0.0)
    throw SimError("spectral-dispersion", "build_grid", "invalid grid: spacing must be positive");
  if (count < 2)
    throw SimError("spectral-dispersion", "build_grid", "invalid grid: count must be >= 2");
  return FrequencyGrid{band_start, spacing, count, label};
}

FrequencyGrid grid_from_band(double center, double width, int count, FieldLabel label) {
  if (width <= 0.0)
    throw SimError("spectral-dispersion", "build_grid", "invalid grid: width must be positive");
  if (count < 2)
    throw SimError("spectral-dispersion", "build_grid", "invalid grid: count must be >= 2");
  double spacing = width / (count - 1);
  return build_grid(center - width / 2.0 - spacing, spacing, count, label);
}

}  // namespace twm
