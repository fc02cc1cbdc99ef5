#pragma once

#include <string>
#include <vector>

#include "twm/error.hpp"

namespace twm {

enum class FieldLabel { Signal, Idler, Pump };

// Uniform angular-frequency grid omega_n = omega0 + n*spacing, n = 1..count.
struct FrequencyGrid {
  double band_start = 0.0;  // omega_{j,0}, rad/s
  double spacing = 0.0;     // rad/s
  int count = 0;
  FieldLabel label = FieldLabel::Signal;

  double point(int n) const { return band_start + n * spacing; }  // n in [1, count]
  double first() const { return point(1); }
  double last() const { return point(count); }

  std::vector<double> points() const {
    std::vector<double> p(count);
    for (int n = 1; n <= count; ++n) p[n - 1] = point(n);
    return p;
  }
};

FrequencyGrid build_grid(double band_start, double spacing, int count, FieldLabel label);

// Grid covering [center - width/2, center + width/2] with `count` points.
FrequencyGrid grid_from_band(double center, double width, int count, FieldLabel label);

}  // namespace twm
