#pragma once

#include <cstdint>
#include <vector>

#include "twm/error.hpp"

namespace twm {

// Residual position-dependent phase mismatch delta_beta_TWM(z), sampled on a
// fixed mesh and interpreted as piecewise linear between nodes.
struct InhomogeneityProfile {
  std::vector<double> z;       // m, strictly increasing
  std::vector<double> values;  // rad/m
  double range = 0.0;          // max - min after normalization

  double value(double position) const;

  // integral_0^position (baseline + delta_beta(z')) dz', exact for the
  // piecewise-linear profile; zero at position 0.
  double cumulative_phase(double baseline, double position) const;
};

// Smoothed random walk with zero average and total range `range`:
// cumulative sum of IID standard normal steps, moving-average smoothed over
// `smoothing_length`, mean-subtracted, affinely rescaled to the range.
InhomogeneityProfile generate_inhomogeneity(double range, double smoothing_length,
                                            const std::vector<double>& mesh, std::uint64_t seed);

// Zero profile on the given mesh.
InhomogeneityProfile flat_profile(const std::vector<double>& mesh);

}  // namespace twm
