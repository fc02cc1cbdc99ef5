#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "twm/error.hpp"

namespace twm {

struct Domain {
  double z_left = 0.0;   // m
  double z_right = 0.0;  // m
  int orientation = 1;   // +1 or -1
};

// Piecewise-constant nonlinearity orientation g(z) over [0, device_length].
// Regions not covered by a listed domain carry the background orientation +1.
// Domain sampling is half-open [z_left, z_right).
struct PolingPattern {
  std::vector<Domain> domains;  // sorted, non-overlapping
  double device_length = 0.0;   // m

  int sample_g(double z) const;
  std::vector<double> boundaries() const;
  double min_domain_width() const;
};

// chi^(3) presence h(z); the whole waveguide by default.
inline int sample_h(double z, double device_length) {
  if (z < 0.0 || z > device_length)
    throw SimError("nonlinearity-profile", "sample_h", "position outside the device");
  return 1;
}

PolingPattern periodic_poling(double period, double length, double duty);

// Greedy per-domain orientation selection tracking the target first-harmonic
// amplitude profile (peak-normalized, values in [0, 1]).
PolingPattern apodized_poling(const std::function<double(double)>& target, double period,
                              double length);

struct DomainErrorModel {
  double boundary_shift = 0.0;          // delta, m; > 0 broadens inverted domains
  double missing_probability = 0.0;     // p in [0, 1]
  std::uint64_t seed = 0;
};

PolingPattern inject_domain_errors(const PolingPattern& pattern, const DomainErrorModel& errors);

// Exact per-domain evaluation of integral_0^L g(z) exp(i k z) dz.
std::complex<double> poling_fourier(const PolingPattern& pattern, double k);

}  // namespace twm
