#pragma once

namespace twm {

inline constexpr double kSpeedOfLight = 299792458.0;       // m/s
inline constexpr double kHbar = 1.054571817e-34;           // J s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m

}  // namespace twm
