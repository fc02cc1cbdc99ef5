#pragma once

#include <Eigen/Core>
#include <complex>
#include <string>
#include <vector>

#include "twm/dispersion.hpp"
#include "twm/error.hpp"

namespace twm {

// z-independent interaction coefficients of the three-/four-wave-mixing terms.
struct InteractionCoefficients {
  std::complex<double> c_twm{0.0, 0.0};
  double c_xpm_s = 0.0;
  double c_xpm_i = 0.0;
  double c_spm = 0.0;
};

// Transverse displacement-field mode on a rectangular (x, y) mesh, with the
// material refractive-index map of the same mesh.
struct ModeFieldGrid {
  int nx = 0, ny = 0;
  double dx = 0.0, dy = 0.0;           // m
  Eigen::MatrixXcd d[3];               // cartesian components, ny x nx each
  Eigen::MatrixXd n;                   // refractive index map, ny x nx
  double v_ph = 0.0, v_g = 0.0;        // m/s, at the field's central frequency

  // integral d.d* / (eps0 n^2) * (v_ph / v_g) dx dy; 1 for a normalized mode.
  double normalization_integral() const;
};

ModeFieldGrid load_mode_grid_csv(const std::string& path);

struct Chi2Entry {
  int j = 0, k = 0, l = 0;  // cartesian indices 0..2
  double value = 0.0;       // m/V
};
struct Chi3Entry {
  int j = 0, k = 0, l = 0, m = 0;
  double value = 0.0;  // m^2/V^2
};

// Midpoint-quadrature evaluation of the TWM, XPM and SPM overlap integrals.
// Modes must share the mesh and pass the normalization check (1e-3 relative).
InteractionCoefficients overlap_coefficients(const ModeFieldGrid& pump,
                                             const ModeFieldGrid& signal,
                                             const ModeFieldGrid& idler,
                                             const std::vector<Chi2Entry>& chi2,
                                             const std::vector<Chi3Entry>& chi3, double omega_p,
                                             double omega_s, double omega_i,
                                             ProcessKind kind = ProcessKind::PDC);

}  // namespace twm
