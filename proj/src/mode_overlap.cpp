#include "twm/mode_overlap.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "twm/constants.hpp"

namespace twm {

namespace {

constexpr const char* kModule = "nonlinearity-profile";

void check_mesh(const ModeFieldGrid& a, const ModeFieldGrid& b) {
  if (a.nx != b.nx || a.ny != b.ny || a.dx != b.dx || a.dy != b.dy)
    throw SimError(kModule, "overlap_coefficients", "mode grids must share a common mesh");
}

void check_normalized(const ModeFieldGrid& m, const char* which) {
  double norm = m.normalization_integral();
  if (std::abs(norm - 1.0) > 1e-3)
    throw SimError(kModule, "overlap_coefficients",
                   std::string("invalid mode: normalization check failed for ") + which);
}

}  // namespace

double ModeFieldGrid::normalization_integral() const {
  double sum = 0.0;
  for (int c = 0; c < 3; ++c)
    sum += ((d[c].array() * d[c].array().conjugate()).real() / n.array().square()).sum();
  return sum * dx * dy / kVacuumPermittivity * (v_ph / v_g);
}

ModeFieldGrid load_mode_grid_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SimError(kModule, "load_mode_grid", "cannot open file: " + path);

  // Header: nx,ny,dx_m,dy_m,v_ph,v_g followed by nx*ny rows (row-major over y
  // then x) of re_dx,im_dx,re_dy,im_dy,re_dz,im_dz,n.
  std::string line;
  std::getline(in, line);
  std::replace(line.begin(), line.end(), ',', ' ');
  std::istringstream hs(line);
  ModeFieldGrid g;
  if (!(hs >> g.nx >> g.ny >> g.dx >> g.dy >> g.v_ph >> g.v_g) || g.nx <= 0 || g.ny <= 0)
    throw SimError(kModule, "load_mode_grid", "malformed header in " + path);

  for (int c = 0; c < 3; ++c) g.d[c].resize(g.ny, g.nx);
  g.n.resize(g.ny, g.nx);
  for (int iy = 0; iy < g.ny; ++iy)
    for (int ix = 0; ix < g.nx; ++ix) {
      if (!std::getline(in, line))
        throw SimError(kModule, "load_mode_grid", "truncated mode grid in " + path);
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double v[7];
      for (double& x : v)
        if (!(ls >> x)) throw SimError(kModule, "load_mode_grid", "malformed row in " + path);
      for (int c = 0; c < 3; ++c) g.d[c](iy, ix) = {v[2 * c], v[2 * c + 1]};
      g.n(iy, ix) = v[6];
    }
  return g;
}

InteractionCoefficients overlap_coefficients(const ModeFieldGrid& pump,
                                             const ModeFieldGrid& signal,
                                             const ModeFieldGrid& idler,
                                             const std::vector<Chi2Entry>& chi2,
                                             const std::vector<Chi3Entry>& chi3, double omega_p,
                                             double omega_s, double omega_i, ProcessKind kind) {
  check_mesh(pump, signal);
  check_mesh(pump, idler);
  check_normalized(pump, "pump");
  check_normalized(signal, "signal");
  check_normalized(idler, "idler");

  const double eps0 = kVacuumPermittivity;
  const double cell = pump.dx * pump.dy;
  const double v_p = pump.v_g, v_s = signal.v_g, v_i = idler.v_g;

  InteractionCoefficients out;

  // TWM: chi2_jkl / (n_s^2 n_i^2 n_p^2) d_s^j* d_i^k* d_p^l; the signal field
  // enters unconjugated for QFC.
  std::complex<double> twm(0.0, 0.0);
  for (const auto& e : chi2) {
    Eigen::ArrayXXcd ds = signal.d[e.j].array();
    if (kind == ProcessKind::PDC) ds = ds.conjugate();
    Eigen::ArrayXXcd term = ds * idler.d[e.k].array().conjugate() * pump.d[e.l].array();
    Eigen::ArrayXXd denom = signal.n.array().square() * idler.n.array().square() *
                            pump.n.array().square();
    twm += e.value * (term / denom).sum();
  }
  out.c_twm = twm * cell / (eps0 * eps0) * std::sqrt(omega_s * omega_i / (2.0 * v_p * v_s * v_i));

  // XPM (signal/idler) and SPM from the chi3 contractions.
  auto xpm = [&](const ModeFieldGrid& f, double omega_f, double v_f) {
    std::complex<double> acc(0.0, 0.0);
    for (const auto& e : chi3) {
      Eigen::ArrayXXcd term = pump.d[e.j].array().conjugate() * f.d[e.k].array().conjugate() *
                              pump.d[e.l].array() * f.d[e.m].array();
      Eigen::ArrayXXd denom = pump.n.array().square().square() * f.n.array().square().square();
      acc += e.value * (term / denom).sum();
    }
    return (acc * cell * 3.0 / (2.0 * eps0 * eps0 * eps0) * omega_f / (v_p * v_f)).real();
  };
  out.c_xpm_s = xpm(signal, omega_s, v_s);
  out.c_xpm_i = xpm(idler, omega_i, v_i);

  std::complex<double> spm(0.0, 0.0);
  for (const auto& e : chi3) {
    Eigen::ArrayXXcd term = pump.d[e.j].array().conjugate() * pump.d[e.k].array().conjugate() *
                            pump.d[e.l].array() * pump.d[e.m].array();
    Eigen::ArrayXXd denom = pump.n.array().square().square() * pump.n.array().square().square();
    spm += e.value * (term / denom).sum();
  }
  double hw2 = kHbar * omega_p / 2.0;
  out.c_spm = (spm * cell * 3.0 / (eps0 * eps0 * eps0 * kHbar) * hw2 * hw2).real();

  return out;
}

}  // namespace twm
