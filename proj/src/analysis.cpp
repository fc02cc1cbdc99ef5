#include "twm/analysis.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <nlohmann/json.hpp>

namespace twm {

namespace {

constexpr const char* kModule = "state-analysis";

void require_kind(const Propagator& prop, ProcessKind kind, const char* op) {
  if (prop.kind != kind)
    throw SimError(kModule, op, "kind mismatch: operation requires the other process kind");
}

// Deterministic SVD convention: descending singular values with degenerate
// blocks ordered lexicographically by the phase-fixed left vectors, and the
// first significant component of each left vector made real positive. The
// compensating phase goes into W so U diag W^T is preserved.
void fix_phases(Eigen::MatrixXcd& u, Eigen::MatrixXcd& w) {
  for (int n = 0; n < u.cols(); ++n) {
    double colmax = u.col(n).cwiseAbs().maxCoeff();
    if (colmax == 0.0) continue;
    int k = 0;
    while (k < u.rows() && std::abs(u(k, n)) <= 1e-12 * colmax) ++k;
    std::complex<double> phase = u(k, n) / std::abs(u(k, n));
    u.col(n) *= std::conj(phase);
    w.col(n) *= phase;
  }
}

bool column_less(const Eigen::MatrixXcd& u, int a, int b) {
  for (int k = 0; k < u.rows(); ++k) {
    if (u(k, a).real() != u(k, b).real()) return u(k, a).real() < u(k, b).real();
    if (u(k, a).imag() != u(k, b).imag()) return u(k, a).imag() < u(k, b).imag();
  }
  return false;
}

void order_degenerate(Eigen::VectorXd& s, Eigen::MatrixXcd& u, Eigen::MatrixXcd& w) {
  for (int n = 0; n + 1 < s.size(); ++n) {
    int m = n + 1;
    if (std::abs(s(n) - s(m)) > 1e-12 * std::max(s(n), 1e-300)) continue;
    if (column_less(u, m, n)) {
      std::swap(s(n), s(m));
      u.col(n).swap(u.col(m));
      w.col(n).swap(w.col(m));
    }
  }
}

struct OrderedSvd {
  Eigen::MatrixXcd u, w;  // A = U diag(s) W^T
  Eigen::VectorXd s;
};

OrderedSvd ordered_svd(const Eigen::MatrixXcd& a, const char* op) {
  if (!a.allFinite()) throw SimError(kModule, op, "non-finite matrix entries");
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success)
    throw SimError(kModule, op, "numeric error: singular value decomposition failed");
  OrderedSvd out;
  out.u = svd.matrixU();
  out.w = svd.matrixV().conjugate();
  out.s = svd.singularValues();
  fix_phases(out.u, out.w);
  order_degenerate(out.s, out.u, out.w);
  return out;
}

}  // namespace

Eigen::MatrixXcd moment_M(const Propagator& prop) {
  require_kind(prop, ProcessKind::PDC, "moment_M");
  return prop.kss() * prop.kis().transpose();
}

std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> photon_moments(const Propagator& prop) {
  require_kind(prop, ProcessKind::PDC, "photon_moments");
  Eigen::MatrixXcd ksi = prop.ksi();
  Eigen::MatrixXcd kis = prop.kis();
  return {ksi * ksi.adjoint(), kis * kis.adjoint()};
}

JsaDecomposition jsa_decompose(const Eigen::MatrixXcd& m) {
  OrderedSvd svd = ordered_svd(m, "jsa_decompose");
  JsaDecomposition d;
  d.v = std::move(svd.u);
  d.w = std::move(svd.w);
  d.r_tilde = std::move(svd.s);
  d.r = (2.0 * d.r_tilde.array()).asinh() / 2.0;
  d.j = d.v * d.r.asDiagonal() * d.w.transpose();
  return d;
}

FlaggedValue schmidt_number(const Eigen::VectorXd& r) {
  double s2 = 0.0, s4 = 0.0;
  for (double rn : r) {
    double sh2 = std::sinh(rn) * std::sinh(rn);
    s2 += sh2;
    s4 += sh2 * sh2;
  }
  if (s4 == 0.0) return {};
  return {s2 * s2 / s4, true};
}

FlaggedValue purity(const Eigen::VectorXd& r) {
  FlaggedValue sn = schmidt_number(r);
  if (!sn.defined) return {};
  return {1.0 / sn.value, true};
}

QfcDecomposition qfc_decompose(const Propagator& prop) {
  require_kind(prop, ProcessKind::QFC, "qfc_decompose");
  OrderedSvd si = ordered_svd(prop.ksi(), "qfc_decompose");
  OrderedSvd is = ordered_svd(prop.kis(), "qfc_decompose");

  QfcDecomposition d;
  d.v_s_out = std::move(si.u);
  d.w_i_in = std::move(si.w);
  d.v_i_out = std::move(is.u);
  d.w_s_in = std::move(is.w);
  // Both off-diagonal blocks share the singular values sin(t_n) for a unitary
  // propagator; with uniform loss the common attenuation keeps them aligned.
  d.t.resize(si.s.size());
  d.gamma.resize(si.s.size());
  for (int n = 0; n < si.s.size(); ++n) {
    double s = std::min(1.0, 0.5 * (si.s(n) + is.s(n)));
    d.t(n) = std::asin(s);
    d.gamma(n) = s * s;
  }
  return d;
}

FlaggedValue separability(const Eigen::VectorXd& gamma) {
  double total = gamma.sum();
  if (total <= 0.0) return {};
  return {gamma(0) / total, true};
}

FiguresOfMerit figures_of_merit(const Propagator& prop) {
  FiguresOfMerit fom;
  if (prop.kind == ProcessKind::PDC) {
    JsaDecomposition d = jsa_decompose(moment_M(prop));
    auto [ns, ni] = photon_moments(prop);
    fom.schmidt_number = schmidt_number(d.r);
    fom.purity = purity(d.r);
    fom.r1 = d.r.size() > 0 ? d.r(0) : 0.0;
    fom.n_signal = ns.real().trace();
    fom.n_idler = ni.real().trace();
  } else {
    QfcDecomposition d = qfc_decompose(prop);
    fom.gamma1 = d.gamma.size() > 0 ? d.gamma(0) : 0.0;
    fom.separability = separability(d.gamma);
  }
  return fom;
}

double edge_energy_fraction(const Eigen::MatrixXcd& m, double band) {
  if (band <= 0.0 || band >= 0.5)
    throw SimError(kModule, "edge_energy_fraction", "band fraction must be in (0, 0.5)");
  double total = m.squaredNorm();
  if (total == 0.0) return 0.0;
  const int n = static_cast<int>(m.rows());
  int edge = std::max(1, static_cast<int>(std::floor(band * n)));
  double mass = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < static_cast<int>(m.cols()); ++j) {
      bool outer = i < edge || i >= n - edge || j < edge || j >= static_cast<int>(m.cols()) - edge;
      if (outer) mass += std::norm(m(i, j));
    }
  return mass / total;
}

std::vector<TransformedMonomial> transform_nonvacuum_input(const InversePropagator& inv,
                                                           const std::vector<Monomial>& input) {
  const int n = inv.n;
  std::vector<TransformedMonomial> out;
  out.reserve(input.size());
  for (const Monomial& mono : input) {
    TransformedMonomial t;
    t.coefficient = mono.coefficient;
    for (const OperatorFactor& f : mono.factors) {
      if (f.field == FieldLabel::Pump)
        throw SimError(kModule, "transform_nonvacuum_input",
                       "inputs are expressed over the signal and idler bands only");
      if (f.mode < 1 || f.mode > n)
        throw SimError(kModule, "transform_nonvacuum_input", "mode index outside the grid");
      TransformedFactor tf;
      tf.creation_s = Eigen::VectorXcd::Zero(n);
      tf.creation_i = Eigen::VectorXcd::Zero(n);
      tf.annihilation_s = Eigen::VectorXcd::Zero(n);
      tf.annihilation_i = Eigen::VectorXcd::Zero(n);
      int row = f.mode - 1;
      if (inv.kind == ProcessKind::QFC) {
        // Numeric rows act on (a_s, a_i); daggering conjugates the weights.
        if (f.field == FieldLabel::Signal) {
          tf.creation_s = inv.kbar.row(row).head(n).conjugate().transpose();
          tf.creation_i = inv.kbar.row(row).tail(n).conjugate().transpose();
        } else {
          tf.creation_s = inv.kbar.row(n + row).head(n).conjugate().transpose();
          tf.creation_i = inv.kbar.row(n + row).tail(n).conjugate().transpose();
        }
      } else {
        // Numeric rows act on (a_s, a_i^dag).
        if (f.field == FieldLabel::Signal) {
          tf.creation_s = inv.kbar.row(row).head(n).conjugate().transpose();
          tf.annihilation_i = inv.kbar.row(row).tail(n).conjugate().transpose();
        } else {
          tf.annihilation_s = inv.kbar.row(n + row).head(n).transpose();
          tf.creation_i = inv.kbar.row(n + row).tail(n).transpose();
        }
      }
      t.factors.push_back(std::move(tf));
    }
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<SqueezerTriple> state_descriptor(const JsaDecomposition& d) {
  std::vector<SqueezerTriple> triples;
  for (int nn = 0; nn < d.r.size(); ++nn) {
    if (d.r(nn) <= 0.0) continue;
    triples.push_back({d.r(nn), d.v.col(nn), d.w.col(nn)});
  }
  return triples;
}

std::string write_state_descriptor(const JsaDecomposition& d) {
  nlohmann::json doc = nlohmann::json::array();
  for (const SqueezerTriple& t : state_descriptor(d)) {
    nlohmann::json entry;
    entry["r"] = t.r;
    auto encode = [](const Eigen::VectorXcd& v) {
      nlohmann::json arr = nlohmann::json::array();
      for (int k = 0; k < v.size(); ++k) arr.push_back({v(k).real(), v(k).imag()});
      return arr;
    };
    entry["signal_mode"] = encode(t.signal_mode);
    entry["idler_mode"] = encode(t.idler_mode);
    doc.push_back(std::move(entry));
  }
  return doc.dump(2);
}

std::vector<SqueezerTriple> parse_state_descriptor(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SimError(kModule, "parse_state_descriptor", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_array())
    throw SimError(kModule, "parse_state_descriptor", "descriptor must be a JSON array");
  std::vector<SqueezerTriple> triples;
  for (const auto& entry : doc) {
    SqueezerTriple t;
    try {
      t.r = entry.at("r").get<double>();
      auto decode = [](const nlohmann::json& arr) {
        Eigen::VectorXcd v(arr.size());
        for (size_t k = 0; k < arr.size(); ++k)
          v(k) = {arr[k].at(0).get<double>(), arr[k].at(1).get<double>()};
        return v;
      };
      t.signal_mode = decode(entry.at("signal_mode"));
      t.idler_mode = decode(entry.at("idler_mode"));
    } catch (const nlohmann::json::exception& e) {
      throw SimError(kModule, "parse_state_descriptor",
                     std::string("malformed descriptor entry: ") + e.what());
    }
    triples.push_back(std::move(t));
  }
  return triples;
}

}  // namespace twm
