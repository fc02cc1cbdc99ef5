#pragma once

#include <Eigen/Core>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "twm/propagator.hpp"

namespace twm {

// Scalar figure of merit that may be undefined (e.g. Schmidt number at zero
// gain). Undefined values carry NaN and defined == false instead of a silent
// default.
struct FlaggedValue {
  double value = std::numeric_limits<double>::quiet_NaN();
  bool defined = false;
};

struct JsaDecomposition {
  Eigen::MatrixXcd v, w;    // Schmidt-mode matrices, unitary
  Eigen::VectorXd r_tilde;  // singular values of M, descending
  Eigen::VectorXd r;        // squeezing parameters, 1/2 asinh(2 r~)
  Eigen::MatrixXcd j;       // JSA, V diag(r) W^T
};

struct QfcDecomposition {
  Eigen::MatrixXcd w_s_in, w_i_in;    // input Schmidt modes
  Eigen::MatrixXcd v_s_out, v_i_out;  // output Schmidt modes
  Eigen::VectorXd t;                  // conversion angles
  Eigen::VectorXd gamma;              // sin^2(t), descending
};

struct FiguresOfMerit {
  FlaggedValue schmidt_number;
  FlaggedValue purity;
  double r1 = 0.0;
  double n_signal = 0.0, n_idler = 0.0;
  double gamma1 = 0.0;
  FlaggedValue separability;
};

// Phase-sensitive moment M = K^{ss} (K^{is})^T of a PDC propagator; loss
// enters as the eta_s M eta_i^T transform of the uniform attenuation.
Eigen::MatrixXcd moment_M(const Propagator& prop);

// Vacuum-input photon-number moments (N^s, N^i); Hermitian PSD.
std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd> photon_moments(const Propagator& prop);

JsaDecomposition jsa_decompose(const Eigen::MatrixXcd& m);

FlaggedValue schmidt_number(const Eigen::VectorXd& r);
FlaggedValue purity(const Eigen::VectorXd& r);

QfcDecomposition qfc_decompose(const Propagator& prop);

// Dominant-mode share gamma_1 / sum_j gamma_j.
FlaggedValue separability(const Eigen::VectorXd& gamma);

FiguresOfMerit figures_of_merit(const Propagator& prop);

// Fraction of |M|^2 mass carried by the outermost band of the grid (window
// adequacy warning; `band` is the fractional width on each edge).
double edge_energy_fraction(const Eigen::MatrixXcd& m, double band = 0.1);

// A single creation operator a_field^dag(mode), mode in [1, N].
struct OperatorFactor {
  FieldLabel field = FieldLabel::Signal;
  int mode = 1;
};

// coefficient * product of creation operators acting on vacuum.
struct Monomial {
  std::complex<double> coefficient{1.0, 0.0};
  std::vector<OperatorFactor> factors;
};

// One input creation operator rewritten over the output operators. PDC mixes
// creation with annihilation parts; QFC stays within the creation sector.
struct TransformedFactor {
  Eigen::VectorXcd creation_s, creation_i;
  Eigen::VectorXcd annihilation_s, annihilation_i;
};

struct TransformedMonomial {
  std::complex<double> coefficient{1.0, 0.0};
  std::vector<TransformedFactor> factors;
};

// Substitutes every input creation operator with its backward-evolved
// combination through the inverse-propagator blocks.
std::vector<TransformedMonomial> transform_nonvacuum_input(const InversePropagator& inv,
                                                           const std::vector<Monomial>& input);

// Two-mode-squeezer product form of the PDC state: (r_n, V column, W column)
// triples for every nonzero squeezing parameter.
struct SqueezerTriple {
  double r = 0.0;
  Eigen::VectorXcd signal_mode, idler_mode;
};

std::vector<SqueezerTriple> state_descriptor(const JsaDecomposition& d);
std::string write_state_descriptor(const JsaDecomposition& d);
std::vector<SqueezerTriple> parse_state_descriptor(const std::string& text);

}  // namespace twm
