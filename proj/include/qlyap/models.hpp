// models.hpp — open two-level system models in the Bloch picture: control
// generators, GKS dissipation matrices, the 2x2-unitary -> 3x3-operator map,
// and the time-dependent non-Markovian decay rate.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <string>

namespace qlyap {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat3c = Eigen::Matrix3cd;
using Mat2c = Eigen::Matrix2cd;

enum class ModelKind { Closed, PhaseDamping, AmplitudeDamping, NonMarkovian, Custom };
enum class Axis { I, X, Y, Z };

const char* to_string(ModelKind kind);
const char* to_string(Axis axis);
ModelKind model_kind_from_string(const std::string& name);
Axis axis_from_string(const std::string& name);

// Generators of the coherent part: A(t) = f_x A_x + f_y A_y + f_z A_z acting on
// the 3x3 operator U.  [A_x, A_y] = A_z and cyclic.
const Mat3& bloch_ax();
const Mat3& bloch_ay();
const Mat3& bloch_az();

// Generator for a named axis; Axis::I maps to the zero matrix (a shift along
// the identity has no effect on the Bloch operator).
const Mat3& bloch_generator(Axis axis);

// Parameters of the Ohmic-bath decay rate
//   d(t) = alpha_sq kT beta^2/(1+beta^2) [1 - e^{-beta w0 t}(cos w0 t - sin(w0 t)/beta)]
// with beta = Gamma/w0 the cutoff ratio.  sine_divisor overrides the divisor of
// the sine term (defaults to beta).
struct BathParams {
  double alpha_sq = 0.01;
  double kT = 300.0;
  double beta = 0.00168;
  double omega0 = 50.0;
  std::optional<double> sine_divisor{};

  double divisor() const { return sine_divisor ? *sine_divisor : beta; }
};

double attenuation_d(double t, const BathParams& p);

// GKS matrices for the two Markovian channels.
Mat3c gks_phase_damping(double gamma);
Mat3c gks_amplitude_damping(double gamma);

// Dissipation matrix of the operator equation, B = (G + G^T)/2 - tr(G) I.
// Real-valued for Hermitian G.  Throws std::invalid_argument naming the
// offending entry pair if G is not Hermitian (tolerance 1e-12).
Mat3 gks_to_b(const Mat3c& gks);

// Smallest eigenvalue of a Hermitian GKS matrix; negative means the channel is
// not completely positive.  Advisory only — callers may warn but not reject.
double min_gks_eigenvalue(const Mat3c& gks);

// A fixed dissipation template scaled by a time-dependent rate.  Markovian
// kinds have rate 1; the non-Markovian kind has rate 2 d(t).  Plain data, safe
// to copy across threads.
struct SystemModel {
  ModelKind kind = ModelKind::Closed;
  double gamma = 0.0;
  Mat3 b_template = Mat3::Zero();
  BathParams bath{};

  double rate(double t) const;
  Mat3 b_at(double t) const { return rate(t) * b_template; }
};

// Builds the named model.  gamma must be >= 0; it is ignored for Closed and
// NonMarkovian.  Custom models are assembled directly, not through here.
SystemModel make_model(ModelKind kind, double gamma, const BathParams& bath = {});

// Bloch (adjoint) image of a 2x2 unitary, R_ij = tr(sigma_i u sigma_j u+)/2.
// Global-phase invariant; the result is in SO(3).  Throws std::invalid_argument
// if u is not unitary within tol.
Mat3 unitary_to_bloch_operator(const Mat2c& u, double tol = 1e-10);

Mat2c gate_identity();
Mat2c gate_not();
Mat2c gate_hadamard();

// tr(U U^T): 3 for orthogonal U, decays under dissipation.
double operator_purity(const Mat3& u);

}  // namespace qlyap
