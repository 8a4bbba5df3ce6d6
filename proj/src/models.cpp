#include "qlyap/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qlyap {

namespace {

Mat3 make_ax() {
  Mat3 m = Mat3::Zero();
  m(1, 2) = -1.0;
  m(2, 1) = 1.0;
  return m;
}

Mat3 make_ay() {
  Mat3 m = Mat3::Zero();
  m(0, 2) = 1.0;
  m(2, 0) = -1.0;
  return m;
}

Mat3 make_az() {
  Mat3 m = Mat3::Zero();
  m(0, 1) = -1.0;
  m(1, 0) = 1.0;
  return m;
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Closed: return "closed";
    case ModelKind::PhaseDamping: return "phase_damping";
    case ModelKind::AmplitudeDamping: return "amplitude_damping";
    case ModelKind::NonMarkovian: return "non_markovian";
    case ModelKind::Custom: return "custom";
  }
  return "?";
}

const char* to_string(Axis axis) {
  switch (axis) {
    case Axis::I: return "I";
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
  }
  return "?";
}

ModelKind model_kind_from_string(const std::string& name) {
  if (name == "closed") return ModelKind::Closed;
  if (name == "phase_damping" || name == "pd") return ModelKind::PhaseDamping;
  if (name == "amplitude_damping" || name == "ad") return ModelKind::AmplitudeDamping;
  if (name == "non_markovian" || name == "nm") return ModelKind::NonMarkovian;
  throw std::invalid_argument("unknown model kind '" + name + "'");
}

Axis axis_from_string(const std::string& name) {
  if (name == "I" || name == "i") return Axis::I;
  if (name == "x") return Axis::X;
  if (name == "y") return Axis::Y;
  if (name == "z") return Axis::Z;
  throw std::invalid_argument("unknown axis '" + name + "'");
}

const Mat3& bloch_ax() {
  static const Mat3 m = make_ax();
  return m;
}

const Mat3& bloch_ay() {
  static const Mat3 m = make_ay();
  return m;
}

const Mat3& bloch_az() {
  static const Mat3 m = make_az();
  return m;
}

const Mat3& bloch_generator(Axis axis) {
  static const Mat3 zero = Mat3::Zero();
  switch (axis) {
    case Axis::I: return zero;
    case Axis::X: return bloch_ax();
    case Axis::Y: return bloch_ay();
    case Axis::Z: return bloch_az();
  }
  return zero;
}

double attenuation_d(double t, const BathParams& p) {
  const double b = p.beta;
  const double w = p.omega0;
  const double envelope =
      1.0 - std::exp(-b * w * t) * (std::cos(w * t) - std::sin(w * t) / p.divisor());
  return p.alpha_sq * p.kT * (b * b / (1.0 + b * b)) * envelope;
}

Mat3c gks_phase_damping(double gamma) {
  Mat3c g = Mat3c::Zero();
  g(2, 2) = gamma;
  return g;
}

Mat3c gks_amplitude_damping(double gamma) {
  const std::complex<double> i(0.0, 1.0);
  Mat3c g = Mat3c::Zero();
  g(0, 0) = gamma;
  g(1, 1) = gamma;
  g(0, 1) = i * gamma;
  g(1, 0) = -i * gamma;
  return g;
}

Mat3 gks_to_b(const Mat3c& gks) {
  for (int r = 0; r < 3; ++r) {
    for (int c = r; c < 3; ++c) {
      const auto diff = gks(r, c) - std::conj(gks(c, r));
      if (std::abs(diff) > 1e-12) {
        std::ostringstream msg;
        msg << "gks_to_b: matrix is not Hermitian, entries (" << r << "," << c
            << ") and (" << c << "," << r << ") differ by " << std::abs(diff);
        throw std::invalid_argument(msg.str());
      }
    }
  }
  // (G + G^T)/2 = Re G for Hermitian G; the imaginary parts cancel.
  const Mat3 sym = gks.real();
  return sym - gks.real().trace() * Mat3::Identity();
}

double min_gks_eigenvalue(const Mat3c& gks) {
  Eigen::SelfAdjointEigenSolver<Mat3c> solver(gks);
  return solver.eigenvalues().minCoeff();
}

double SystemModel::rate(double t) const {
  if (kind == ModelKind::NonMarkovian) return 2.0 * attenuation_d(t, bath);
  return 1.0;
}

SystemModel make_model(ModelKind kind, double gamma, const BathParams& bath) {
  if (gamma < 0.0) throw std::invalid_argument("make_model: gamma must be >= 0");
  SystemModel m;
  m.kind = kind;
  m.gamma = gamma;
  m.bath = bath;
  switch (kind) {
    case ModelKind::Closed:
      break;
    case ModelKind::PhaseDamping:
      m.b_template = gks_to_b(gks_phase_damping(gamma));
      break;
    case ModelKind::AmplitudeDamping:
      m.b_template = gks_to_b(gks_amplitude_damping(gamma));
      break;
    case ModelKind::NonMarkovian:
      m.b_template = Mat3::Zero();
      m.b_template.diagonal() << -1.0, -1.0, -2.0;
      break;
    case ModelKind::Custom:
      throw std::invalid_argument("make_model: custom models are assembled directly");
  }
  return m;
}

Mat3 unitary_to_bloch_operator(const Mat2c& u, double tol) {
  const Mat2c gram = u.adjoint() * u;
  const double defect = (gram - Mat2c::Identity()).cwiseAbs().maxCoeff();
  if (defect > tol) {
    std::ostringstream msg;
    msg << "unitary_to_bloch_operator: input is not unitary (|u+u - I| = " << defect
        << ")";
    throw std::invalid_argument(msg.str());
  }
  const std::complex<double> u1 = u(0, 0), u2 = u(0, 1), u3 = u(1, 0), u4 = u(1, 1);
  // All entries depend on products u_i conj(u_j), so a global phase drops out.
  const std::complex<double> c14 = u1 * std::conj(u4);
  const std::complex<double> c23 = u2 * std::conj(u3);
  const std::complex<double> c13 = u1 * std::conj(u3);
  const std::complex<double> c12 = u1 * std::conj(u2);
  Mat3 r;
  r(0, 0) = c14.real() + c23.real();
  r(0, 1) = c14.imag() - c23.imag();
  r(0, 2) = 2.0 * c13.real();
  r(1, 0) = -c14.imag() - c23.imag();
  r(1, 1) = c14.real() - c23.real();
  r(1, 2) = -2.0 * c13.imag();
  r(2, 0) = 2.0 * c12.real();
  r(2, 1) = 2.0 * c12.imag();
  r(2, 2) = std::norm(u1) - std::norm(u2);
  return r;
}

Mat2c gate_identity() { return Mat2c::Identity(); }

Mat2c gate_not() {
  Mat2c u = Mat2c::Zero();
  u(0, 1) = 1.0;
  u(1, 0) = 1.0;
  return u;
}

Mat2c gate_hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat2c u;
  u << s, s, s, -s;
  return u;
}

double operator_purity(const Mat3& u) { return (u * u.transpose()).trace(); }

}  // namespace qlyap
