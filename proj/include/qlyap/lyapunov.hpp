// lyapunov.hpp — the truncated-log Lyapunov functional V, the plain distance
// V_dis, and the directional coefficients S(X) that the feedback laws consume.
#pragma once

#include "qlyap/models.hpp"

namespace qlyap {

// Everything derived from the pair (U, U_f) that the controller needs at one
// time step.  W = U_f^T U; L = (W - I) - (W - I)^2/2 is the two-term series of
// log W; V = tr(L^T L).
struct LyapunovContext {
  Mat3 u_f = Mat3::Identity();
  Mat3 w = Mat3::Identity();
  Mat3 l = Mat3::Zero();
  double v = 0.0;
  double v_dis = 0.0;
};

LyapunovContext compute_context(const Mat3& u, const Mat3& u_f);

// Spectral radius of W - I; the log series converges where it is < 1.
double mercator_radius(const Mat3& w);

// Coefficient of the generator X in dV/dt when U evolves as dU/dt = X U:
// with M = U^T X^T U_f,
//   S(X) = 2 tr((-M W^T/2 - W^T M/2 + 2 M) L).
// Linear in X, so S(0) = 0.
double s_functional(const LyapunovContext& ctx, const Mat3& u, const Mat3& x);

// Same role for V_dis: S_dis(X) = 2 tr((W - I)^T U_f^T X U).
double s_dis_functional(const LyapunovContext& ctx, const Mat3& u, const Mat3& x);

// The four coefficients every law needs: the three control axes and the drift.
struct SValues {
  double ax = 0.0;
  double ay = 0.0;
  double az = 0.0;
  double b = 0.0;

  double axis(Axis a) const;
};

SValues s_values(const LyapunovContext& ctx, const Mat3& u, const Mat3& b);
SValues s_dis_values(const LyapunovContext& ctx, const Mat3& u, const Mat3& b);

}  // namespace qlyap
