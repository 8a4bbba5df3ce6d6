#include "qlyap/lyapunov.hpp"

#include <stdexcept>

namespace qlyap {

LyapunovContext compute_context(const Mat3& u, const Mat3& u_f) {
  LyapunovContext ctx;
  ctx.u_f = u_f;
  ctx.w = u_f.transpose() * u;
  const Mat3 e = ctx.w - Mat3::Identity();
  ctx.l = e - 0.5 * e * e;
  ctx.v = (ctx.l.transpose() * ctx.l).trace();
  const Mat3 diff = u - u_f;
  ctx.v_dis = (diff.transpose() * diff).trace();
  return ctx;
}

double mercator_radius(const Mat3& w) {
  const Mat3 e = w - Mat3::Identity();
  return e.eigenvalues().cwiseAbs().maxCoeff();
}

double s_functional(const LyapunovContext& ctx, const Mat3& u, const Mat3& x) {
  const Mat3 m = u.transpose() * x.transpose() * ctx.u_f;
  const Mat3 grad = -0.5 * m * ctx.w.transpose() - 0.5 * ctx.w.transpose() * m + 2.0 * m;
  return 2.0 * (grad * ctx.l).trace();
}

double s_dis_functional(const LyapunovContext& ctx, const Mat3& u, const Mat3& x) {
  const Mat3 e = ctx.w - Mat3::Identity();
  return 2.0 * (e.transpose() * ctx.u_f.transpose() * x * u).trace();
}

double SValues::axis(Axis a) const {
  switch (a) {
    case Axis::X: return ax;
    case Axis::Y: return ay;
    case Axis::Z: return az;
    case Axis::I: break;
  }
  throw std::invalid_argument("SValues::axis: no coefficient for axis I");
}

SValues s_values(const LyapunovContext& ctx, const Mat3& u, const Mat3& b) {
  SValues s;
  s.ax = s_functional(ctx, u, bloch_ax());
  s.ay = s_functional(ctx, u, bloch_ay());
  s.az = s_functional(ctx, u, bloch_az());
  s.b = s_functional(ctx, u, b);
  return s;
}

SValues s_dis_values(const LyapunovContext& ctx, const Mat3& u, const Mat3& b) {
  SValues s;
  s.ax = s_dis_functional(ctx, u, bloch_ax());
  s.ay = s_dis_functional(ctx, u, bloch_ay());
  s.az = s_dis_functional(ctx, u, bloch_az());
  s.b = s_dis_functional(ctx, u, b);
  return s;
}

}  // namespace qlyap
