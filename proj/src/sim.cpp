#include "qlyap/sim.hpp"

#include "qlyap/analysis.hpp"

#include <cmath>
#include <sstream>

namespace qlyap {

namespace {

constexpr double kDivergenceCutoff = 1e12;

int axis_index(Axis axis) {
  switch (axis) {
    case Axis::X: return 0;
    case Axis::Y: return 1;
    case Axis::Z: return 2;
    case Axis::I: break;
  }
  return -1;
}

void check_entries(const Mat3& u, double t) {
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (!std::isfinite(u(r, c)) || std::abs(u(r, c)) > kDivergenceCutoff)
        throw DivergedError(t);
}

TrajectorySample make_sample(double t, const Mat3& u, const LyapunovContext& ctx,
                             const ControlOutput& out, const Vec3& f_applied,
                             const SystemModel& model, const Mat3& target) {
  TrajectorySample s;
  s.t = t;
  s.u = u;
  s.f_designed = out.f;
  s.f_applied = f_applied;
  s.v = ctx.v;
  s.v_dis = ctx.v_dis;
  s.fidelity = fidelity(u, target);
  s.purity = operator_purity(u);
  if (model.kind == ModelKind::NonMarkovian) s.atten_d = attenuation_d(t, model.bath);
  s.guarded = out.guarded;
  s.kick = out.kick;
  s.mercator_ok = mercator_radius(ctx.w) < 1.0;
  return s;
}

}  // namespace

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be > 0");
  if (!(t_end > 0.0)) throw std::invalid_argument("SimConfig: t_end must be > 0");
  if (record_stride < 1)
    throw std::invalid_argument("SimConfig: record_stride must be >= 1");
  if (!u0.allFinite()) throw std::invalid_argument("SimConfig: u0 has non-finite entries");
  if (n_steps() < 1) throw std::invalid_argument("SimConfig: t_end shorter than one step");
}

std::size_t SimConfig::n_steps() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

DivergedError::DivergedError(double t_fail)
    : std::runtime_error([t_fail] {
        std::ostringstream msg;
        msg << "trajectory diverged at t = " << t_fail
            << " (operator entry left +-1e12)";
        return msg.str();
      }()),
      t_fail_(t_fail) {}

Mat3 rk4_step(const Mat3& u, const Mat3& generator, double dt) {
  const Mat3 k1 = generator * u;
  const Mat3 k2 = generator * (u + 0.5 * dt * k1);
  const Mat3 k3 = generator * (u + 0.5 * dt * k2);
  const Mat3 k4 = generator * (u + dt * k3);
  return u + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Trajectory run_closed_loop(const SystemModel& model, const ControlLaw& law,
                           const Mat3& target, const SimConfig& cfg,
                           const std::optional<PerturbationSpec>& pert) {
  cfg.validate();
  law.validate();
  const double ortho_defect =
      (target.transpose() * target - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (ortho_defect > 1e-8)
    throw std::invalid_argument("run_closed_loop: target is not orthogonal");

  const std::size_t n = cfg.n_steps();
  const int pert_axis = pert ? axis_index(pert->axis) : -1;

  Trajectory traj;
  traj.meta.model_kind = model.kind;
  traj.meta.law_family = law.family;
  traj.meta.perturbation = pert;
  traj.meta.config = cfg;
  traj.samples.reserve(n / cfg.record_stride + 2);

  Mat3 u = cfg.u0;
  ControlOutput prev;
  bool have_prev = false;
  ControlPhase phase = ControlPhase::Preparation;
  double d_prev = 0.0;
  bool have_d_prev = false;

  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const LyapunovContext ctx = compute_context(u, target);

    if (law.family == LawFamily::Combined && phase == ControlPhase::Preparation) {
      bool fire = false;
      if (law.switch_rule.kind == SwitchKind::FixedTime)
        fire = t >= law.switch_rule.time;
      else if (have_d_prev)
        fire = combined_should_switch(law.switch_rule, d_prev, ctx.v_dis, t);
      if (fire) {
        phase = ControlPhase::Preservation;
        traj.meta.switch_time = t;
      }
    }

    const ControlOutput out =
        evaluate(law, ctx, u, model, t, k, have_prev ? &prev : nullptr, phase);
    Vec3 f_applied = out.f;
    if (pert_axis >= 0) f_applied[pert_axis] += pert->lambda;

    if (k % cfg.record_stride == 0 || k == n)
      traj.samples.push_back(make_sample(t, u, ctx, out, f_applied, model, target));
    if (k == n) break;

    const Mat3 b_mid = model.b_at(t + 0.5 * cfg.dt);
    const Mat3 g = f_applied[0] * bloch_ax() + f_applied[1] * bloch_ay() +
                   f_applied[2] * bloch_az() + b_mid;
    u = rk4_step(u, g, cfg.dt);
    check_entries(u, t + cfg.dt);

    prev = out;
    have_prev = true;
    d_prev = ctx.v_dis;
    have_d_prev = true;
  }
  return traj;
}

Trajectory run_free_evolution(const SystemModel& model, const SimConfig& cfg) {
  cfg.validate();
  const std::size_t n = cfg.n_steps();
  const Mat3 target = Mat3::Identity();

  Trajectory traj;
  traj.meta.model_kind = model.kind;
  traj.meta.config = cfg;
  traj.meta.free_evolution = true;
  traj.samples.reserve(n / cfg.record_stride + 2);

  Mat3 u = cfg.u0;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    if (k % cfg.record_stride == 0 || k == n) {
      const LyapunovContext ctx = compute_context(u, target);
      traj.samples.push_back(
          make_sample(t, u, ctx, ControlOutput{}, Vec3::Zero(), model, target));
    }
    if (k == n) break;
    u = rk4_step(u, model.b_at(t + 0.5 * cfg.dt), cfg.dt);
    check_entries(u, t + cfg.dt);
  }
  return traj;
}

}  // namespace qlyap
