#include "qlyap/control.hpp"

#include <cmath>
#include <stdexcept>

namespace qlyap {

const char* to_string(LawFamily family) {
  switch (family) {
    case LawFamily::LawX: return "law_x";
    case LawFamily::Distributed: return "distributed";
    case LawFamily::LawY: return "law_y";
    case LawFamily::Combined: return "combined";
    case LawFamily::BaselineDis: return "baseline_dis";
  }
  return "?";
}

LawFamily law_family_from_string(const std::string& name) {
  if (name == "law_x") return LawFamily::LawX;
  if (name == "distributed") return LawFamily::Distributed;
  if (name == "law_y") return LawFamily::LawY;
  if (name == "combined") return LawFamily::Combined;
  if (name == "baseline_dis") return LawFamily::BaselineDis;
  throw std::invalid_argument("unknown law family '" + name + "'");
}

void ControlLaw::validate() const {
  const auto nonneg = [](double v, const char* name) {
    if (!(v >= 0.0))
      throw std::invalid_argument(std::string("ControlLaw: ") + name + " must be >= 0");
  };
  nonneg(k_y, "k_y");
  nonneg(k_z, "k_z");
  nonneg(k_nx, "k_nx");
  nonneg(k_ny, "k_ny");
  nonneg(k_nz, "k_nz");
  nonneg(k_yx, "k_yx");
  nonneg(k_yz, "k_yz");
  for (double h : {h_nx, h_ny, h_nz}) {
    if (!(h >= 0.0) || h > 1.0)
      throw std::invalid_argument("ControlLaw: h shares must lie in [0, 1]");
  }
  if (std::abs(h_nx + h_ny + h_nz - 1.0) > 1e-12)
    throw std::invalid_argument("ControlLaw: h shares must sum to 1");
  if (!(f_max > 0.0)) throw std::invalid_argument("ControlLaw: f_max must be > 0");
  if (!(eps_den > 0.0)) throw std::invalid_argument("ControlLaw: eps_den must be > 0");
  if (kick_steps < 1) throw std::invalid_argument("ControlLaw: kick_steps must be >= 1");
  if (!(switch_rule.threshold > 0.0))
    throw std::invalid_argument("ControlLaw: switch threshold must be > 0");
  if (switch_rule.kind == SwitchKind::FixedTime && !(switch_rule.time >= 0.0))
    throw std::invalid_argument("ControlLaw: switch time must be >= 0");
}

namespace {

struct AxisPlan {
  double nominal = 0.0;
  double denominator = 0.0;
  bool has_denominator = false;
};

// f_j for one axis with both guards: a near-zero denominator or a value past
// f_max holds the previous output instead.
void apply_axis(const AxisPlan& plan, double eps_den, double f_max, double prev_f,
                double& f_out, bool& guarded_out) {
  if (plan.has_denominator && std::abs(plan.denominator) < eps_den) {
    f_out = prev_f;
    guarded_out = true;
    return;
  }
  if (std::abs(plan.nominal) > f_max) {
    f_out = prev_f;
    guarded_out = true;
    return;
  }
  f_out = plan.nominal;
  guarded_out = false;
}

}  // namespace

ControlOutput evaluate(const ControlLaw& law, const LyapunovContext& ctx, const Mat3& u,
                       const SystemModel& model, double t, std::size_t step,
                       const ControlOutput* prev, ControlPhase phase) {
  LawFamily family = law.family;
  if (family == LawFamily::Combined)
    family = (phase == ControlPhase::Preservation) ? LawFamily::LawX : LawFamily::Distributed;

  const Mat3 b = model.b_at(t);
  ControlOutput out;
  out.s = (family == LawFamily::BaselineDis) ? s_dis_values(ctx, u, b)
                                             : s_values(ctx, u, b);

  if (step < law.kick_steps) {
    out.f = law.kick;
    out.kick = true;
    return out;
  }
  if (prev == nullptr)
    throw std::invalid_argument("evaluate: previous output required after the kick steps");

  const SValues& s = out.s;
  AxisPlan plan[3];
  switch (family) {
    case LawFamily::LawX:
    case LawFamily::BaselineDis:
      plan[0] = {-s.b / s.ax, s.ax, true};
      plan[1] = {-law.k_y * s.ay, 0.0, false};
      plan[2] = {-law.k_z * s.az, 0.0, false};
      break;
    case LawFamily::LawY:
      plan[0] = {-law.k_yx * s.ax, 0.0, false};
      plan[1] = {-s.b / s.ay, s.ay, true};
      plan[2] = {-law.k_yz * s.az, 0.0, false};
      break;
    case LawFamily::Distributed: {
      const double k[3] = {law.k_nx, law.k_ny, law.k_nz};
      const double h[3] = {law.h_nx, law.h_ny, law.h_nz};
      const double sa[3] = {s.ax, s.ay, s.az};
      for (int j = 0; j < 3; ++j) {
        // Axes with no drift share never divide by S(A_j).
        if (h[j] != 0.0)
          plan[j] = {-k[j] * sa[j] - h[j] * s.b / sa[j], sa[j], true};
        else
          plan[j] = {-k[j] * sa[j], 0.0, false};
      }
      break;
    }
    case LawFamily::Combined:
      break;  // resolved above
  }

  for (int j = 0; j < 3; ++j)
    apply_axis(plan[j], law.eps_den, law.f_max, prev->f[j], out.f[j], out.guarded[j]);
  return out;
}

bool combined_should_switch(const SwitchRule& rule, double d_prev, double d_curr,
                            double t) {
  if (rule.kind == SwitchKind::FixedTime) return t >= rule.time;
  return d_curr < rule.threshold && d_curr > d_prev;
}

bool combined_should_switch(const SwitchRule& rule, const std::vector<double>& d_series,
                            double t) {
  if (rule.kind == SwitchKind::FixedTime) return t >= rule.time;
  if (d_series.size() < 2) return false;
  return combined_should_switch(rule, d_series[d_series.size() - 2], d_series.back(), t);
}

}  // namespace qlyap
