// control.hpp — the feedback-law families, their guards, the initial kick that
// moves the system off the V-critical start, and the combined switching rule.
#pragma once

#include "qlyap/lyapunov.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace qlyap {

enum class LawFamily { LawX, Distributed, LawY, Combined, BaselineDis };

const char* to_string(LawFamily family);
LawFamily law_family_from_string(const std::string& name);

// Combined law: when to hand over from the distributed preparation law to the
// x-law preservation stage.  LocalMinBelowThreshold fires at the first sample
// where the distance turns back up while already below `threshold`; FixedTime
// fires at t >= time.
enum class SwitchKind { LocalMinBelowThreshold, FixedTime };

struct SwitchRule {
  SwitchKind kind = SwitchKind::LocalMinBelowThreshold;
  double threshold = 1e-4;
  double time = 0.0;
};

enum class ControlPhase { Preparation, Preservation };

struct ControlLaw {
  LawFamily family = LawFamily::LawX;

  // LawX / BaselineDis (and the Combined preservation stage)
  double k_y = 400.0;
  double k_z = 400.0;

  // Distributed (and the Combined preparation stage); the h_n* are the drift
  // shares per axis and must sum to 1.
  double k_nx = 0.0;
  double k_ny = 0.0;
  double k_nz = 0.0;
  double h_nx = 1.0;
  double h_ny = 0.0;
  double h_nz = 0.0;

  // LawY
  double k_yx = 400.0;
  double k_yz = 400.0;

  double f_max = 500.0;
  double eps_den = 1e-6;

  // Constant control applied verbatim (no guards) for the first kick_steps
  // steps; lifts the trajectory off the S = 0 start.
  Vec3 kick = Vec3::Zero();
  std::size_t kick_steps = 1;

  SwitchRule switch_rule{};

  // Throws std::invalid_argument on bad gains (negative k or f_max/eps_den,
  // h shares not summing to 1 within 1e-12).
  void validate() const;
};

struct ControlOutput {
  Vec3 f = Vec3::Zero();
  // Per axis: true when a guard replaced the nominal value (denominator too
  // small, or magnitude above f_max).
  std::array<bool, 3> guarded = {false, false, false};
  bool kick = false;
  SValues s{};
};

// One controller evaluation.  `prev` is the previous output (guards hold its
// value); it may be null only while step < kick_steps.  `phase` matters only
// for the Combined family.
ControlOutput evaluate(const ControlLaw& law, const LyapunovContext& ctx, const Mat3& u,
                       const SystemModel& model, double t, std::size_t step,
                       const ControlOutput* prev,
                       ControlPhase phase = ControlPhase::Preparation);

// Switch decision given the distance series recorded so far (latest last) and
// the current time.  Always false with fewer than two points under the
// local-minimum rule.
bool combined_should_switch(const SwitchRule& rule, const std::vector<double>& d_series,
                            double t);
bool combined_should_switch(const SwitchRule& rule, double d_prev, double d_curr, double t);

}  // namespace qlyap
