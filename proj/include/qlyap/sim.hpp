// sim.hpp — fixed-step RK4 propagation of the operator equation
// dU/dt = (A(t) + B(t)) U with zero-order-hold feedback, optional constant
// perturbation on one control axis, and free (uncontrolled) evolution.
#pragma once

#include "qlyap/control.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace qlyap {

struct SimConfig {
  double dt = 1e-4;
  double t_end = 5.0;
  Mat3 u0 = Mat3::Identity();
  // Every record_stride-th step lands in the trajectory (the final point is
  // always kept).
  std::size_t record_stride = 1;

  void validate() const;
  std::size_t n_steps() const;
};

// Constant offset added to the applied control on one axis; the controller
// designs its f from the unperturbed model and never sees lambda.  Axis::I is
// the identity, a no-op.
struct PerturbationSpec {
  Axis axis = Axis::I;
  double lambda = 0.0;
};

struct TrajectorySample {
  double t = 0.0;
  Mat3 u = Mat3::Identity();
  Vec3 f_designed = Vec3::Zero();
  Vec3 f_applied = Vec3::Zero();
  double v = 0.0;
  double v_dis = 0.0;
  double fidelity = 0.0;
  double purity = 0.0;
  double atten_d = 0.0;  // bath rate d(t); nonzero only for non-Markovian runs
  std::array<bool, 3> guarded = {false, false, false};
  bool kick = false;
  bool mercator_ok = true;  // spectral radius of W - I below 1 at this sample
};

struct TrajectoryMeta {
  ModelKind model_kind = ModelKind::Closed;
  LawFamily law_family = LawFamily::LawX;
  std::optional<PerturbationSpec> perturbation{};
  SimConfig config{};
  bool free_evolution = false;
  std::optional<double> switch_time{};  // Combined: when the handover fired
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  TrajectoryMeta meta;
};

// An operator entry left [-1e12, 1e12] (or went non-finite); carries the step
// time at which the cutoff tripped.
class DivergedError : public std::runtime_error {
 public:
  explicit DivergedError(double t_fail);
  double time() const noexcept { return t_fail_; }

 private:
  double t_fail_;
};

// One classical RK4 step of dU/dt = G U with G frozen over the step.
Mat3 rk4_step(const Mat3& u, const Mat3& generator, double dt);

// Closed-loop preparation of `target` (a Bloch-picture gate).  The control is
// evaluated once per step from the state at the step start and held constant
// across the step; B(t) is sampled at the step midpoint.
Trajectory run_closed_loop(const SystemModel& model, const ControlLaw& law,
                           const Mat3& target, const SimConfig& cfg,
                           const std::optional<PerturbationSpec>& pert = {});

// All controls identically zero, no kick; distance metrics are taken against
// the identity so the purity/decay readout has a fixed reference.
Trajectory run_free_evolution(const SystemModel& model, const SimConfig& cfg);

}  // namespace qlyap
