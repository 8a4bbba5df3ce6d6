// sweep.hpp — robustness sweeps over perturbation amplitudes.  The per-point
// work (one closed-loop run + summary) is embarrassingly parallel, so the
// production path fans out with OpenMP; robustness_sweep_reference is the
// plain serial loop kept as the correctness baseline.
#pragma once

#include "qlyap/analysis.hpp"

namespace qlyap {

enum class ExecPolicy { Serial, Parallel };

// points uniformly spaced on [lo, hi] inclusive; a single point sits at lo.
std::vector<double> uniform_grid(double lo, double hi, std::size_t points);

struct RobustnessSweepResult {
  Axis axis = Axis::I;
  std::vector<double> lambdas;
  std::vector<double> d_min_per_lambda;  // NaN where the run diverged
  std::vector<double> f_max_per_lambda;  // NaN likewise
  std::vector<bool> ok;

  std::size_t failed_points() const;
  // Mean over the points that completed; NaN if none did.
  double mean_d_min() const;
};

RobustnessSweepResult robustness_sweep_reference(const SystemModel& model,
                                                 const ControlLaw& law,
                                                 const Mat3& target, const SimConfig& cfg,
                                                 Axis axis,
                                                 const std::vector<double>& lambda_grid);

// Same result as the reference path (each worker writes only its own index, so
// the output is identical bit for bit regardless of thread count).
RobustnessSweepResult robustness_sweep(const SystemModel& model, const ControlLaw& law,
                                       const Mat3& target, const SimConfig& cfg,
                                       Axis axis, const std::vector<double>& lambda_grid,
                                       ExecPolicy policy = ExecPolicy::Parallel);

}  // namespace qlyap
