#include "qlyap/sweep.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace qlyap {

namespace {

struct PointResult {
  double d_min = std::numeric_limits<double>::quiet_NaN();
  double f_max = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
};

PointResult eval_point(const SystemModel& model, const ControlLaw& law,
                       const Mat3& target, const SimConfig& cfg, Axis axis,
                       double lambda) {
  PointResult p;
  try {
    const Trajectory traj =
        run_closed_loop(model, law, target, cfg, PerturbationSpec{axis, lambda});
    const RunSummary s = summarize(traj);
    p.d_min = s.d_min;
    p.f_max = s.f_max;
    p.ok = true;
  } catch (const DivergedError&) {
    // missing point; NaN slots already set
  }
  return p;
}

RobustnessSweepResult make_result(Axis axis, const std::vector<double>& grid) {
  RobustnessSweepResult r;
  r.axis = axis;
  r.lambdas = grid;
  r.d_min_per_lambda.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  r.f_max_per_lambda.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
  r.ok.assign(grid.size(), false);
  return r;
}

}  // namespace

std::vector<double> uniform_grid(double lo, double hi, std::size_t points) {
  if (points == 0) throw std::invalid_argument("uniform_grid: need at least one point");
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = lo;
    return grid;
  }
  const double step = (hi - lo) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

std::size_t RobustnessSweepResult::failed_points() const {
  std::size_t n = 0;
  for (bool b : ok)
    if (!b) ++n;
  return n;
}

double RobustnessSweepResult::mean_d_min() const {
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < ok.size(); ++i) {
    if (ok[i]) {
      sum += d_min_per_lambda[i];
      ++n;
    }
  }
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  return sum / static_cast<double>(n);
}

RobustnessSweepResult robustness_sweep_reference(const SystemModel& model,
                                                 const ControlLaw& law,
                                                 const Mat3& target, const SimConfig& cfg,
                                                 Axis axis,
                                                 const std::vector<double>& lambda_grid) {
  if (lambda_grid.empty())
    throw std::invalid_argument("robustness_sweep: empty lambda grid");
  RobustnessSweepResult r = make_result(axis, lambda_grid);
  for (std::size_t i = 0; i < lambda_grid.size(); ++i) {
    const PointResult p = eval_point(model, law, target, cfg, axis, lambda_grid[i]);
    r.d_min_per_lambda[i] = p.d_min;
    r.f_max_per_lambda[i] = p.f_max;
    r.ok[i] = p.ok;
  }
  return r;
}

RobustnessSweepResult robustness_sweep(const SystemModel& model, const ControlLaw& law,
                                       const Mat3& target, const SimConfig& cfg,
                                       Axis axis, const std::vector<double>& lambda_grid,
                                       ExecPolicy policy) {
  if (policy == ExecPolicy::Serial)
    return robustness_sweep_reference(model, law, target, cfg, axis, lambda_grid);
  if (lambda_grid.empty())
    throw std::invalid_argument("robustness_sweep: empty lambda grid");

  // Workers write whole PointResult slots; the packed-bit ok vector is filled
  // serially afterwards.
  std::vector<PointResult> points(lambda_grid.size());
  const std::int64_t n = static_cast<std::int64_t>(lambda_grid.size());
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    points[idx] = eval_point(model, law, target, cfg, axis, lambda_grid[idx]);
  }

  RobustnessSweepResult r = make_result(axis, lambda_grid);
  for (std::size_t i = 0; i < points.size(); ++i) {
    r.d_min_per_lambda[i] = points[i].d_min;
    r.f_max_per_lambda[i] = points[i].f_max;
    r.ok[i] = points[i].ok;
  }
  return r;
}

}  // namespace qlyap
