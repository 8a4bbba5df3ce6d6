#include "qlyap/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qlyap {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

namespace {

void require_same_grid(const std::vector<std::pair<std::string, const Trajectory*>>& runs) {
  if (runs.empty()) throw std::invalid_argument("csv: no trajectories given");
  const auto& first = runs.front().second->samples;
  for (const auto& [label, traj] : runs) {
    if (traj->samples.size() != first.size())
      throw std::invalid_argument("csv: trajectories for '" + label +
                                  "' are on a different sample grid");
  }
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const bool with_atten = traj.meta.model_kind == ModelKind::NonMarkovian;
  os << "t,u00,u01,u02,u10,u11,u12,u20,u21,u22"
        ",fx_designed,fy_designed,fz_designed,fx_applied,fy_applied,fz_applied"
        ",v,v_dis,d,fidelity,purity,guard_x,guard_y,guard_z,kick";
  if (with_atten) os << ",atten_d";
  os << "\n";
  for (const auto& s : traj.samples) {
    os << format_double(s.t);
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) os << "," << format_double(s.u(r, c));
    for (int i = 0; i < 3; ++i) os << "," << format_double(s.f_designed[i]);
    for (int i = 0; i < 3; ++i) os << "," << format_double(s.f_applied[i]);
    os << "," << format_double(s.v) << "," << format_double(s.v_dis) << ","
       << format_double(s.v_dis) << "," << format_double(s.fidelity) << ","
       << format_double(s.purity);
    for (int i = 0; i < 3; ++i) os << "," << (s.guarded[i] ? 1 : 0);
    os << "," << (s.kick ? 1 : 0);
    if (with_atten) os << "," << format_double(s.atten_d);
    os << "\n";
  }
}

void write_comparison_csv(std::ostream& os,
                          const std::vector<std::pair<std::string, const Trajectory*>>& runs) {
  require_same_grid(runs);
  os << "t";
  for (const auto& [label, traj] : runs) os << ",d_" << label << ",f_" << label;
  os << "\n";
  const std::size_t n = runs.front().second->samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    os << format_double(runs.front().second->samples[i].t);
    for (const auto& [label, traj] : runs) {
      const auto& s = traj->samples[i];
      os << "," << format_double(s.v_dis) << "," << format_double(s.fidelity);
    }
    os << "\n";
  }
}

void write_purity_csv(std::ostream& os,
                      const std::vector<std::pair<std::string, const Trajectory*>>& runs) {
  require_same_grid(runs);
  os << "t";
  for (const auto& [label, traj] : runs) os << ",purity_" << label;
  os << "\n";
  const std::size_t n = runs.front().second->samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    os << format_double(runs.front().second->samples[i].t);
    for (const auto& [label, traj] : runs)
      os << "," << format_double(traj->samples[i].purity);
    os << "\n";
  }
}

void write_robustness_csv(std::ostream& os,
                          const std::vector<RobustnessSweepResult>& sweeps) {
  os << "axis,lambda,d_min,f_max\n";
  for (const auto& sweep : sweeps) {
    for (std::size_t i = 0; i < sweep.lambdas.size(); ++i) {
      os << to_string(sweep.axis) << "," << format_double(sweep.lambdas[i]) << ","
         << format_double(sweep.d_min_per_lambda[i]) << ","
         << format_double(sweep.f_max_per_lambda[i]) << "\n";
    }
  }
}

}  // namespace qlyap
