// analysis.hpp — scalar figures of merit (distance, gate fidelity, validity)
// and per-run summaries over recorded trajectories.
#pragma once

#include "qlyap/sim.hpp"

namespace qlyap {

// Strict validity threshold on the distance.
inline constexpr double kValidityThreshold = 1e-4;

// D(U) = tr((U - U_f)^T (U - U_f)); identical to V_dis.
double distance(const Mat3& u, const Mat3& u_f);

// F = (tr(U U^T) + tr(U_f^T U)^2) / (N (N + 1)) with N = 3; equals 1 at the
// target for orthogonal U.
double fidelity(const Mat3& u, const Mat3& u_f);

inline bool is_valid(double d) { return d < kValidityThreshold; }

struct RunSummary {
  double d_min = 0.0;
  double t_at_d_min = 0.0;
  double f_max = 0.0;
  double t_at_f_max = 0.0;
  // First sample time with D below threshold; empty if never reached.
  std::optional<double> time_to_valid{};
  // Distance local maxima strictly after the first valid sample (preservation
  // stage); counts crossings back above the threshold environment.
  std::size_t preservation_peaks = 0;
  // True when every sample from time_to_valid onward stays valid.
  bool valid_held = false;
};

RunSummary summarize(const Trajectory& traj);

}  // namespace qlyap
