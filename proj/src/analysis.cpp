#include "qlyap/analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace qlyap {

double distance(const Mat3& u, const Mat3& u_f) {
  const Mat3 diff = u - u_f;
  return (diff.transpose() * diff).trace();
}

double fidelity(const Mat3& u, const Mat3& u_f) {
  const double overlap = (u_f.transpose() * u).trace();
  return ((u * u.transpose()).trace() + overlap * overlap) / 12.0;
}

RunSummary summarize(const Trajectory& traj) {
  const auto& samples = traj.samples;
  if (samples.empty()) throw std::invalid_argument("summarize: empty trajectory");

  RunSummary out;
  std::size_t idx_min = 0;
  std::size_t idx_max = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].v_dis < samples[idx_min].v_dis) idx_min = i;
    if (samples[i].fidelity > samples[idx_max].fidelity) idx_max = i;
    if (!out.time_to_valid && is_valid(samples[i].v_dis))
      out.time_to_valid = samples[i].t;
  }
  out.d_min = samples[idx_min].v_dis;
  out.t_at_d_min = samples[idx_min].t;
  out.f_max = samples[idx_max].fidelity;
  out.t_at_f_max = samples[idx_max].t;

  // Preservation stage: strictly after the first distance minimum.  A peak is
  // a strict local maximum of the sampled D series above the validity bound.
  for (std::size_t i = idx_min + 1; i + 1 < samples.size(); ++i) {
    const double d = samples[i].v_dis;
    if (d > kValidityThreshold && d > samples[i - 1].v_dis && d > samples[i + 1].v_dis)
      ++out.preservation_peaks;
  }

  if (out.time_to_valid) {
    out.valid_held = true;
    for (const auto& s : samples) {
      if (s.t >= *out.time_to_valid && !is_valid(s.v_dis)) {
        out.valid_held = false;
        break;
      }
    }
  }
  return out;
}

}  // namespace qlyap
