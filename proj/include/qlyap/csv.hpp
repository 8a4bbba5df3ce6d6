// csv.hpp — deterministic text output: shortest-round-trip float formatting
// and the CSV writers behind each experiment command.
#pragma once

#include "qlyap/config.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qlyap {

// Shortest decimal string that parses back to exactly x (std::to_chars);
// "nan"/"inf"/"-inf" for the specials.
std::string format_double(double x);

// Column order: t, u00..u22 (row major), fx/fy/fz designed, fx/fy/fz applied,
// v, v_dis, d, fidelity, purity, guard flags, kick flag — plus atten_d for
// non-Markovian trajectories.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

// t, then D and F columns per labelled trajectory (all on one sample grid).
void write_comparison_csv(std::ostream& os,
                          const std::vector<std::pair<std::string, const Trajectory*>>& runs);

// t, then one purity column per labelled trajectory.
void write_purity_csv(std::ostream& os,
                      const std::vector<std::pair<std::string, const Trajectory*>>& runs);

// Long format: axis, lambda, d_min, f_max; one row per sweep point.
void write_robustness_csv(std::ostream& os,
                          const std::vector<RobustnessSweepResult>& sweeps);

}  // namespace qlyap
