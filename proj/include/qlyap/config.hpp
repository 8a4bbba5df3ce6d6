// config.hpp — experiment configuration: JSON schema with strict validation
// (unknown keys rejected), defaults, and a fully-resolved echo for
// reproducibility.
#pragma once

#include "qlyap/sweep.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qlyap {

enum class ExperimentKind { Run, Compare, FreeEvolution, Robustness };

const char* to_string(ExperimentKind kind);

struct LawConfig {
  ControlLaw law{};
  std::string label;  // column/file tag; defaults to the family name
};

struct TargetConfig {
  std::string name = "not";  // "not" | "hadamard" | "identity" | "custom"
  Mat2c unitary = Mat2c::Identity();
  Mat3 bloch = Mat3::Identity();  // resolved image used by the runs
};

struct RobustnessConfig {
  std::vector<Axis> axes = {Axis::X, Axis::Y, Axis::Z};
  double lambda_min = -100.0;
  double lambda_max = 100.0;
  std::size_t points = 41;
  ExecPolicy policy = ExecPolicy::Parallel;
};

struct OutputConfig {
  std::string directory = "out";
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Run;
  SystemModel model{};
  std::vector<LawConfig> laws;                // exactly 1 for run; >= 2 for compare
  std::vector<ModelKind> free_kinds;          // free-evolution only
  SimConfig sim{};
  TargetConfig target{};
  std::optional<PerturbationSpec> perturbation{};
  RobustnessConfig robustness{};
  OutputConfig output{};
};

// Parses and validates; throws std::invalid_argument naming the offending
// field.  Unknown keys anywhere are rejected.
ExperimentConfig parse_config(const nlohmann::json& j);

// Reads the file (I/O failures -> std::runtime_error), then parse_config.
ExperimentConfig load_config(const std::filesystem::path& path);

// The fully-resolved config (every default filled in) as JSON — embedded in
// each output bundle so a run can be reproduced from its artifacts alone.
nlohmann::json resolved_json(const ExperimentConfig& cfg);

}  // namespace qlyap
