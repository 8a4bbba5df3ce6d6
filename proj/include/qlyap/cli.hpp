// cli.hpp — the experiment commands behind the qlyap binary, exposed as
// library calls so tests can drive them without spawning processes.
#pragma once

#include "qlyap/config.hpp"
#include "qlyap/csv.hpp"

#include <filesystem>
#include <optional>

namespace qlyap::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitDiverged = 2;
inline constexpr int kExitIo = 3;

// --out beats this; this beats the config's output.directory.
inline constexpr const char* kOutDirEnvVar = "QLYAP_OUT_DIR";

struct Options {
  std::filesystem::path config_path;
  std::optional<std::filesystem::path> out_dir{};
};

// Loads + validates the config, requires its `experiment` to match `expected`,
// resolves the output directory, runs, writes the artifact bundle
// (resolved_config.json, summary.json, CSVs).  Returns an exit code from the
// contract above; diagnostics go to stderr.
int run_command(ExperimentKind expected, const Options& opt);

std::filesystem::path resolve_out_dir(const Options& opt, const ExperimentConfig& cfg);

}  // namespace qlyap::cli
