#include "qlyap/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>

namespace qlyap::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& emit) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
  emit(os);
  os.flush();
  if (!os) throw std::runtime_error("write to " + path.string() + " failed");
}

json summary_json(const RunSummary& s) {
  json j;
  j["d_min"] = s.d_min;
  j["t_at_d_min"] = s.t_at_d_min;
  j["f_max"] = s.f_max;
  j["t_at_f_max"] = s.t_at_f_max;
  if (s.time_to_valid)
    j["time_to_valid"] = *s.time_to_valid;
  else
    j["time_to_valid"] = nullptr;
  j["preservation_peaks"] = s.preservation_peaks;
  j["valid_held"] = s.valid_held;
  // fidelity is reported unclipped; flag physically impossible excursions
  j["fidelity_overshoot"] = s.f_max > 1.0 + 1e-9;
  return j;
}

void write_bundle(const fs::path& out, const ExperimentConfig& cfg, json summary) {
  summary["config"] = resolved_json(cfg);
  write_file(out / "summary.json", [&](std::ostream& os) { os << summary.dump(2) << "\n"; });
  write_file(out / "resolved_config.json",
             [&](std::ostream& os) { os << resolved_json(cfg).dump(2) << "\n"; });
}

void print_summary_line(const std::string& label, const RunSummary& s) {
  std::cout << "  " << label << ": d_min=" << format_double(s.d_min)
            << " at t=" << format_double(s.t_at_d_min)
            << ", f_max=" << format_double(s.f_max) << ", time_to_valid="
            << (s.time_to_valid ? format_double(*s.time_to_valid) : "never")
            << ", peaks=" << s.preservation_peaks
            << ", valid_held=" << (s.valid_held ? "true" : "false") << "\n";
}

int cmd_run(const ExperimentConfig& cfg, const fs::path& out) {
  Trajectory traj;
  try {
    traj = run_closed_loop(cfg.model, cfg.laws[0].law, cfg.target.bloch, cfg.sim,
                           cfg.perturbation);
  } catch (const DivergedError& e) {
    std::cerr << "qlyap: " << e.what() << "\n";
    return kExitDiverged;
  }
  const RunSummary s = summarize(traj);

  write_file(out / "trajectory.csv",
             [&](std::ostream& os) { write_trajectory_csv(os, traj); });
  json summary;
  summary["model"] = to_string(cfg.model.kind);
  summary["law"] = cfg.laws[0].label;
  summary["target"] = cfg.target.name;
  summary["summary"] = summary_json(s);
  if (traj.meta.switch_time) summary["switch_time"] = *traj.meta.switch_time;
  write_bundle(out, cfg, summary);

  std::cout << "run: " << to_string(cfg.model.kind) << " / " << cfg.laws[0].label
            << " -> " << cfg.target.name << "\n";
  print_summary_line(cfg.laws[0].label, s);
  std::cout << "wrote " << (out / "trajectory.csv").string() << "\n";
  return kExitOk;
}

int cmd_compare(const ExperimentConfig& cfg, const fs::path& out) {
  struct LawRun {
    std::string label;
    Trajectory traj;
    RunSummary summary;
    bool ok = false;
    std::string error;
  };
  std::vector<LawRun> runs(cfg.laws.size());
  for (std::size_t i = 0; i < cfg.laws.size(); ++i) {
    runs[i].label = cfg.laws[i].label;
    try {
      runs[i].traj = run_closed_loop(cfg.model, cfg.laws[i].law, cfg.target.bloch,
                                     cfg.sim, cfg.perturbation);
      runs[i].summary = summarize(runs[i].traj);
      runs[i].ok = true;
    } catch (const DivergedError& e) {
      runs[i].error = e.what();
      std::cerr << "qlyap: law '" << runs[i].label << "': " << e.what() << "\n";
    }
  }

  std::vector<std::pair<std::string, const Trajectory*>> completed;
  for (const auto& r : runs)
    if (r.ok) completed.emplace_back(r.label, &r.traj);
  if (completed.empty()) {
    std::cerr << "qlyap: every law diverged\n";
    return kExitDiverged;
  }

  for (const auto& [label, traj] : completed)
    write_file(out / ("trajectory_" + label + ".csv"),
               [t = traj](std::ostream& os) { write_trajectory_csv(os, *t); });
  write_file(out / "comparison.csv",
             [&](std::ostream& os) { write_comparison_csv(os, completed); });

  // ranking: completed runs ordered by d_min, then by time_to_valid (laws that
  // never reach validity sort last)
  std::vector<const LawRun*> by_d, by_valid;
  for (const auto& r : runs)
    if (r.ok) {
      by_d.push_back(&r);
      by_valid.push_back(&r);
    }
  std::stable_sort(by_d.begin(), by_d.end(), [](const LawRun* a, const LawRun* b) {
    return a->summary.d_min < b->summary.d_min;
  });
  std::stable_sort(by_valid.begin(), by_valid.end(),
                   [](const LawRun* a, const LawRun* b) {
                     const auto& ta = a->summary.time_to_valid;
                     const auto& tb = b->summary.time_to_valid;
                     if (ta && tb) return *ta < *tb;
                     return ta.has_value() && !tb.has_value();
                   });

  json summary;
  summary["model"] = to_string(cfg.model.kind);
  summary["target"] = cfg.target.name;
  json laws = json::object();
  for (const auto& r : runs) {
    if (r.ok) {
      laws[r.label] = summary_json(r.summary);
      if (r.traj.meta.switch_time) laws[r.label]["switch_time"] = *r.traj.meta.switch_time;
    } else {
      laws[r.label] = {{"error", r.error}};
    }
  }
  summary["laws"] = laws;
  json rank_d = json::array(), rank_v = json::array();
  for (const auto* r : by_d) rank_d.push_back(r->label);
  for (const auto* r : by_valid) rank_v.push_back(r->label);
  summary["ranking_by_d_min"] = rank_d;
  summary["ranking_by_time_to_valid"] = rank_v;
  write_bundle(out, cfg, summary);

  std::cout << "compare: " << to_string(cfg.model.kind) << " -> " << cfg.target.name
            << "\n";
  for (const auto& r : runs) {
    if (r.ok)
      print_summary_line(r.label, r.summary);
    else
      std::cout << "  " << r.label << ": " << r.error << "\n";
  }
  std::cout << "wrote " << (out / "comparison.csv").string() << "\n";
  return kExitOk;
}

int cmd_free_evolution(const ExperimentConfig& cfg, const fs::path& out) {
  std::vector<Trajectory> trajs;
  trajs.reserve(cfg.free_kinds.size());
  for (ModelKind kind : cfg.free_kinds) {
    const SystemModel model = make_model(kind, cfg.model.gamma, cfg.model.bath);
    trajs.push_back(run_free_evolution(model, cfg.sim));
  }

  std::vector<std::pair<std::string, const Trajectory*>> labelled;
  for (std::size_t i = 0; i < trajs.size(); ++i)
    labelled.emplace_back(to_string(cfg.free_kinds[i]), &trajs[i]);
  write_file(out / "purity.csv", [&](std::ostream& os) { write_purity_csv(os, labelled); });

  json summary;
  json kinds = json::object();
  for (const auto& [label, traj] : labelled) {
    double min_p = traj->samples.front().purity;
    for (const auto& s : traj->samples) min_p = std::min(min_p, s.purity);
    kinds[label] = {{"final_purity", traj->samples.back().purity},
                    {"min_purity", min_p}};
  }
  summary["kinds"] = kinds;
  write_bundle(out, cfg, summary);

  std::cout << "free evolution:";
  for (const auto& [label, traj] : labelled)
    std::cout << " " << label << " P(t_end)=" << format_double(traj->samples.back().purity);
  std::cout << "\nwrote " << (out / "purity.csv").string() << "\n";
  return kExitOk;
}

int cmd_robustness(const ExperimentConfig& cfg, const fs::path& out) {
  const std::vector<double> grid = uniform_grid(
      cfg.robustness.lambda_min, cfg.robustness.lambda_max, cfg.robustness.points);
  std::vector<RobustnessSweepResult> sweeps;
  sweeps.reserve(cfg.robustness.axes.size());
  for (Axis axis : cfg.robustness.axes)
    sweeps.push_back(robustness_sweep(cfg.model, cfg.laws[0].law, cfg.target.bloch,
                                      cfg.sim, axis, grid, cfg.robustness.policy));

  std::size_t total = 0, failed = 0;
  for (const auto& s : sweeps) {
    total += s.lambdas.size();
    failed += s.failed_points();
  }
  write_file(out / "robustness.csv",
             [&](std::ostream& os) { write_robustness_csv(os, sweeps); });

  // per-axis mean-d_min ranking, all-failed axes last
  std::vector<const RobustnessSweepResult*> order;
  for (const auto& s : sweeps) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const RobustnessSweepResult* a, const RobustnessSweepResult* b) {
                     const double ma = a->mean_d_min(), mb = b->mean_d_min();
                     if (std::isnan(ma)) return false;
                     if (std::isnan(mb)) return true;
                     return ma < mb;
                   });

  json summary;
  json axes = json::object();
  for (const auto& s : sweeps) {
    json a;
    const double mean = s.mean_d_min();
    a["mean_d_min"] = std::isnan(mean) ? json(nullptr) : json(mean);
    a["failed_points"] = s.failed_points();
    axes[to_string(s.axis)] = a;
  }
  summary["axes"] = axes;
  json ranking = json::array();
  for (const auto* s : order) ranking.push_back(to_string(s->axis));
  summary["ranking_by_mean_d_min"] = ranking;
  write_bundle(out, cfg, summary);

  std::cout << "robustness: " << to_string(cfg.model.kind) << " / "
            << cfg.laws[0].label << ", " << grid.size() << " points per axis\n";
  for (const auto& s : sweeps)
    std::cout << "  axis " << to_string(s.axis)
              << ": mean d_min=" << format_double(s.mean_d_min()) << " ("
              << s.failed_points() << " failed)\n";
  std::cout << "wrote " << (out / "robustness.csv").string() << "\n";
  if (failed == total) {
    std::cerr << "qlyap: every sweep point diverged\n";
    return kExitDiverged;
  }
  return kExitOk;
}

}  // namespace

std::filesystem::path resolve_out_dir(const Options& opt, const ExperimentConfig& cfg) {
  if (opt.out_dir) return *opt.out_dir;
  if (const char* env = std::getenv(kOutDirEnvVar); env && *env) return fs::path(env);
  return fs::path(cfg.output.directory);
}

int run_command(ExperimentKind expected, const Options& opt) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(opt.config_path);
  } catch (const std::invalid_argument& e) {
    std::cerr << "qlyap: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "qlyap: " << e.what() << "\n";
    return kExitIo;
  }
  if (cfg.experiment != expected) {
    std::cerr << "qlyap: config field 'experiment' is '" << to_string(cfg.experiment)
              << "' but the '" << to_string(expected) << "' command was invoked\n";
    return kExitValidation;
  }

  // duplicate labels would collide in CSV columns and filenames
  for (std::size_t i = 0; i < cfg.laws.size(); ++i)
    for (std::size_t k = i + 1; k < cfg.laws.size(); ++k)
      if (cfg.laws[i].label == cfg.laws[k].label) {
        std::cerr << "qlyap: config: laws: duplicate label '" << cfg.laws[i].label
                  << "'\n";
        return kExitValidation;
      }

  const fs::path out = resolve_out_dir(opt, cfg);
  try {
    fs::create_directories(out);
  } catch (const fs::filesystem_error& e) {
    std::cerr << "qlyap: cannot create output directory: " << e.what() << "\n";
    return kExitIo;
  }

  try {
    switch (cfg.experiment) {
      case ExperimentKind::Run: return cmd_run(cfg, out);
      case ExperimentKind::Compare: return cmd_compare(cfg, out);
      case ExperimentKind::FreeEvolution: return cmd_free_evolution(cfg, out);
      case ExperimentKind::Robustness: return cmd_robustness(cfg, out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "qlyap: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    std::cerr << "qlyap: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitValidation;
}

}  // namespace qlyap::cli
