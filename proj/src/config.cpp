#include "qlyap/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace qlyap {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw std::invalid_argument("config: " + where + ": " + what);
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& item : j.items()) {
    if (!allowed.count(item.key())) fail(where + "." + item.key(), "unknown key");
  }
}

double get_number(const json& j, const std::string& key, double fallback,
                  const std::string& where) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) fail(where + "." + key, "expected a number");
  return j[key].get<double>();
}

double require_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) fail(where + "." + key, "missing");
  if (!j[key].is_number()) fail(where + "." + key, "expected a number");
  return j[key].get<double>();
}

std::size_t get_index(const json& j, const std::string& key, std::size_t fallback,
                      const std::string& where) {
  if (!j.contains(key)) return fallback;
  // parsed text stores non-negative integers unsigned, but configs assembled
  // through the json API hand us signed ones
  if (!j[key].is_number_integer() || j[key].get<long long>() < 0)
    fail(where + "." + key, "expected a non-negative integer");
  return j[key].get<std::size_t>();
}

std::string require_string(const json& j, const std::string& key,
                           const std::string& where) {
  if (!j.contains(key)) fail(where + "." + key, "missing");
  if (!j[key].is_string()) fail(where + "." + key, "expected a string");
  return j[key].get<std::string>();
}

Vec3 get_vec3(const json& j, const std::string& key, const Vec3& fallback,
              const std::string& where) {
  if (!j.contains(key)) return fallback;
  const json& a = j[key];
  if (!a.is_array() || a.size() != 3) fail(where + "." + key, "expected [x, y, z]");
  Vec3 v;
  for (int i = 0; i < 3; ++i) {
    if (!a[i].is_number()) fail(where + "." + key, "expected numeric entries");
    v[i] = a[i].get<double>();
  }
  return v;
}

BathParams parse_bath(const json& j, const std::string& where) {
  check_keys(j, {"alpha_sq", "kT", "beta", "omega0", "sine_divisor"}, where);
  BathParams p;
  p.alpha_sq = get_number(j, "alpha_sq", p.alpha_sq, where);
  p.kT = get_number(j, "kT", p.kT, where);
  p.beta = get_number(j, "beta", p.beta, where);
  p.omega0 = get_number(j, "omega0", p.omega0, where);
  if (j.contains("sine_divisor"))
    p.sine_divisor = require_number(j, "sine_divisor", where);
  return p;
}

SystemModel parse_model(const json& j, const std::string& where) {
  check_keys(j, {"kind", "gamma", "bath"}, where);
  ModelKind kind = ModelKind::Closed;
  if (j.contains("kind")) {
    try {
      kind = model_kind_from_string(require_string(j, "kind", where));
    } catch (const std::invalid_argument& e) {
      fail(where + ".kind", e.what());
    }
  }
  const double gamma = get_number(j, "gamma", 0.1, where);
  BathParams bath;
  if (j.contains("bath")) bath = parse_bath(j["bath"], where + ".bath");
  try {
    return make_model(kind, gamma, bath);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
}

SwitchRule parse_switch(const json& j, const std::string& where) {
  check_keys(j, {"kind", "threshold", "time"}, where);
  SwitchRule rule;
  if (j.contains("kind")) {
    const std::string kind = require_string(j, "kind", where);
    if (kind == "local_min")
      rule.kind = SwitchKind::LocalMinBelowThreshold;
    else if (kind == "fixed_time")
      rule.kind = SwitchKind::FixedTime;
    else
      fail(where + ".kind", "expected 'local_min' or 'fixed_time'");
  }
  rule.threshold = get_number(j, "threshold", rule.threshold, where);
  rule.time = get_number(j, "time", rule.time, where);
  if (rule.kind == SwitchKind::FixedTime && !j.contains("time"))
    fail(where + ".time", "missing (required for fixed_time)");
  return rule;
}

LawConfig parse_law(const json& j, const std::string& where) {
  check_keys(j,
             {"family", "label", "k_y", "k_z", "k_nx", "k_ny", "k_nz", "h_nx", "h_ny",
              "h_nz", "k_yx", "k_yz", "f_max", "eps_den", "kick", "kick_steps",
              "switch"},
             where);
  LawConfig out;
  ControlLaw& law = out.law;
  try {
    law.family = law_family_from_string(require_string(j, "family", where));
  } catch (const std::invalid_argument& e) {
    fail(where + ".family", e.what());
  }
  law.k_y = get_number(j, "k_y", law.k_y, where);
  law.k_z = get_number(j, "k_z", law.k_z, where);
  law.k_nx = get_number(j, "k_nx", law.k_nx, where);
  law.k_ny = get_number(j, "k_ny", law.k_ny, where);
  law.k_nz = get_number(j, "k_nz", law.k_nz, where);
  law.k_yx = get_number(j, "k_yx", law.k_yx, where);
  law.k_yz = get_number(j, "k_yz", law.k_yz, where);
  if (j.contains("h_nx") || j.contains("h_ny") || j.contains("h_nz")) {
    law.h_nx = get_number(j, "h_nx", 0.0, where);
    law.h_ny = get_number(j, "h_ny", 0.0, where);
    // the third share may be left implicit
    law.h_nz = j.contains("h_nz") ? require_number(j, "h_nz", where)
                                  : 1.0 - law.h_nx - law.h_ny;
  }
  law.f_max = get_number(j, "f_max", law.f_max, where);
  law.eps_den = get_number(j, "eps_den", law.eps_den, where);
  law.kick = get_vec3(j, "kick", law.kick, where);
  law.kick_steps = get_index(j, "kick_steps", law.kick_steps, where);
  if (j.contains("switch")) law.switch_rule = parse_switch(j["switch"], where + ".switch");
  try {
    law.validate();
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  out.label = j.contains("label") ? require_string(j, "label", where)
                                  : std::string(to_string(law.family));
  return out;
}

SimConfig parse_sim(const json& j, const std::string& where) {
  check_keys(j, {"dt", "t_end", "record_stride", "u0"}, where);
  SimConfig cfg;
  cfg.dt = get_number(j, "dt", cfg.dt, where);
  cfg.t_end = get_number(j, "t_end", cfg.t_end, where);
  cfg.record_stride = get_index(j, "record_stride", cfg.record_stride, where);
  if (j.contains("u0")) {
    const json& rows = j["u0"];
    if (!rows.is_array() || rows.size() != 3) fail(where + ".u0", "expected 3 rows");
    for (int r = 0; r < 3; ++r) {
      if (!rows[r].is_array() || rows[r].size() != 3)
        fail(where + ".u0", "expected 3 columns per row");
      for (int c = 0; c < 3; ++c) {
        if (!rows[r][c].is_number()) fail(where + ".u0", "expected numeric entries");
        cfg.u0(r, c) = rows[r][c].get<double>();
      }
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return cfg;
}

TargetConfig parse_target(const json& j, const std::string& where) {
  check_keys(j, {"gate", "unitary"}, where);
  if (j.contains("gate") == j.contains("unitary"))
    fail(where, "expected exactly one of 'gate' or 'unitary'");
  TargetConfig t;
  if (j.contains("gate")) {
    t.name = require_string(j, "gate", where);
    if (t.name == "not")
      t.unitary = gate_not();
    else if (t.name == "hadamard")
      t.unitary = gate_hadamard();
    else if (t.name == "identity")
      t.unitary = gate_identity();
    else
      fail(where + ".gate", "expected 'not', 'hadamard' or 'identity'");
  } else {
    t.name = "custom";
    const json& rows = j["unitary"];
    if (!rows.is_array() || rows.size() != 2) fail(where + ".unitary", "expected 2 rows");
    for (int r = 0; r < 2; ++r) {
      if (!rows[r].is_array() || rows[r].size() != 2)
        fail(where + ".unitary", "expected 2 columns per row");
      for (int c = 0; c < 2; ++c) {
        const json& e = rows[r][c];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
          fail(where + ".unitary", "expected [re, im] pairs");
        t.unitary(r, c) = {e[0].get<double>(), e[1].get<double>()};
      }
    }
  }
  try {
    t.bloch = unitary_to_bloch_operator(t.unitary);
  } catch (const std::invalid_argument& e) {
    fail(where, e.what());
  }
  return t;
}

std::optional<PerturbationSpec> parse_perturbation(const json& j,
                                                   const std::string& where) {
  check_keys(j, {"axis", "lambda"}, where);
  PerturbationSpec p;
  try {
    p.axis = axis_from_string(require_string(j, "axis", where));
  } catch (const std::invalid_argument& e) {
    fail(where + ".axis", e.what());
  }
  p.lambda = require_number(j, "lambda", where);
  return p;
}

RobustnessConfig parse_robustness(const json& j, const std::string& where) {
  check_keys(j, {"axes", "lambda_min", "lambda_max", "points", "parallel"}, where);
  RobustnessConfig r;
  if (j.contains("axes")) {
    const json& axes = j["axes"];
    if (!axes.is_array() || axes.empty())
      fail(where + ".axes", "expected a non-empty array");
    r.axes.clear();
    for (const auto& a : axes) {
      if (!a.is_string()) fail(where + ".axes", "expected axis names");
      try {
        r.axes.push_back(axis_from_string(a.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        fail(where + ".axes", e.what());
      }
    }
  }
  r.lambda_min = get_number(j, "lambda_min", r.lambda_min, where);
  r.lambda_max = get_number(j, "lambda_max", r.lambda_max, where);
  r.points = get_index(j, "points", r.points, where);
  if (r.points < 1) fail(where + ".points", "must be >= 1");
  if (!(r.lambda_min <= r.lambda_max))
    fail(where, "lambda_min must be <= lambda_max");
  if (j.contains("parallel")) {
    if (!j["parallel"].is_boolean()) fail(where + ".parallel", "expected a boolean");
    r.policy = j["parallel"].get<bool>() ? ExecPolicy::Parallel : ExecPolicy::Serial;
  }
  return r;
}

std::vector<ModelKind> parse_free_kinds(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a non-empty array of model kinds");
  std::vector<ModelKind> kinds;
  for (const auto& k : j) {
    if (!k.is_string()) fail(where, "expected model-kind names");
    try {
      kinds.push_back(model_kind_from_string(k.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      fail(where, e.what());
    }
  }
  return kinds;
}

json bath_json(const BathParams& p) {
  json j;
  j["alpha_sq"] = p.alpha_sq;
  j["kT"] = p.kT;
  j["beta"] = p.beta;
  j["omega0"] = p.omega0;
  if (p.sine_divisor) j["sine_divisor"] = *p.sine_divisor;
  return j;
}

json law_json(const LawConfig& lc) {
  const ControlLaw& law = lc.law;
  json j;
  j["family"] = to_string(law.family);
  j["label"] = lc.label;
  j["k_y"] = law.k_y;
  j["k_z"] = law.k_z;
  j["k_nx"] = law.k_nx;
  j["k_ny"] = law.k_ny;
  j["k_nz"] = law.k_nz;
  j["h_nx"] = law.h_nx;
  j["h_ny"] = law.h_ny;
  j["h_nz"] = law.h_nz;
  j["k_yx"] = law.k_yx;
  j["k_yz"] = law.k_yz;
  j["f_max"] = law.f_max;
  j["eps_den"] = law.eps_den;
  j["kick"] = {law.kick[0], law.kick[1], law.kick[2]};
  j["kick_steps"] = law.kick_steps;
  json sw;
  sw["kind"] = law.switch_rule.kind == SwitchKind::FixedTime ? "fixed_time" : "local_min";
  sw["threshold"] = law.switch_rule.threshold;
  sw["time"] = law.switch_rule.time;
  j["switch"] = sw;
  return j;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Run: return "run";
    case ExperimentKind::Compare: return "compare";
    case ExperimentKind::FreeEvolution: return "free_evolution";
    case ExperimentKind::Robustness: return "robustness";
  }
  return "?";
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j,
             {"experiment", "model", "law", "laws", "sim", "target", "perturbation",
              "free_evolution", "robustness", "output"},
             "top level");
  ExperimentConfig cfg;

  const std::string kind = require_string(j, "experiment", "top level");
  if (kind == "run")
    cfg.experiment = ExperimentKind::Run;
  else if (kind == "compare")
    cfg.experiment = ExperimentKind::Compare;
  else if (kind == "free_evolution" || kind == "free-evolution")
    cfg.experiment = ExperimentKind::FreeEvolution;
  else if (kind == "robustness")
    cfg.experiment = ExperimentKind::Robustness;
  else
    fail("top level.experiment", "unknown experiment '" + kind + "'");

  if (j.contains("sim")) cfg.sim = parse_sim(j["sim"], "sim");
  if (j.contains("output")) {
    check_keys(j["output"], {"directory"}, "output");
    if (j["output"].contains("directory"))
      cfg.output.directory = require_string(j["output"], "directory", "output");
  }

  const bool needs_model = cfg.experiment != ExperimentKind::FreeEvolution;
  const bool needs_target = cfg.experiment != ExperimentKind::FreeEvolution;

  if (needs_model) {
    if (!j.contains("model")) fail("top level", "missing 'model' block");
    cfg.model = parse_model(j["model"], "model");
  } else if (j.contains("model")) {
    cfg.model = parse_model(j["model"], "model");
  }

  if (needs_target) {
    if (!j.contains("target")) fail("top level", "missing 'target' block");
    cfg.target = parse_target(j["target"], "target");
  }

  if (j.contains("law") && j.contains("laws"))
    fail("top level", "give either 'law' or 'laws', not both");
  if (j.contains("law")) cfg.laws.push_back(parse_law(j["law"], "law"));
  if (j.contains("laws")) {
    const json& laws = j["laws"];
    if (!laws.is_array() || laws.empty())
      fail("laws", "expected a non-empty array of law blocks");
    for (std::size_t i = 0; i < laws.size(); ++i)
      cfg.laws.push_back(parse_law(laws[i], "laws[" + std::to_string(i) + "]"));
  }

  switch (cfg.experiment) {
    case ExperimentKind::Run:
    case ExperimentKind::Robustness:
      if (cfg.laws.size() != 1)
        fail("top level", "expected exactly one law for this experiment");
      break;
    case ExperimentKind::Compare:
      if (cfg.laws.size() < 2) fail("laws", "compare needs at least two law blocks");
      break;
    case ExperimentKind::FreeEvolution:
      if (!cfg.laws.empty()) fail("top level", "free evolution takes no law block");
      break;
  }

  if (j.contains("perturbation")) {
    if (cfg.experiment != ExperimentKind::Run && cfg.experiment != ExperimentKind::Compare)
      fail("perturbation", "only valid for run and compare");
    cfg.perturbation = parse_perturbation(j["perturbation"], "perturbation");
  }

  if (cfg.experiment == ExperimentKind::FreeEvolution) {
    if (!j.contains("free_evolution")) fail("top level", "missing 'free_evolution' block");
    check_keys(j["free_evolution"], {"kinds"}, "free_evolution");
    if (!j["free_evolution"].contains("kinds"))
      fail("free_evolution.kinds", "missing");
    cfg.free_kinds = parse_free_kinds(j["free_evolution"]["kinds"], "free_evolution.kinds");
  }

  if (cfg.experiment == ExperimentKind::Robustness) {
    if (j.contains("robustness"))
      cfg.robustness = parse_robustness(j["robustness"], "robustness");
  }

  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config: " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::json resolved_json(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = to_string(cfg.experiment);

  if (cfg.experiment == ExperimentKind::FreeEvolution) {
    json kinds = json::array();
    for (ModelKind k : cfg.free_kinds) kinds.push_back(to_string(k));
    j["free_evolution"]["kinds"] = kinds;
    json model;
    model["gamma"] = cfg.model.gamma;
    model["bath"] = bath_json(cfg.model.bath);
    j["model"] = model;
  } else {
    json model;
    model["kind"] = to_string(cfg.model.kind);
    model["gamma"] = cfg.model.gamma;
    model["bath"] = bath_json(cfg.model.bath);
    j["model"] = model;

    // emitted in the schema parse_config reads back, so the echo is loadable
    json target;
    if (cfg.target.name == "custom") {
      json rows = json::array();
      for (int r = 0; r < 2; ++r) {
        json row = json::array();
        for (int c = 0; c < 2; ++c)
          row.push_back({cfg.target.unitary(r, c).real(), cfg.target.unitary(r, c).imag()});
        rows.push_back(row);
      }
      target["unitary"] = rows;
    } else {
      target["gate"] = cfg.target.name;
    }
    j["target"] = target;
  }

  if (!cfg.laws.empty()) {
    json laws = json::array();
    for (const auto& lc : cfg.laws) laws.push_back(law_json(lc));
    j["laws"] = laws;
  }

  json sim;
  sim["dt"] = cfg.sim.dt;
  sim["t_end"] = cfg.sim.t_end;
  sim["record_stride"] = cfg.sim.record_stride;
  json rows = json::array();
  for (int r = 0; r < 3; ++r) {
    json row = json::array();
    for (int c = 0; c < 3; ++c) row.push_back(cfg.sim.u0(r, c));
    rows.push_back(row);
  }
  sim["u0"] = rows;
  j["sim"] = sim;

  if (cfg.perturbation) {
    j["perturbation"]["axis"] = to_string(cfg.perturbation->axis);
    j["perturbation"]["lambda"] = cfg.perturbation->lambda;
  }

  if (cfg.experiment == ExperimentKind::Robustness) {
    json rb;
    json axes = json::array();
    for (Axis a : cfg.robustness.axes) axes.push_back(to_string(a));
    rb["axes"] = axes;
    rb["lambda_min"] = cfg.robustness.lambda_min;
    rb["lambda_max"] = cfg.robustness.lambda_max;
    rb["points"] = cfg.robustness.points;
    rb["parallel"] = cfg.robustness.policy == ExecPolicy::Parallel;
    j["robustness"] = rb;
  }

  j["output"]["directory"] = cfg.output.directory;
  return j;
}

}  // namespace qlyap
