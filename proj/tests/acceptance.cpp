// acceptance.cpp — the release gate.  Six end-to-end checks, one PASS/FAIL
// line each with the measured numbers and timing; exit code is the number of
// failed checks.  Informational lines ([info]) are not gated.
//
//   1  algebraic oracles      V identities, directional derivative, gate map,
//                             dissipator spectrum — against independent oracles
//   2  integrator accuracy    RK4 order, closed-model orthogonality, diagonal
//                             channels against exact exponentials
//   3  Lyapunov descent       V non-increasing at every unguarded feedback step
//                             for the three pure families on both channels
//   4  preparation targets    the shipped table configs reach D < 1e-4 with
//                             gate fidelity > 0.99 on every model kind
//   5  figure surfaces        purity shapes, law orderings, robustness-sweep
//                             orderings for the configs under configs/
//   6  determinism            byte-identical artifacts on repeat runs, and the
//                             parallel sweep bit-identical to the serial path

#include "support.hpp"

#include "qlyap/cli.hpp"
#include "qlyap/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace qlyap;
using qlyap::testing::TinyRng;
namespace fs = std::filesystem;

namespace {

const fs::path kConfigDir = QLYAP_CONFIG_DIR;

std::vector<std::string> g_info;

std::string fmt(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------- criterion 1

bool criterion1(std::string& note) {
  TinyRng rng(0x51a7e5u);

  // (a) for orthogonal W, V collapses to traces of W:
  //     V = (13/4) V_dis + (3/2)(tr W^2 - tr W)
  double worst_id = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Mat3 w = testing::random_rotation(rng);
    if (i % 2 == 1) w.col(0) *= -1.0;  // reflections are orthogonal too
    const LyapunovContext ctx = compute_context(w, Mat3::Identity());
    const double rhs = 3.25 * ctx.v_dis + 1.5 * ((w * w).trace() - w.trace());
    worst_id = std::max(worst_id, std::abs(ctx.v - rhs) / (1.0 + std::abs(ctx.v)));
  }
  const bool ok_id = worst_id <= 1e-10;

  // (b) S(X) against a central finite difference of V along dU/dt = X U
  double worst_s = 0.0;
  for (int i = 0; i < 200; ++i) {
    Mat3 u = testing::random_rotation(rng);
    if (i % 3 == 0) u = u * Vec3(0.95, 0.9, 0.85).asDiagonal();  // dissipated state
    const Mat3 u_f = testing::random_rotation(rng);
    Mat3 x = rng.uniform(-2.0, 2.0) * bloch_ax() + rng.uniform(-2.0, 2.0) * bloch_ay() +
             rng.uniform(-2.0, 2.0) * bloch_az();
    x(0, 0) = rng.uniform(-0.5, 0.0);
    x(1, 1) = rng.uniform(-0.5, 0.0);
    x(2, 2) = rng.uniform(-0.5, 0.0);
    const LyapunovContext ctx = compute_context(u, u_f);
    const double pred = s_functional(ctx, u, x);
    const double fd = testing::fd_vdot(u, u_f, x, 1e-5);
    worst_s = std::max(worst_s, std::abs(pred - fd) / std::max(1.0, std::abs(fd)));
  }
  const bool ok_s = worst_s <= 1e-4;

  // (c) the 2x2 -> 3x3 gate map against R_ij = tr(sigma_i u sigma_j u+)/2
  //     coded here from scratch, plus global-phase invariance
  Mat2c sig[3];
  sig[0] << 0.0, 1.0, 1.0, 0.0;
  sig[1] << std::complex<double>(0, 0), std::complex<double>(0, -1),
      std::complex<double>(0, 1), std::complex<double>(0, 0);
  sig[2] << 1.0, 0.0, 0.0, -1.0;
  double worst_map = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Mat2c u = testing::random_unitary2(rng);
    Mat3 oracle;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        oracle(r, c) = 0.5 * (sig[r] * u * sig[c] * u.adjoint()).trace().real();
    const Mat3 img = unitary_to_bloch_operator(u);
    worst_map = std::max(worst_map, (img - oracle).cwiseAbs().maxCoeff());
    const Mat2c u_phase = std::polar(1.0, rng.uniform(0.0, 6.283185307)) * u;
    worst_map =
        std::max(worst_map, (unitary_to_bloch_operator(u_phase) - img).cwiseAbs().maxCoeff());
  }
  const bool ok_map = worst_map <= 1e-12;

  // (d) dissipator spectrum: for real symmetric PSD G with eigenvalues g_i,
  //     B = G - tr(G) I has eigenvalues g_i - tr(G)
  double worst_spec = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Mat3 r = testing::random_rotation(rng);
    Vec3 lam(rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0));
    const Mat3 gks = r.transpose() * lam.asDiagonal() * r;
    const Mat3 b = gks_to_b(gks.cast<std::complex<double>>());
    Eigen::SelfAdjointEigenSolver<Mat3> es(b);
    std::sort(lam.data(), lam.data() + 3);
    const Vec3 expected = lam.array() - lam.sum();
    worst_spec = std::max(worst_spec, (es.eigenvalues() - expected).cwiseAbs().maxCoeff());
  }
  const bool ok_spec = worst_spec <= 1e-10;

  note = "orthogonal-W identity max rel " + fmt(worst_id) + " (tol 1e-10); S vs FD max rel " +
         fmt(worst_s) + " (tol 1e-4); gate map max err " + fmt(worst_map) +
         " (tol 1e-12, phase-invariant); B spectrum max err " + fmt(worst_spec) + " (tol 1e-10)";
  return ok_id && ok_s && ok_map && ok_spec;
}

// ---------------------------------------------------------------- criterion 2

bool criterion2(std::string& note) {
  // (a) global RK4 order: error ratio under dt halving in [12, 20]
  const SystemModel pd = make_model(ModelKind::PhaseDamping, 0.05);
  const Mat3 g = 1.3 * bloch_ax() - 0.7 * bloch_ay() + 0.4 * bloch_az() + pd.b_template;
  const Mat3 exact = testing::expm(Mat3(0.5 * g));
  const auto err_with = [&](int n) {
    Mat3 u = Mat3::Identity();
    for (int i = 0; i < n; ++i) u = rk4_step(u, g, 0.5 / n);
    return (u - exact).cwiseAbs().maxCoeff();
  };
  const double ratio = err_with(50) / err_with(100);
  const bool ok_order = ratio >= 12.0 && ratio <= 20.0;

  // (b) closed-model closed loop stays orthogonal over a long horizon
  ControlLaw law;
  law.k_y = 1.0;
  law.k_z = 1.0;
  law.kick = Vec3(1.0, 0.5, 0.25);
  law.kick_steps = 100;
  SimConfig sc;
  sc.dt = 1e-4;
  sc.t_end = 5.0;
  sc.record_stride = 10;
  const Mat3 target = unitary_to_bloch_operator(gate_not());
  const Trajectory closed_run =
      run_closed_loop(make_model(ModelKind::Closed, 0.0), law, target, sc);
  double worst_orth = 0.0;
  for (const TrajectorySample& s : closed_run.samples)
    worst_orth = std::max(
        worst_orth, (s.u.transpose() * s.u - Mat3::Identity()).cwiseAbs().maxCoeff());
  const bool ok_orth = worst_orth <= 1e-8;

  // (c) diagonal channels against the exact exponentials
  double worst_diag = 0.0;
  for (const ModelKind kind : {ModelKind::PhaseDamping, ModelKind::AmplitudeDamping}) {
    SimConfig fc;
    fc.dt = 1e-4;
    fc.t_end = 5.0;
    fc.record_stride = 100;
    const Trajectory traj = run_free_evolution(make_model(kind, 0.1), fc);
    for (const TrajectorySample& s : traj.samples) {
      const double e1 = std::exp(-0.1 * s.t);
      const Vec3 d(e1, e1, kind == ModelKind::PhaseDamping ? 1.0 : e1 * e1);
      worst_diag = std::max(worst_diag, (s.u - Mat3(d.asDiagonal())).cwiseAbs().maxCoeff());
    }
  }
  const bool ok_diag = worst_diag <= 1e-10;

  note = "RK4 halving ratio " + fmt(ratio) + " (want [12,20]); orthogonality drift " +
         fmt(worst_orth) + " over t=5 (tol 1e-8); diagonal channels max err " + fmt(worst_diag) +
         " (tol 1e-10)";
  return ok_order && ok_orth && ok_diag;
}

// ---------------------------------------------------------------- criterion 3

struct DescentScenario {
  std::string name;
  SystemModel model;
  ControlLaw law;
  SimConfig sim;
  Mat3 target;
};

std::vector<DescentScenario> descent_scenarios() {
  std::vector<DescentScenario> out;
  const auto from_config = [&](const char* file, const char* name) {
    const ExperimentConfig cfg = load_config(kConfigDir / file);
    out.push_back({name, cfg.model, cfg.laws[0].law, cfg.sim, cfg.target.bloch});
  };
  from_config("table1_pd_lawx.json", "pd/law_x");
  from_config("table1_pd_distributed.json", "pd/distributed");
  from_config("table1_ad_lawx.json", "ad/law_x");
  from_config("table1_ad_distributed.json", "ad/distributed");
  // law_y rows: the fig5 settings, on each Markovian channel
  const ExperimentConfig fig5 = load_config(kConfigDir / "fig5_lawy_robustness.json");
  out.push_back({"pd/law_y", fig5.model, fig5.laws[0].law, fig5.sim, fig5.target.bloch});
  out.push_back({"ad/law_y", make_model(ModelKind::AmplitudeDamping, 0.1), fig5.laws[0].law,
                 fig5.sim, fig5.target.bloch});
  return out;
}

bool criterion3(std::string& note) {
  std::size_t violations = 0;
  std::size_t steps_checked = 0;
  double worst_rise = -1.0;
  std::string worst_at = "none";
  for (DescentScenario& sc : descent_scenarios()) {
    sc.sim.record_stride = 1;  // every step, so flags and V line up exactly
    const Trajectory traj = run_closed_loop(sc.model, sc.law, sc.target, sc.sim);
    for (std::size_t i = 0; i + 1 < traj.samples.size(); ++i) {
      // flags at sample i describe the control held over [t_i, t_{i+1})
      const TrajectorySample& a = traj.samples[i];
      if (a.kick || a.guarded[0] || a.guarded[1] || a.guarded[2]) continue;
      ++steps_checked;
      const double rise = traj.samples[i + 1].v - a.v;
      if (rise > worst_rise) {
        worst_rise = rise;
        worst_at = sc.name;
      }
      if (rise > 1e-9) ++violations;
    }
  }
  note = "6 scenarios, " + std::to_string(steps_checked) + " unguarded steps; worst dV " +
         fmt(worst_rise) + " at " + worst_at + "; " + std::to_string(violations) +
         " above the 1e-9 slack";
  return violations == 0 && steps_checked > 0;
}

// ---------------------------------------------------------------- criterion 4

bool criterion4(std::string& note) {
  struct Row {
    const char* file;
    const char* label;
  };
  const Row rows[] = {
      {"table1_pd_lawx.json", "pd/law_x"},
      {"table1_pd_distributed.json", "pd/distributed"},
      {"table1_ad_distributed.json", "ad/distributed"},
      {"table2_closed_lawx.json", "closed/law_x"},
      {"table2_nm_lawx.json", "nm/law_x"},
  };
  bool ok = true;
  std::ostringstream ss;
  for (const Row& row : rows) {
    const ExperimentConfig cfg = load_config(kConfigDir / row.file);
    const RunSummary s =
        summarize(run_closed_loop(cfg.model, cfg.laws[0].law, cfg.target.bloch, cfg.sim));
    const bool row_ok = s.d_min < 1e-4 && s.f_max > 0.99;
    ok = ok && row_ok;
    ss << row.label << " D=" << fmt(s.d_min) << " F=" << fmt(s.f_max)
       << (row_ok ? "" : " <-- FAIL") << "  ";
    if (s.d_min <= 1e-5)
      g_info.push_back(std::string("stretch D<=1e-5 met by ") + row.label +
                       " (D=" + fmt(s.d_min) + ")");
  }
  // law_x on amplitude damping has an intrinsic distance floor (the crawl along
  // the law's blind circle stalls against the drift); reported, not gated.
  const ExperimentConfig ad = load_config(kConfigDir / "table1_ad_lawx.json");
  const RunSummary s =
      summarize(run_closed_loop(ad.model, ad.laws[0].law, ad.target.bloch, ad.sim));
  g_info.push_back("ad/law_x floor: D_min=" + fmt(s.d_min) + " at t=" + fmt(s.t_at_d_min) +
                   " (intrinsic to the law on this channel; documented, not gated)");
  note = ss.str() + "(gate: D<1e-4 and F>0.99)";
  return ok;
}

// ---------------------------------------------------------------- criterion 5

bool criterion5(std::string& note) {
  std::ostringstream ss;
  bool ok = true;

  // fig1: free-evolution purity shapes
  {
    const ExperimentConfig cfg = load_config(kConfigDir / "fig1_free_evolution.json");
    bool shapes = true;
    double nm_final = 0.0;
    for (const ModelKind kind : cfg.free_kinds) {
      const SystemModel m = make_model(kind, cfg.model.gamma, cfg.model.bath);
      const Trajectory traj = run_free_evolution(m, cfg.sim);
      const auto& s = traj.samples;
      const double t_end = s.back().t;
      const double g = cfg.model.gamma;
      double max_rise = -1.0;
      double max_dev_from_3 = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        max_dev_from_3 = std::max(max_dev_from_3, std::abs(s[i].purity - 3.0));
        if (i > 0) max_rise = std::max(max_rise, s[i].purity - s[i - 1].purity);
      }
      switch (kind) {
        case ModelKind::Closed:
          shapes = shapes && max_dev_from_3 <= 1e-9;
          break;
        case ModelKind::PhaseDamping:
          shapes = shapes && max_rise <= 1e-12 &&
                   std::abs(s.back().purity - (1.0 + 2.0 * std::exp(-2.0 * g * t_end))) <= 1e-9;
          break;
        case ModelKind::AmplitudeDamping:
          shapes = shapes && max_rise <= 1e-12 &&
                   std::abs(s.back().purity - (2.0 * std::exp(-2.0 * g * t_end) +
                                               std::exp(-4.0 * g * t_end))) <= 1e-9;
          break;
        case ModelKind::NonMarkovian:
          // information backflow: purity dips, rises again, ends near 3
          nm_final = s.back().purity;
          shapes = shapes && max_rise > 1e-7 && max_dev_from_3 > 1e-3 && nm_final > 2.99;
          break;
        default:
          shapes = false;
      }
    }
    ok = ok && shapes;
    ss << "purity shapes " << (shapes ? "ok" : "FAIL") << " (nm final " << fmt(nm_final)
       << "); ";
  }

  // fig2: law ordering on both channels
  const auto compare_block = [&](const char* file, const char* tag) {
    const ExperimentConfig cfg = load_config(kConfigDir / file);
    std::map<std::string, RunSummary> by_label;
    for (const LawConfig& lc : cfg.laws)
      by_label[lc.label] =
          summarize(run_closed_loop(cfg.model, lc.law, cfg.target.bloch, cfg.sim));
    const RunSummary& lx = by_label.at("law_x");
    const RunSummary& di = by_label.at("distributed");
    const RunSummary& co = by_label.at("combined");
    const bool block_ok = di.d_min < lx.d_min && lx.preservation_peaks == 0 &&
                          co.preservation_peaks == 0 && co.d_min <= lx.d_min;
    ss << tag << " ordering " << (block_ok ? "ok" : "FAIL") << " (dist " << fmt(di.d_min)
       << " < law_x " << fmt(lx.d_min) << ", combined " << fmt(co.d_min) << ", peaks 0); ";
    return block_ok;
  };
  ok = compare_block("fig2_pd_compare.json", "pd") && ok;
  ok = compare_block("fig2_ad_compare.json", "ad") && ok;

  // fig4 / fig5: perturbation sweeps; mean distance worst along the blind axis
  const auto sweep_block = [&](const char* file) {
    const ExperimentConfig cfg = load_config(kConfigDir / file);
    const std::vector<double> grid =
        uniform_grid(cfg.robustness.lambda_min, cfg.robustness.lambda_max, cfg.robustness.points);
    std::map<Axis, RobustnessSweepResult> res;
    for (const Axis ax : cfg.robustness.axes)
      res[ax] = robustness_sweep(cfg.model, cfg.laws[0].law, cfg.target.bloch, cfg.sim, ax, grid,
                                 cfg.robustness.policy);
    return res;
  };
  {
    const auto res = sweep_block("fig4_lawx_robustness.json");
    double flat_dev = 0.0;
    for (const double d : res.at(Axis::I).d_min_per_lambda)
      flat_dev = std::max(flat_dev, std::abs(d - res.at(Axis::I).d_min_per_lambda[0]));
    const double mx = res.at(Axis::X).mean_d_min();
    const double my = res.at(Axis::Y).mean_d_min();
    const double mz = res.at(Axis::Z).mean_d_min();
    bool fig4_ok = flat_dev <= 1e-12 && mx <= my && mx <= mz;
    for (const auto& [ax, r] : res) fig4_ok = fig4_ok && r.failed_points() == 0;
    ok = ok && fig4_ok;
    ss << "law_x sweep " << (fig4_ok ? "ok" : "FAIL") << " (means x " << fmt(mx) << ", y "
       << fmt(my) << ", z " << fmt(mz) << ", identity flat to " << fmt(flat_dev) << "); ";
  }
  {
    const auto res = sweep_block("fig5_lawy_robustness.json");
    const double mx = res.at(Axis::X).mean_d_min();
    const double my = res.at(Axis::Y).mean_d_min();
    const double mz = res.at(Axis::Z).mean_d_min();
    bool fig5_ok = my <= mx && my <= mz;
    for (const auto& [ax, r] : res) fig5_ok = fig5_ok && r.failed_points() == 0;
    ok = ok && fig5_ok;
    ss << "law_y sweep " << (fig5_ok ? "ok" : "FAIL") << " (means x " << fmt(mx) << ", y "
       << fmt(my) << ", z " << fmt(mz) << ")";
  }

  note = ss.str();
  return ok;
}

// ---------------------------------------------------------------- criterion 6

bool criterion6(std::string& note) {
  std::random_device rd;
  const fs::path base = fs::temp_directory_path() / ("qlyap_acceptance_" + std::to_string(rd()));
  fs::create_directories(base);

  const fs::path cfg = kConfigDir / "table1_pd_distributed.json";
  const int rc1 = cli::run_command(ExperimentKind::Run, {cfg, base / "a"});
  const int rc2 = cli::run_command(ExperimentKind::Run, {cfg, base / "b"});
  const std::string traj_a = slurp(base / "a" / "trajectory.csv");
  const bool runs_ok = rc1 == cli::kExitOk && rc2 == cli::kExitOk;
  const bool csv_equal = !traj_a.empty() && traj_a == slurp(base / "b" / "trajectory.csv");
  const bool summary_equal =
      slurp(base / "a" / "summary.json") == slurp(base / "b" / "summary.json");

  std::error_code ec;
  fs::remove_all(base, ec);

  // the OpenMP sweep must be bit-identical to the serial reference, run to run
  ControlLaw law;
  law.k_y = 50.0;
  law.k_z = 50.0;
  law.kick = Vec3(9.0, 2.0, 3.0);
  law.kick_steps = 5;
  SimConfig sc;
  sc.dt = 1e-3;
  sc.t_end = 0.05;
  const SystemModel pd = make_model(ModelKind::PhaseDamping, 0.1);
  const Mat3 target = unitary_to_bloch_operator(gate_not());
  const std::vector<double> grid = uniform_grid(-50.0, 50.0, 7);
  const auto r1 = robustness_sweep(pd, law, target, sc, Axis::Y, grid, ExecPolicy::Parallel);
  const auto r2 = robustness_sweep(pd, law, target, sc, Axis::Y, grid, ExecPolicy::Parallel);
  const auto rs = robustness_sweep_reference(pd, law, target, sc, Axis::Y, grid);
  const auto bits_equal = [](const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
  };
  const bool sweep_equal = bits_equal(r1.d_min_per_lambda, r2.d_min_per_lambda) &&
                           bits_equal(r1.d_min_per_lambda, rs.d_min_per_lambda);

  note = std::string("repeat runs ") + (runs_ok ? "ok" : "FAIL") + "; trajectory.csv " +
         (csv_equal ? "byte-identical" : "DIFFERS") + "; summary.json " +
         (summary_equal ? "byte-identical" : "DIFFERS") + "; parallel sweep " +
         (sweep_equal ? "bit-identical to serial" : "DIFFERS");
  return runs_ok && csv_equal && summary_equal && sweep_equal;
}

}  // namespace

int main() {
  struct Row {
    int id;
    const char* name;
    bool (*fn)(std::string&);
  };
  const Row rows[] = {
      {1, "algebraic oracles", criterion1},   {2, "integrator accuracy", criterion2},
      {3, "Lyapunov descent", criterion3},    {4, "preparation targets", criterion4},
      {5, "figure surfaces", criterion5},     {6, "determinism", criterion6},
  };
  int failures = 0;
  for (const Row& row : rows) {
    const auto t0 = std::chrono::steady_clock::now();
    std::string note;
    bool ok = false;
    try {
      ok = row.fn(note);
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %d, %s (%.1f s): %s\n", ok ? "PASS" : "FAIL", row.id, row.name,
                secs, note.c_str());
    for (const std::string& line : g_info) std::printf("       [info] %s\n", line.c_str());
    g_info.clear();
    if (!ok) ++failures;
  }
  std::printf("acceptance: %d/6 criteria passed\n", 6 - failures);
  return failures;
}
