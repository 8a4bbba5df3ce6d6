// bench_sweep.cpp — wall-time comparison of the serial reference sweep against
// the OpenMP path on a representative robustness workload.
//
//   bench_sweep [points] [t_end]
//
// Defaults: 41 points, t_end 1.0 (a soft run; pass 5.0 for the full horizon).
#include "qlyap/sweep.hpp"

#include <omp.h>

#include <cstdio>
#include <cstdlib>

int main(int argc, char** argv) {
  using namespace qlyap;

  const std::size_t points = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 41;
  const double t_end = argc > 2 ? std::strtod(argv[2], nullptr) : 1.0;

  const SystemModel model = make_model(ModelKind::PhaseDamping, 0.1);
  ControlLaw law;
  law.family = LawFamily::LawX;
  law.k_y = 400.0;
  law.k_z = 400.0;
  law.kick = Vec3(99.0, 20.0, 30.0);

  SimConfig cfg;
  cfg.t_end = t_end;
  cfg.record_stride = 10;

  const Mat3 target = unitary_to_bloch_operator(gate_not());
  const std::vector<double> grid = uniform_grid(-100.0, 100.0, points);

  std::printf("robustness sweep, axis x, %zu points, t_end = %g, dt = %g\n",
              grid.size(), cfg.t_end, cfg.dt);
  std::printf("max threads: %d\n", omp_get_max_threads());

  double t0 = omp_get_wtime();
  const RobustnessSweepResult serial =
      robustness_sweep_reference(model, law, target, cfg, Axis::X, grid);
  double t1 = omp_get_wtime();
  const double serial_s = t1 - t0;
  std::printf("serial reference: %.3f s\n", serial_s);

  t0 = omp_get_wtime();
  const RobustnessSweepResult parallel =
      robustness_sweep(model, law, target, cfg, Axis::X, grid, ExecPolicy::Parallel);
  t1 = omp_get_wtime();
  const double parallel_s = t1 - t0;
  std::printf("openmp:           %.3f s   (speedup %.2fx)\n", parallel_s,
              serial_s / parallel_s);

  // the two paths must agree bit for bit (diverged slots hold NaN, so compare
  // values only where the point completed)
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool mismatch =
        serial.ok[i] != parallel.ok[i] ||
        (serial.ok[i] &&
         (serial.d_min_per_lambda[i] != parallel.d_min_per_lambda[i] ||
          serial.f_max_per_lambda[i] != parallel.f_max_per_lambda[i]));
    if (mismatch) {
      std::printf("MISMATCH at lambda = %g\n", grid[i]);
      return 1;
    }
  }
  std::printf("serial and openmp results identical\n");
  return 0;
}
