#pragma once

#include <string>
#include <vector>

#include "sielast/io.hpp"

namespace sielast {

/// Runs one scenario and writes <out>/series.csv (one row per step
/// including t = 0, columns step, t, E_total, E_kin, E_dev, E_press,
/// volume, volerr_L1, volerr_L2, volerr_Linf, schur_iters) plus
/// field_XXXX.vtk snapshots every `snapshot_stride` steps (none when 0).
/// Returns a nonzero status with a step report on stderr when the solver
/// fails or an element inverts.
int cmd_run(const RunConfig& config);

/// Runs the scenario at dt, dt/2, ..., over n_levels (>= 2), writes
/// <out>/convergence.csv with the self-convergence norms of U, V, p per
/// halving and <out>/orders.csv with the fitted orders.
int cmd_converge(const RunConfig& config, int n_levels);

struct StabilitySweepConfig {
  std::string scheme = "msbdf2";
  std::vector<double> lambdas = {100.0};
  std::vector<double> c_mults = {0.1, 0.5, 0.75, 1.0, 10.0, 100.0};
  double dt_min = 1e-4;
  double dt_max = 10.0;
  int dt_count = 200;
  std::string out_dir = "out";
};

/// Sweeps the amplification model and writes <out>/rho.csv
/// (lambda, c, dt, rho) and <out>/dtmax.csv (lambda, c, dt_max,
/// dt_max_bulk) tables.
int cmd_stability(const StabilitySweepConfig& config);

}  // namespace sielast
