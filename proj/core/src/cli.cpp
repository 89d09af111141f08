#include "sielast/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>

#include "sielast/bench.hpp"
#include "sielast/diagnostics.hpp"
#include "sielast/integrators.hpp"
#include "sielast/stability.hpp"

namespace sielast {

namespace {

VolModel vol_model_from_string(const std::string& name) {
  if (name == "quadratic") return VolModel::Quadratic;
  if (name == "liu") return VolModel::Liu;
  throw ConfigError("unknown volumetric model: " + name);
}

struct ResolvedRun {
  Scenario scenario;
  SchemeConfig scheme_config;
  SchurSolveOptions solver;
  AssemblyOptions assembly;
  PrecondKind precond;
  std::optional<GridRefinement> refinement;
};

ResolvedRun resolve(const RunConfig& config) {
  ResolvedRun r;
  r.scenario = make_scenario(scenario_from_string(config.scenario), config.nu,
                             vol_model_from_string(config.vol_model));
  if (config.kappa_scale) r.scenario.kappa_scale = *config.kappa_scale;
  if (!config.refine.empty()) r.refinement = parse_refinement(config.refine);

  r.scheme_config.scheme = scheme_from_string(config.scheme);
  r.scheme_config.dt = config.dt;
  r.scheme_config.cfl = config.cfl;
  if (!config.dt && !config.cfl) {
    if (r.scheme_config.scheme == Scheme::FEBDF2) {
      r.scheme_config.cfl = 0.5;  // the scheme's validated default
    } else {
      throw ConfigError(
          "MSBDF2 has no safe CFL bound; set an explicit dt for msbdf2 runs");
    }
  }
  r.scheme_config.t_end =
      config.t_end.value_or(r.scenario.t_end);
  r.scheme_config.startup = startup_from_string(config.startup);

  r.solver.tol = config.solver_tol;
  r.solver.maxit = config.solver_maxit;
  r.solver.restart = config.solver_restart;
  r.precond = precond_from_string(config.precond);
  r.assembly.paper_literal_blocks = config.paper_literal_blocks;
  r.assembly.threads = config.deterministic ? 1 : config.threads;
  return r;
}

std::string snapshot_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "field_%04d.vtk", index);
  return buf;
}

}  // namespace

int cmd_run(const RunConfig& config) {
  try {
    const ResolvedRun r = resolve(config);
    const SimulationSetup setup =
        prepare_simulation(r.scenario, r.scheme_config, r.refinement);
    std::filesystem::create_directories(config.out_dir);

    FieldDiagnostics diag(setup.mesh, setup.dofmap);
    CsvWriter series(config.out_dir + "/series.csv",
                     {"step", "t", "E_total", "E_kin", "E_dev", "E_press",
                      "volume", "volerr_L1", "volerr_L2", "volerr_Linf",
                      "schur_iters"});
    int snapshot_index = 0;

    Observer observer = [&](const StepEvent& ev) {
      const DiagnosticRecord rec = diag.evaluate(ev.state, setup.params);
      series.write_row({static_cast<double>(ev.step), ev.state.t,
                        rec.energy_total, rec.energy_kinetic,
                        rec.energy_deviatoric, rec.energy_pressure, rec.volume,
                        rec.vol_err_L1, rec.vol_err_L2, rec.vol_err_Linf,
                        static_cast<double>(
                            ev.pressure_report ? ev.pressure_report->iterations
                                               : 0)});
      if (config.snapshot_stride > 0 &&
          ev.step % config.snapshot_stride == 0) {
        write_vtk(config.out_dir + "/" + snapshot_name(snapshot_index++),
                  setup.mesh, ev.state.U_n, ev.state.V_n, ev.state.p_n,
                  diag.cell_min_jacobian(ev.state.U_n));
      }
    };

    run_simulation(setup, r.solver, r.assembly, observer, r.precond);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "run failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_converge(const RunConfig& config, int n_levels) {
  try {
    if (n_levels < 2) {
      throw ConfigError("converge needs at least 2 levels");
    }
    const ResolvedRun r = resolve(config);

    std::vector<TimeState> finals;
    std::optional<SimulationSetup> setup;
    for (int level = 0; level < n_levels; ++level) {
      SchemeConfig sc = r.scheme_config;
      const double base_dt =
          sc.dt ? *sc.dt
                : prepare_simulation(r.scenario, sc, r.refinement).dt;
      sc.cfl.reset();
      sc.dt = base_dt / static_cast<double>(1 << level);
      SimulationSetup s = prepare_simulation(r.scenario, sc, r.refinement);
      finals.push_back(run_simulation(s, r.solver, r.assembly, {}, r.precond));
      if (!setup) setup = std::move(s);
    }

    std::filesystem::create_directories(config.out_dir);
    FieldDiagnostics diag(setup->mesh, setup->dofmap);
    CsvWriter conv(config.out_dir + "/convergence.csv",
                   {"level", "dt_coarse", "dt_fine", "eps_U_L1", "eps_U_L2",
                    "eps_U_Linf", "eps_V_L1", "eps_V_L2", "eps_V_Linf",
                    "eps_p_L1", "eps_p_L2", "eps_p_Linf"});
    std::vector<double> u2, v2, p2;
    for (int level = 0; level + 1 < n_levels; ++level) {
      const Norms eu = self_convergence(diag, finals[level].U_n,
                                        finals[level + 1].U_n, false);
      const Norms ev = self_convergence(diag, finals[level].V_n,
                                        finals[level + 1].V_n, false);
      const Norms ep = self_convergence(diag, finals[level].p_n,
                                        finals[level + 1].p_n, true);
      conv.write_row({static_cast<double>(level), finals[level].dt,
                      finals[level + 1].dt, eu.l1, eu.l2, eu.linf, ev.l1,
                      ev.l2, ev.linf, ep.l1, ep.l2, ep.linf});
      u2.push_back(eu.l2);
      v2.push_back(ev.l2);
      p2.push_back(ep.l2);
    }

    CsvWriter orders(config.out_dir + "/orders.csv",
                     {"field", "norm", "fitted_order"});
    auto emit = [&](const char* field, const std::vector<double>& eps) {
      const double order = eps.size() >= 2 ? fitted_order(eps) : 0.0;
      orders.write_row(std::vector<std::string>{
          field, "L2", CsvWriter::format(order)});
      std::cout << field << " L2 fitted order: " << order << "\n";
    };
    emit("U", u2);
    emit("V", v2);
    emit("p", p2);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "converge failed: " << e.what() << "\n";
    return 1;
  }
}

int cmd_stability(const StabilitySweepConfig& config) {
  try {
    const Scheme scheme = scheme_from_string(config.scheme);
    std::filesystem::create_directories(config.out_dir);

    std::vector<double> dts;
    for (int i = 0; i < config.dt_count; ++i) {
      const double f = config.dt_count == 1
                           ? 0.0
                           : static_cast<double>(i) / (config.dt_count - 1);
      dts.push_back(config.dt_min *
                    std::pow(config.dt_max / config.dt_min, f));
    }
    const auto samples =
        sweep_spectral_radius(scheme, config.lambdas, config.c_mults, dts);
    CsvWriter rho(config.out_dir + "/rho.csv", {"lambda", "c", "dt", "rho"});
    for (const RhoSample& s : samples) {
      rho.write_row({s.lambda, s.c, s.dt, s.rho});
    }

    CsvWriter dtmax(config.out_dir + "/dtmax.csv",
                    {"lambda", "c", "dt_max", "dt_max_bulk"});
    for (double lambda : config.lambdas) {
      for (double mult : config.c_mults) {
        const double c = mult * lambda;
        const DtMaxResult single = max_stable_dt(scheme, lambda, c);
        const DtMaxResult bulk = max_stable_dt_bulk_bound(scheme, lambda, c);
        dtmax.write_row({lambda, c,
                         single.unconditionally_unstable ? 0.0 : single.dt_max,
                         bulk.unconditionally_unstable ? 0.0 : bulk.dt_max});
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "stability failed: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace sielast
