#include "sielast/integrators.hpp"

#include <cmath>

namespace sielast {

Startup startup_from_string(const std::string& name) {
  if (name == "semi_implicit_euler") return Startup::SemiImplicitEuler;
  if (name == "extrapolated_history") return Startup::ExtrapolatedHistory;
  throw ConfigError("unknown startup mode: " + name);
}

double SchemeConfig::resolve_dt(double h_min, double c_mu) const {
  if (dt.has_value() == cfl.has_value()) {
    throw ConfigError("exactly one of dt or cfl must be set");
  }
  if (dt) {
    if (!(*dt > 0.0)) throw ConfigError("dt must be positive");
    return *dt;
  }
  if (!(*cfl > 0.0)) throw ConfigError("cfl must be positive");
  return *cfl * h_min / c_mu;
}

TimeIntegrator::TimeIntegrator(const Assembler& assembler, Loads loads,
                               Scheme scheme, SchurSolveOptions solver_options,
                               PrecondKind precond)
    : assembler_(assembler),
      loads_(std::move(loads)),
      scheme_(scheme),
      solver_options_(solver_options),
      precond_(precond) {}

Vec TimeIntegrator::project_initial_pressure(const Vec& U0) const {
  const auto& dofmap = assembler_.dofmap();
  const auto& params = assembler_.params();
  if (params.incompressible()) {
    return Vec::Zero(dofmap.n_pressure_dofs);
  }
  const auto& mesh = assembler_.mesh();
  const auto& cache = assembler_.cache();
  const CellRule& rule = cache.rule();
  const int dim = mesh.dim;
  const int nen = q2_nodes_per_cell(dim);
  const int npn = q1_nodes_per_cell(dim);

  std::vector<Triplet> trip;
  Vec rhs = Vec::Zero(dofmap.n_pressure_dofs);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& pdofs = dofmap.cell_pdofs[c];
    for (int q = 0; q < rule.nq; ++q) {
      const double w = cache.jxw(c, q);
      const auto& M = rule.q1_val[q];
      Mat3 G = Mat3::Zero();
      for (int a = 0; a < nen; ++a) {
        const Vec3& g = cache.grad_q2(c, q, a);
        for (int k = 0; k < dim; ++k)
          G.row(k) += U0[dofmap.cell_vdofs[c][a * dim + k]] * g.transpose();
      }
      const double J = dim == 2
                           ? kinematics<2>(G.topLeftCorner<2, 2>()).J
                           : kinematics<3>(G).J;
      if (!(J > 0.0)) throw InvertedElementError(c, J);
      const double wj =
          volumetric_derivatives(J, params.kappa, params.vol_model).W_J;
      for (int b = 0; b < npn; ++b) {
        rhs[pdofs[b]] += w * M[b] * wj;
        for (int b2 = 0; b2 < npn; ++b2)
          trip.emplace_back(pdofs[b], pdofs[b2], w * M[b] * M[b2]);
      }
    }
  }
  SpMat mass(dofmap.n_pressure_dofs, dofmap.n_pressure_dofs);
  mass.setFromTriplets(trip.begin(), trip.end());
  LinOp op = [&](const Vec& x, Vec& y) { y = mass * x; };
  auto [p0, rep] = pcg(op, rhs, mass.diagonal(), 1e-13, 1000);
  if (!rep.converged) {
    throw NumericError("initial pressure projection did not converge");
  }
  return p0;
}

SolveReport TimeIntegrator::advance(TimeState& state, Stencil stencil,
                                    const DisplacementUpdate& update) const {
  const BlockSystem sys = assembler_.assemble(state, stencil, loads_);
  const SpMat P = assembler_.assemble_schur_preconditioner(state, stencil);
  const auto precond = make_schur_preconditioner(P, precond_);
  SchurUpdateResult res =
      schur_update(sys, *precond, solver_options_, state, update);

  state.U_nm1 = std::move(state.U_n);
  state.U_n = std::move(res.U);
  state.V_nm1 = std::move(state.V_n);
  state.V_n = std::move(res.V);
  state.p_n = std::move(res.p);
  state.t += state.dt;
  return res.pressure_report;
}

TimeState TimeIntegrator::initialize_history(const Vec& U0, const Vec& V0,
                                             double dt,
                                             Startup startup) const {
  const auto& dofmap = assembler_.dofmap();
  if (U0.size() != dofmap.n_velocity_dofs ||
      V0.size() != dofmap.n_velocity_dofs) {
    throw ConfigError("initial fields are not sized to the dof map");
  }
  TimeState state;
  state.dt = dt;
  state.t = 0.0;
  state.U_n = U0;
  state.V_n = V0;
  state.p_n = project_initial_pressure(U0);
  switch (startup) {
    case Startup::ExtrapolatedHistory:
      state.U_nm1 = U0 - dt * V0;
      state.V_nm1 = V0;
      break;
    case Startup::SemiImplicitEuler: {
      state.U_nm1 = U0;
      state.V_nm1 = V0;
      // one backward-Euler-in-pressure, explicit-deviatoric step:
      // U^1 = U^0 + dt V^1
      SolveReport rep = advance(state, Stencil::BackwardEulerStart,
                                DisplacementUpdate{1.0, 0.0, 1.0});
      if (!rep.converged) {
        throw NumericError("startup pressure solve failed: " + rep.note);
      }
      break;
    }
  }
  return state;
}

SolveReport TimeIntegrator::step(TimeState& state) const {
  return advance(state, stencil_of(scheme_), DisplacementUpdate{});
}

Vec interpolate_q2(const MixedMesh& mesh, const DofMap& dofmap,
                   const std::function<Vec3(const Vec3&)>& field) {
  Vec out = Vec::Zero(dofmap.n_velocity_dofs);
  if (!field) return out;
  for (int n = 0; n < mesh.n_q2(); ++n) {
    const Vec3 v = field(mesh.nodes[n]);
    for (int k = 0; k < mesh.dim; ++k) out[n * mesh.dim + k] = v[k];
  }
  return out;
}

SimulationSetup prepare_simulation(
    const Scenario& scenario, const SchemeConfig& config,
    const std::optional<GridRefinement>& refinement) {
  SimulationSetup setup;
  setup.mesh = generate_mesh(scenario.geometry,
                             refinement.value_or(scenario.refinement));
  setup.dofmap = taylor_hood_dofmap(setup.mesh);
  setup.params = scenario.material();
  setup.loads = scenario.loads;
  setup.scheme = config.scheme;
  setup.startup = config.startup;

  const double c_mu = wave_speeds(setup.params).c_mu;
  setup.dt = config.resolve_dt(setup.mesh.h_min, c_mu);
  const double t_end = config.t_end > 0.0 ? config.t_end : scenario.t_end;
  if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
  setup.n_steps = std::max(1, static_cast<int>(std::llround(t_end / setup.dt)));

  setup.U0 = Vec::Zero(setup.dofmap.n_velocity_dofs);
  setup.V0 = interpolate_q2(setup.mesh, setup.dofmap,
                            scenario.initial_velocity);
  // honor Dirichlet data at t = 0
  for (int i = 0; i < setup.dofmap.n_velocity_dofs; ++i) {
    if (setup.dofmap.is_constrained(i)) {
      setup.V0[i] = setup.dofmap.constrained_value[i];
    }
  }
  return setup;
}

TimeState run_simulation(const SimulationSetup& setup,
                         const SchurSolveOptions& solver_options,
                         const AssemblyOptions& assembly_options,
                         const Observer& observer, PrecondKind precond) {
  Assembler assembler(setup.mesh, setup.dofmap, setup.params,
                      assembly_options);
  TimeIntegrator integrator(assembler, setup.loads, setup.scheme,
                            solver_options, precond);

  // initial state event (before any startup advance)
  {
    TimeState initial;
    initial.dt = setup.dt;
    initial.U_n = setup.U0;
    initial.U_nm1 = setup.U0;
    initial.V_n = setup.V0;
    initial.V_nm1 = setup.V0;
    initial.p_n = integrator.project_initial_pressure(setup.U0);
    if (observer) observer(StepEvent{0, initial, nullptr});
  }

  TimeState state;
  int done = 0;
  try {
    state = integrator.initialize_history(setup.U0, setup.V0, setup.dt,
                                          setup.startup);
    if (setup.startup == Startup::SemiImplicitEuler) {
      done = 1;
      if (observer) observer(StepEvent{1, state, nullptr});
    }
    for (; done < setup.n_steps; ) {
      SolveReport rep = integrator.step(state);
      ++done;
      if (!rep.converged) {
        throw NumericError("Schur solve failed at step " +
                           std::to_string(done) + " (t = " +
                           std::to_string(state.t) + "): " + rep.note);
      }
      if (observer) observer(StepEvent{done, state, &rep});
    }
  } catch (const InvertedElementError& e) {
    throw NumericError("aborted at step " + std::to_string(done + 1) +
                       " (t = " + std::to_string((done + 1) * setup.dt) +
                       "): " + e.what());
  }
  return state;
}

namespace {

double rk4_reference(const ScalarSplitModel& m, double y0, double t0,
                     double t1, int n) {
  auto rhs = [&](double y, double t) {
    return m.f(y, t) + m.h(y, t) * m.g(y, t);
  };
  double y = y0, t = t0;
  const double dt = (t1 - t0) / n;
  for (int i = 0; i < n; ++i) {
    const double k1 = rhs(y, t);
    const double k2 = rhs(y + 0.5 * dt * k1, t + 0.5 * dt);
    const double k3 = rhs(y + 0.5 * dt * k2, t + 0.5 * dt);
    const double k4 = rhs(y + dt * k3, t + dt);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t += dt;
  }
  return y;
}

}  // namespace

ProbeResult scalar_imex_order_probe(Scheme scheme, const ScalarSplitModel& m,
                                    double y0, double t_end,
                                    const std::vector<double>& dt_list,
                                    bool extrapolate_g) {
  ProbeResult out;
  const double y_ref = rk4_reference(m, y0, 0.0, t_end, 200000);
  auto rhs = [&](double y, double t) {
    return m.f(y, t) + m.h(y, t) * m.g(y, t);
  };

  for (double dt : dt_list) {
    const int n_steps = static_cast<int>(std::llround(t_end / dt));
    if (n_steps < 2 || std::abs(n_steps * dt - t_end) > 1e-12 * t_end) {
      throw ConfigError("t_end must be a whole number (>= 2) of probe steps");
    }
    double y_nm1 = y0;
    double y_n = rk4_reference(m, y0, 0.0, dt, 100);  // clean first step
    double t_n = dt;
    for (int n = 1; n < n_steps; ++n) {
      const double t_np1 = t_n + dt;
      double f_tilde, g_tilde;
      if (scheme == Scheme::MSBDF2) {
        f_tilde = 2.0 * m.f(y_n, t_n) - m.f(y_nm1, t_n - dt);
        g_tilde = extrapolate_g
                      ? 2.0 * m.g(y_n, t_n) - m.g(y_nm1, t_n - dt)
                      : m.g(y_n, t_n);
      } else {
        const double y_star = y_n + dt * rhs(y_n, t_n);
        f_tilde = m.f(y_star, t_np1);
        g_tilde = extrapolate_g ? m.g(y_star, t_np1) : m.g(y_n, t_n);
      }
      // (3y+ - 4y^n + y^{n-1})/(2dt) = f~ + [h(y^n) + h_y(y^n)(y+ - y^n)] g~
      const double hy = m.h_y(y_n, t_n);
      const double a = 1.5 / dt - hy * g_tilde;
      const double b = (4.0 * y_n - y_nm1) / (2.0 * dt) + f_tilde +
                       (m.h(y_n, t_n) - hy * y_n) * g_tilde;
      const double y_np1 = b / a;
      y_nm1 = y_n;
      y_n = y_np1;
      t_n = t_np1;
    }
    out.dt.push_back(dt);
    out.error.push_back(std::abs(y_n - y_ref));
  }
  for (size_t i = 0; i + 1 < out.error.size(); ++i) {
    out.order.push_back(std::log2(out.error[i] / out.error[i + 1]));
  }
  return out;
}

}  // namespace sielast
