#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "sielast/bench.hpp"
#include "sielast/fem.hpp"
#include "sielast/solvers.hpp"

namespace sielast {

/// How the two-step history is populated before the BDF2 loop starts.
/// SemiImplicitEuler takes one backward-Euler-in-pressure step of size dt;
/// ExtrapolatedHistory synthesizes U^{-1} = U^0 - dt V^0, V^{-1} = V^0.
enum class Startup { SemiImplicitEuler, ExtrapolatedHistory };

Startup startup_from_string(const std::string& name);

struct SchemeConfig {
  Scheme scheme = Scheme::FEBDF2;
  std::optional<double> dt;
  std::optional<double> cfl;  // dt = cfl * h_min / c_mu
  double t_end = 0.0;
  Startup startup = Startup::SemiImplicitEuler;

  /// Validates that exactly one of dt/cfl is set and resolves the step.
  double resolve_dt(double h_min, double c_mu) const;
};

/// Drives one scenario-independent stepping loop. The integrator owns no
/// state; a TimeState is advanced in place so independent simulations can
/// run concurrently.
class TimeIntegrator {
 public:
  TimeIntegrator(const Assembler& assembler, Loads loads, Scheme scheme,
                 SchurSolveOptions solver_options = {},
                 PrecondKind precond = PrecondKind::IncompleteCholesky);

  /// L2-projects W_J(J(U0)) onto the pressure space; zero (the minimal-norm
  /// multiplier) in the incompressible limit.
  Vec project_initial_pressure(const Vec& U0) const;

  /// Builds the history ring at t = 0 (ExtrapolatedHistory) or t = dt
  /// (SemiImplicitEuler, which performs one startup solve).
  TimeState initialize_history(const Vec& U0, const Vec& V0, double dt,
                               Startup startup) const;

  /// One MSBDF2/FEBDF2 step; advances the ring and t, returns the
  /// stage-1 solve report. Throws on inverted elements.
  SolveReport step(TimeState& state) const;

  const Assembler& assembler() const { return assembler_; }
  Scheme scheme() const { return scheme_; }

 private:
  SolveReport advance(TimeState& state, Stencil stencil,
                      const DisplacementUpdate& update) const;

  const Assembler& assembler_;
  Loads loads_;
  Scheme scheme_;
  SchurSolveOptions solver_options_;
  PrecondKind precond_;
};

/// Per-step observer payload; step 0 carries the initial state and a null
/// report.
struct StepEvent {
  int step = 0;
  const TimeState& state;
  const SolveReport* pressure_report = nullptr;
};
using Observer = std::function<void(const StepEvent&)>;

/// Everything needed to run one scenario at one resolution.
struct SimulationSetup {
  MixedMesh mesh;
  DofMap dofmap;
  MaterialParams params;
  Loads loads;
  Vec U0, V0;
  double dt = 0.0;
  int n_steps = 0;
  Scheme scheme = Scheme::FEBDF2;
  Startup startup = Startup::SemiImplicitEuler;
};

/// Builds mesh, dof map, material, loads, and initial fields for a
/// scenario; refinement overrides the scenario default when given.
SimulationSetup prepare_simulation(
    const Scenario& scenario, const SchemeConfig& config,
    const std::optional<GridRefinement>& refinement = std::nullopt);

/// Steps to t_end = n_steps * dt, invoking the observer after every step
/// (and once for the initial state). Deterministic for a fixed setup.
/// Returns the final state. Solver failure or element inversion aborts
/// with a NumericError naming the step.
TimeState run_simulation(const SimulationSetup& setup,
                         const SchurSolveOptions& solver_options = {},
                         const AssemblyOptions& assembly_options = {},
                         const Observer& observer = {},
                         PrecondKind precond = PrecondKind::IncompleteCholesky);

/// Nodal interpolation of an analytic field onto the Q2 velocity dofs.
Vec interpolate_q2(const MixedMesh& mesh, const DofMap& dofmap,
                   const std::function<Vec3(const Vec3&)>& field);

/// Scalar split model y' = f(y,t) + h(y,t) g(y,t): f and g non-stiff,
/// h stiff and treated implicitly via the same linearization the PDE
/// schemes apply to the pressure.
struct ScalarSplitModel {
  std::function<double(double, double)> f;
  std::function<double(double, double)> h;
  std::function<double(double, double)> h_y;  // dh/dy
  std::function<double(double, double)> g;
};

struct ProbeResult {
  std::vector<double> dt;
  std::vector<double> error;  // |y_N - y_ref| at t_end
  std::vector<double> order;  // log2 ratios between consecutive dt halvings
};

/// Applies the scheme's stencil to the scalar model over each dt in
/// dt_list (t_end/dt must be a whole number of steps) against a tiny-step
/// RK4 reference. With extrapolate_g off, g lags at t^n — the cofactor
/// analog of dropping the H-bar extrapolation — and both schemes drop to
/// first order.
ProbeResult scalar_imex_order_probe(Scheme scheme, const ScalarSplitModel& m,
                                    double y0, double t_end,
                                    const std::vector<double>& dt_list,
                                    bool extrapolate_g = true);

}  // namespace sielast
