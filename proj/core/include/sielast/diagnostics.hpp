#pragma once

#include <array>
#include <vector>

#include "sielast/fem.hpp"
#include "sielast/material.hpp"
#include "sielast/mesh.hpp"

namespace sielast {

/// One row of the diagnostic time series.
struct DiagnosticRecord {
  double t = 0.0;
  double energy_total = 0.0;
  double energy_kinetic = 0.0;
  double energy_deviatoric = 0.0;
  double energy_pressure = 0.0;
  double volume = 0.0;
  double vol_err_L1 = 0.0;
  double vol_err_L2 = 0.0;
  double vol_err_Linf = 0.0;
};

/// L1/L2/Linf triple; Linf is taken over quadrature points.
struct Norms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Quadrature reductions over FE fields. All evaluations run serially in
/// cell order, so results are deterministic.
class FieldDiagnostics {
 public:
  FieldDiagnostics(const MixedMesh& mesh, const DofMap& dofmap);

  /// Energy E = int rho0/2 V.V + W_dev(F(U)) + 1/2 p (J(U)-1) dV plus
  /// volume and volumetric-error fields at state.t.
  DiagnosticRecord evaluate(const TimeState& state,
                            const MaterialParams& params) const;

  /// int_Omega0 J(U) dV.
  double total_volume(const Vec& U) const;

  /// Norms of J(U) - 1.
  Norms volumetric_error(const Vec& U) const;

  /// Norms of a Q2 vector field (pointwise Euclidean magnitude).
  Norms field_norms_velocity(const Vec& field) const;

  /// Norms of a Q1 scalar field.
  Norms field_norms_pressure(const Vec& field) const;

  /// Per-cell minimum of J(U) over quadrature points (VTK cell data).
  std::vector<double> cell_min_jacobian(const Vec& U) const;

  const QuadCache& cache() const { return cache_; }

 private:
  const MixedMesh& mesh_;
  const DofMap& dofmap_;
  QuadCache cache_;
};

/// Self-convergence error between runs at 2dt and dt on the same mesh and
/// horizon: the norms of y_coarse - y_fine. Throws ConfigError on
/// mismatched field sizes.
Norms self_convergence(const FieldDiagnostics& diag, const Vec& y_coarse,
                       const Vec& y_fine, bool pressure_space);

/// log2(eps_coarse / eps_fine) for one dt halving.
double convergence_order(double eps_coarse, double eps_fine);

/// Least-squares slope of log2(eps) against the halving level; the fitted
/// order across a whole refinement ladder.
double fitted_order(const std::vector<double>& eps);

}  // namespace sielast
