#pragma once

#include <functional>
#include <map>
#include <memory>
#include <utility>

#include "sielast/material.hpp"
#include "sielast/mesh.hpp"
#include "sielast/types.hpp"

namespace sielast {

/// The two semi-implicit integrators. Both advance (V, U, p) with the BDF2
/// stencil and an implicit linearized pressure; they differ in how the
/// deviatoric stress and cofactor are pushed to t^{n+1}: MSBDF2 evaluates
/// them at the Adams-Bashforth displacement 2U^n - U^{n-1}, FEBDF2 at the
/// forward-Euler stage U* = U^n + dt V^n.
enum class Scheme { MSBDF2, FEBDF2 };

Scheme scheme_from_string(const std::string& name);

/// Internal stencil selector: the two production schemes plus the single
/// backward-Euler-in-pressure step used to populate history at startup.
enum class Stencil { MSBDF2, FEBDF2, BackwardEulerStart };

inline Stencil stencil_of(Scheme s) {
  return s == Scheme::MSBDF2 ? Stencil::MSBDF2 : Stencil::FEBDF2;
}

/// Two-step history ring for the BDF2 schemes.
struct TimeState {
  Vec U_n, U_nm1;
  Vec V_n, V_nm1;
  Vec p_n;
  double t = 0.0;
  double dt = 0.0;
};

/// The four blocks and two residuals of the per-step linear system
///   [ M_V   M_Vp ] [ V^{n+1} ]   [ R_V ]
///   [ M_pV  M_p  ] [ p^{n+1} ] = [ R_p ]
/// together with the row-sum lumped diagonal of M_V.
struct BlockSystem {
  SpMat M_V;
  SpMat M_Vp;
  SpMat M_pV;
  SpMat M_p;
  Vec R_V;
  Vec R_p;
  Vec M_V_lumped;
};

/// Scenario load set: a Lagrangian body force B(X, t) and constant
/// reference tractions per boundary tag.
struct Loads {
  std::function<Vec3(const Vec3&, double)> body_force;  // may be empty
  std::map<Tag, Vec3> tractions;
};

struct AssemblyOptions {
  /// Reproduce the printed block coefficients: M_pV scaled by -dt/kappa
  /// instead of the BDF2-consistent -(2dt/3)/kappa, and no
  /// (U^n - U^{n-1})/3 correction in R_p.
  bool paper_literal_blocks = false;
  /// Element kernels are evaluated in parallel and scattered serially in
  /// cell order, so results are independent of the thread count.
  int threads = 1;
};

/// Row-sum mass lumping. Throws NumericError on a non-positive row sum
/// (an unsupported element type for lumping).
Vec lump_mass(const SpMat& M_V);

/// Assembles blocks, residuals, and the Schur preconditioner for one step.
/// Dirichlet velocity dofs are eliminated during scatter: identity rows in
/// M_V, zeroed coupling rows/columns, and R_V pinned to the prescribed
/// value.
class Assembler {
 public:
  Assembler(const MixedMesh& mesh, const DofMap& dofmap,
            const MaterialParams& params, AssemblyOptions options = {});

  /// Full system for one step of the given stencil; body force and
  /// traction are sampled at t_np1 = state.t + state.dt.
  BlockSystem assemble(const TimeState& state, Stencil stencil,
                       const Loads& loads) const;

  /// Matrices only (residuals untouched).
  BlockSystem assemble_blocks(const TimeState& state, Scheme scheme) const;

  /// Residuals only.
  std::pair<Vec, Vec> assemble_residuals(const TimeState& state, Scheme scheme,
                                         const Loads& loads) const;

  /// SPD Q1 preconditioner matrix: pressure mass over kappa plus the
  /// quadrature-local image of M_pV diag(M_V)^{-1} M_Vp.
  SpMat assemble_schur_preconditioner(const TimeState& state,
                                      Stencil stencil) const;

  const MixedMesh& mesh() const { return mesh_; }
  const DofMap& dofmap() const { return dofmap_; }
  const MaterialParams& params() const { return params_; }
  const QuadCache& cache() const { return *cache_; }
  const AssemblyOptions& options() const { return options_; }

 private:
  struct CellWork;  // per-cell dense blocks, scattered serially

  void cell_kernel(int cell, const TimeState& state, Stencil stencil,
                   const Loads& loads, double t_np1, bool want_matrices,
                   bool want_residuals, CellWork& work) const;

  const MixedMesh& mesh_;
  const DofMap& dofmap_;
  MaterialParams params_;
  AssemblyOptions options_;
  std::unique_ptr<QuadCache> cache_;
  std::vector<Eigen::MatrixXd> cell_mass_;  // scalar (phi_i, phi_j) per cell
};

}  // namespace sielast
