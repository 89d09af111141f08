#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "sielast/fem.hpp"
#include "sielast/types.hpp"

namespace sielast {

/// Outcome of one Krylov solve.
struct SolveReport {
  enum class Stage { SchurPressure, VelocityUpdate };

  int iterations = 0;
  double final_residual = 0.0;
  bool converged = false;
  Stage stage = Stage::SchurPressure;
  std::string note;
};

using LinOp = std::function<void(const Vec&, Vec&)>;

/// Preconditioned conjugate gradients with a diagonal preconditioner.
/// Stops at ||b - Ax||_2 <= tol ||b||_2; reports an indefinite operator on
/// p^T A p <= 0.
std::pair<Vec, SolveReport> pcg(const LinOp& A, const Vec& b,
                                const Vec& diag_precond, double tol,
                                int maxit);

/// Left-preconditioned restarted GMRES. Stops when the preconditioned
/// residual drops below tol times the preconditioned norm of b; a restart
/// cycle without progress reports stagnation.
std::pair<Vec, SolveReport> gmres(const LinOp& A, const Vec& b,
                                  const LinOp& precond, double tol,
                                  int restart, int maxit);

/// S q = M_p q - M_pV diag(M_V)^{-1} M_Vp q, without forming S.
Vec schur_apply(const BlockSystem& blocks, const Vec& q);

/// Pluggable SPD preconditioner for the Schur solve.
class SchurPreconditioner {
 public:
  virtual ~SchurPreconditioner() = default;
  virtual void apply(const Vec& r, Vec& z) const = 0;
};

enum class PrecondKind { IncompleteCholesky, Jacobi, Identity };

PrecondKind precond_from_string(const std::string& name);

/// Builds the requested preconditioner from the assembled matrix P.
/// IncompleteCholesky falls back to Jacobi if the factorization fails.
std::unique_ptr<SchurPreconditioner> make_schur_preconditioner(
    const SpMat& P, PrecondKind kind = PrecondKind::IncompleteCholesky);

struct SchurSolveOptions {
  double tol = 1e-10;
  int maxit = 500;
  int restart = 50;
  /// Lumped inverts M_V by its row-sum diagonal; ConsistentCG runs an inner
  /// diagonally preconditioned CG on the consistent mass each application.
  enum class MassInverse { Lumped, ConsistentCG } mass_inverse =
      MassInverse::Lumped;
  double cg_tol = 1e-13;
  int cg_maxit = 2000;
};

/// Displacement recombination U^{n+1} = c0 U^n + c1 U^{n-1} + b dt V^{n+1}.
struct DisplacementUpdate {
  double c0 = 4.0 / 3.0;
  double c1 = -1.0 / 3.0;
  double b = 2.0 / 3.0;
};

struct SchurUpdateResult {
  Vec p;
  Vec V;
  Vec U;
  SolveReport pressure_report;
  SolveReport velocity_report;
};

/// The three-stage update: (1) pressure from the Schur system by GMRES,
/// (2) velocity by mass inversion, (3) displacement recombination.
/// A non-converged stage 1 is reported, not thrown.
SchurUpdateResult schur_update(const BlockSystem& blocks,
                               const SchurPreconditioner& precond,
                               const SchurSolveOptions& options,
                               const TimeState& state,
                               const DisplacementUpdate& update = {});

}  // namespace sielast
