#include "sielast/solvers.hpp"

#include <Eigen/IterativeLinearSolvers>

#include <cmath>

namespace sielast {

std::pair<Vec, SolveReport> pcg(const LinOp& A, const Vec& b,
                                const Vec& diag_precond, double tol,
                                int maxit) {
  SolveReport rep;
  rep.stage = SolveReport::Stage::VelocityUpdate;
  const double bnorm = b.norm();
  Vec x = Vec::Zero(b.size());
  if (bnorm == 0.0) {
    rep.converged = true;
    return {x, rep};
  }
  Vec r = b;
  Vec z = r.cwiseQuotient(diag_precond);
  Vec p = z;
  Vec Ap(b.size());
  double rz = r.dot(z);
  for (int it = 0; it < maxit; ++it) {
    A(p, Ap);
    const double pAp = p.dot(Ap);
    if (!(pAp > 0.0)) {
      rep.iterations = it;
      rep.final_residual = r.norm() / bnorm;
      rep.note = "indefinite operator: p^T A p = " + std::to_string(pAp);
      return {x, rep};
    }
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;
    rep.iterations = it + 1;
    rep.final_residual = r.norm() / bnorm;
    if (rep.final_residual <= tol) {
      rep.converged = true;
      return {x, rep};
    }
    z = r.cwiseQuotient(diag_precond);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return {x, rep};
}

std::pair<Vec, SolveReport> gmres(const LinOp& A, const Vec& b,
                                  const LinOp& precond, double tol,
                                  int restart, int maxit) {
  SolveReport rep;
  rep.stage = SolveReport::Stage::SchurPressure;
  const auto n = b.size();
  Vec x = Vec::Zero(n);

  Vec Mb(n);
  precond(b, Mb);
  const double target = tol * Mb.norm();
  if (Mb.norm() == 0.0) {
    rep.converged = true;
    return {x, rep};
  }

  Vec tmp(n), r(n);
  auto precond_residual = [&](const Vec& xx, Vec& rr) {
    A(xx, tmp);
    tmp = b - tmp;
    precond(tmp, rr);
  };

  std::vector<Vec> V;
  Eigen::MatrixXd Hmat(restart + 1, restart);
  Vec g(restart + 1), cs(restart), sn(restart);

  int total_it = 0;
  double beta = 0.0;
  while (total_it < maxit) {
    precond_residual(x, r);
    beta = r.norm();
    rep.final_residual = beta;
    if (beta <= target) {
      rep.converged = true;
      return {x, rep};
    }
    const double cycle_start_res = beta;

    V.assign(1, r / beta);
    Hmat.setZero();
    g.setZero();
    g[0] = beta;

    int j = 0;
    bool breakdown = false;
    for (; j < restart && total_it < maxit; ++j, ++total_it) {
      A(V[j], tmp);
      Vec w(n);
      precond(tmp, w);
      for (int i = 0; i <= j; ++i) {
        Hmat(i, j) = w.dot(V[i]);
        w -= Hmat(i, j) * V[i];
      }
      Hmat(j + 1, j) = w.norm();
      if (Hmat(j + 1, j) > 1e-14 * beta) {
        V.push_back(w / Hmat(j + 1, j));
      } else {
        breakdown = true;  // happy breakdown: exact solve in the Krylov space
      }
      // apply stored Givens rotations, then the new one
      for (int i = 0; i < j; ++i) {
        const double t = cs[i] * Hmat(i, j) + sn[i] * Hmat(i + 1, j);
        Hmat(i + 1, j) = -sn[i] * Hmat(i, j) + cs[i] * Hmat(i + 1, j);
        Hmat(i, j) = t;
      }
      const double denom = std::hypot(Hmat(j, j), Hmat(j + 1, j));
      cs[j] = denom == 0.0 ? 1.0 : Hmat(j, j) / denom;
      sn[j] = denom == 0.0 ? 0.0 : Hmat(j + 1, j) / denom;
      Hmat(j, j) = denom;
      Hmat(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      rep.iterations = total_it + 1;
      rep.final_residual = std::abs(g[j + 1]);
      if (rep.final_residual <= target || breakdown) {
        ++j;
        break;
      }
    }

    // solve the triangular system and update x
    Vec y = Vec::Zero(j);
    for (int i = j - 1; i >= 0; --i) {
      double s = g[i];
      for (int k2 = i + 1; k2 < j; ++k2) s -= Hmat(i, k2) * y[k2];
      y[i] = Hmat(i, i) != 0.0 ? s / Hmat(i, i) : 0.0;
    }
    for (int i = 0; i < j; ++i) x += y[i] * V[i];

    precond_residual(x, r);
    rep.final_residual = r.norm();
    if (rep.final_residual <= target) {
      rep.converged = true;
      return {x, rep};
    }
    if (breakdown) {
      rep.note = "Arnoldi breakdown with residual above tolerance";
      return {x, rep};
    }
    if (rep.final_residual >= cycle_start_res * (1.0 - 1e-12)) {
      rep.note = "stagnation across a restart cycle";
      return {x, rep};
    }
  }
  rep.note = "maximum iterations reached";
  return {x, rep};
}

Vec schur_apply(const BlockSystem& blocks, const Vec& q) {
  Vec t = blocks.M_Vp * q;
  t = t.cwiseQuotient(blocks.M_V_lumped);
  return blocks.M_p * q - blocks.M_pV * t;
}

PrecondKind precond_from_string(const std::string& name) {
  if (name == "ic0") return PrecondKind::IncompleteCholesky;
  if (name == "jacobi") return PrecondKind::Jacobi;
  if (name == "identity") return PrecondKind::Identity;
  throw ConfigError("unknown preconditioner: " + name);
}

namespace {

class IdentityPrecond final : public SchurPreconditioner {
 public:
  void apply(const Vec& r, Vec& z) const override { z = r; }
};

class JacobiPrecond final : public SchurPreconditioner {
 public:
  explicit JacobiPrecond(const SpMat& P) : diag_(P.diagonal()) {
    for (int i = 0; i < diag_.size(); ++i)
      if (diag_[i] <= 0.0) diag_[i] = 1.0;
  }
  void apply(const Vec& r, Vec& z) const override {
    z = r.cwiseQuotient(diag_);
  }

 private:
  Vec diag_;
};

class IC0Precond final : public SchurPreconditioner {
 public:
  explicit IC0Precond(const SpMat& P) {
    ic_.compute(P);
    ok_ = ic_.info() == Eigen::Success;
  }
  bool ok() const { return ok_; }
  void apply(const Vec& r, Vec& z) const override { z = ic_.solve(r); }

 private:
  Eigen::IncompleteCholesky<double, Eigen::Lower, Eigen::NaturalOrdering<int>>
      ic_;
  bool ok_ = false;
};

}  // namespace

std::unique_ptr<SchurPreconditioner> make_schur_preconditioner(
    const SpMat& P, PrecondKind kind) {
  switch (kind) {
    case PrecondKind::Identity:
      return std::make_unique<IdentityPrecond>();
    case PrecondKind::Jacobi:
      return std::make_unique<JacobiPrecond>(P);
    case PrecondKind::IncompleteCholesky: {
      auto ic = std::make_unique<IC0Precond>(P);
      if (ic->ok()) return ic;
      return std::make_unique<JacobiPrecond>(P);
    }
  }
  throw ConfigError("unknown preconditioner kind");
}

SchurUpdateResult schur_update(const BlockSystem& blocks,
                               const SchurPreconditioner& precond,
                               const SchurSolveOptions& options,
                               const TimeState& state,
                               const DisplacementUpdate& update) {
  SchurUpdateResult out;

  // M_V^{-1} as either the lumped diagonal or an inner CG on the
  // consistent mass
  auto apply_mass_inverse = [&](const Vec& rhs, SolveReport* rep) -> Vec {
    if (options.mass_inverse == SchurSolveOptions::MassInverse::Lumped) {
      if (rep) {
        rep->converged = true;
        rep->stage = SolveReport::Stage::VelocityUpdate;
      }
      return rhs.cwiseQuotient(blocks.M_V_lumped);
    }
    LinOp mv = [&](const Vec& v, Vec& y) { y = blocks.M_V * v; };
    auto [x, r] = pcg(mv, rhs, blocks.M_V.diagonal(), options.cg_tol,
                      options.cg_maxit);
    if (rep) *rep = r;
    return x;
  };

  // stage 1: pressure
  const Vec rhs_p = blocks.R_p - blocks.M_pV * apply_mass_inverse(blocks.R_V, nullptr);
  LinOp S = [&](const Vec& q, Vec& y) {
    if (options.mass_inverse == SchurSolveOptions::MassInverse::Lumped) {
      y = schur_apply(blocks, q);
    } else {
      y = blocks.M_p * q - blocks.M_pV * apply_mass_inverse(blocks.M_Vp * q, nullptr);
    }
  };
  LinOp M = [&](const Vec& r, Vec& z) { precond.apply(r, z); };
  auto [p, prep] = gmres(S, rhs_p, M, options.tol, options.restart,
                         options.maxit);
  prep.stage = SolveReport::Stage::SchurPressure;
  out.p = std::move(p);
  out.pressure_report = prep;

  // stage 2: velocity
  out.V = apply_mass_inverse(blocks.R_V - blocks.M_Vp * out.p,
                             &out.velocity_report);

  // stage 3: displacement recombination
  out.U = update.c0 * state.U_n + update.c1 * state.U_nm1 +
          update.b * state.dt * out.V;
  return out;
}

}  // namespace sielast
