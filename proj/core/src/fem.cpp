#include "sielast/fem.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

namespace sielast {

Scheme scheme_from_string(const std::string& name) {
  if (name == "msbdf2") return Scheme::MSBDF2;
  if (name == "febdf2") return Scheme::FEBDF2;
  throw ConfigError("unknown scheme: " + name);
}

namespace {

struct StencilCoeffs {
  double force_scale;   // scales traction, deviatoric, body force, M_Vp
  double plin_dt;       // dt factor of M_pV (and the preconditioner)
  double corr;          // (U^n - U^{n-1}) factor in the R_p correction
  double v_hist_c1, v_hist_c2;  // R_V history combination of V^n, V^{n-1}
};

StencilCoeffs stencil_coeffs(Stencil stencil, double dt, bool paper_literal) {
  switch (stencil) {
    case Stencil::MSBDF2:
    case Stencil::FEBDF2:
      if (paper_literal) {
        return {2.0 / 3.0, dt, 0.0, 4.0 / 3.0, -1.0 / 3.0};
      }
      return {2.0 / 3.0, 2.0 * dt / 3.0, 1.0 / 3.0, 4.0 / 3.0, -1.0 / 3.0};
    case Stencil::BackwardEulerStart:
      return {1.0, dt, 0.0, 1.0, 0.0};
  }
  throw ConfigError("unknown stencil");
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n < 2) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
  };
  std::vector<std::thread> pool;
  const int nt = std::min(threads, n);
  pool.reserve(nt);
  for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace

Vec lump_mass(const SpMat& M_V) {
  Vec diag = Vec::Zero(M_V.rows());
  for (int k = 0; k < M_V.outerSize(); ++k)
    for (SpMat::InnerIterator it(M_V, k); it; ++it) diag[it.row()] += it.value();
  for (int i = 0; i < diag.size(); ++i) {
    if (!(diag[i] > 0.0)) {
      throw NumericError("mass lumping produced a non-positive row sum at dof " +
                         std::to_string(i));
    }
  }
  return diag;
}

struct Assembler::CellWork {
  Eigen::MatrixXd K_vp, K_pv, K_p;
  Vec r_v, r_p;
};

Assembler::Assembler(const MixedMesh& mesh, const DofMap& dofmap,
                     const MaterialParams& params, AssemblyOptions options)
    : mesh_(mesh),
      dofmap_(dofmap),
      params_(params),
      options_(options),
      cache_(std::make_unique<QuadCache>(mesh)) {
  // geometry-only scalar mass (phi_i, phi_j) per cell, reused every step
  const CellRule& rule = cache_->rule();
  const int nen = q2_nodes_per_cell(mesh.dim);
  cell_mass_.resize(mesh.n_cells());
  for (int c = 0; c < mesh.n_cells(); ++c) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nen, nen);
    for (int q = 0; q < rule.nq; ++q) {
      const double w = cache_->jxw(c, q);
      const auto& N = rule.q2_val[q];
      for (int a = 0; a < nen; ++a)
        for (int b = 0; b < nen; ++b) m(a, b) += w * N[a] * N[b];
    }
    cell_mass_[c] = std::move(m);
  }
}

void Assembler::cell_kernel(int cell, const TimeState& state, Stencil stencil,
                            const Loads& loads, double t_np1,
                            bool want_matrices, bool want_residuals,
                            CellWork& work) const {
  const int dim = mesh_.dim;
  const CellRule& rule = cache_->rule();
  const int nen = q2_nodes_per_cell(dim);
  const int npn = q1_nodes_per_cell(dim);
  const int nv = nen * dim;
  const auto& vdofs = dofmap_.cell_vdofs[cell];
  const StencilCoeffs coeff =
      stencil_coeffs(stencil, state.dt, options_.paper_literal_blocks);

  if (want_matrices) {
    work.K_vp = Eigen::MatrixXd::Zero(nv, npn);
    work.K_pv = Eigen::MatrixXd::Zero(npn, nv);
    work.K_p = Eigen::MatrixXd::Zero(npn, npn);
  }
  if (want_residuals) {
    work.r_v = Vec::Zero(nv);
    work.r_p = Vec::Zero(npn);
  }

  // gather element vectors
  Eigen::MatrixXd ue_n(nen, dim), ue_nm1(nen, dim), ve_n(nen, dim),
      ve_nm1(nen, dim);
  for (int a = 0; a < nen; ++a)
    for (int k = 0; k < dim; ++k) {
      const int dof = vdofs[a * dim + k];
      ue_n(a, k) = state.U_n[dof];
      ue_nm1(a, k) = state.U_nm1[dof];
      ve_n(a, k) = state.V_n[dof];
      ve_nm1(a, k) = state.V_nm1[dof];
    }
  Eigen::MatrixXd ue_ex;
  switch (stencil) {
    case Stencil::MSBDF2: ue_ex = 2.0 * ue_n - ue_nm1; break;
    case Stencil::FEBDF2: ue_ex = ue_n + state.dt * ve_n; break;
    case Stencil::BackwardEulerStart: ue_ex = ue_n; break;
  }
  const Eigen::MatrixXd due = ue_n - ue_nm1;

  const double rho_dt = params_.rho0 / state.dt;
  const double inv_kappa = params_.inv_kappa();

  auto run_dim = [&](auto dim_tag) {
    constexpr int D = decltype(dim_tag)::value;
    using MatD = Eigen::Matrix<double, D, D>;
    using VecD = Eigen::Matrix<double, D, 1>;

    for (int q = 0; q < rule.nq; ++q) {
      const double w = cache_->jxw(cell, q);
      const auto& N = rule.q2_val[q];
      const auto& M = rule.q1_val[q];

      MatD G_n = MatD::Zero(), G_ex = MatD::Zero(), G_du = MatD::Zero();
      for (int a = 0; a < nen; ++a) {
        const VecD g = cache_->grad_q2(cell, q, a).template head<D>();
        G_n += ue_n.row(a).transpose().template head<D>() * g.transpose();
        G_ex += ue_ex.row(a).transpose().template head<D>() * g.transpose();
        G_du += due.row(a).transpose().template head<D>() * g.transpose();
      }
      const Kinematics<D> kin_n = kinematics<D>(G_n);
      const Kinematics<D> kin_ex = kinematics<D>(G_ex);
      if (!(kin_n.J > 0.0)) throw InvertedElementError(cell, kin_n.J);
      if (!(kin_ex.J > 0.0)) throw InvertedElementError(cell, kin_ex.J);

      const auto volk =
          volumetric_derivatives_over_kappa(kin_n.J, params_.vol_model);

      if (want_matrices) {
        for (int a = 0; a < nen; ++a) {
          const VecD g = cache_->grad_q2(cell, q, a).template head<D>();
          const VecD hg_ex = kin_ex.H * g;
          const VecD hg_n = kin_n.H * g;
          for (int k = 0; k < D; ++k) {
            const int row = a * D + k;
            for (int b = 0; b < npn; ++b) {
              work.K_vp(row, b) += w * coeff.force_scale * hg_ex[k] * M[b];
              work.K_pv(b, row) -=
                  w * coeff.plin_dt * volk.W_JJ * hg_n[k] * M[b];
            }
          }
        }
        for (int b = 0; b < npn; ++b)
          for (int c2 = 0; c2 < npn; ++c2)
            work.K_p(b, c2) += w * inv_kappa * M[b] * M[c2];
      }

      if (want_residuals) {
        const auto dev = deviatoric_pk1(kin_ex, params_.mu);
        VecD v_hist = VecD::Zero();
        for (int a = 0; a < nen; ++a)
          v_hist += N[a] * (coeff.v_hist_c1 * ve_n.row(a).transpose() +
                            coeff.v_hist_c2 * ve_nm1.row(a).transpose())
                               .template head<D>();
        VecD body = VecD::Zero();
        if (loads.body_force) {
          body = loads.body_force(cache_->point(cell, q), t_np1)
                     .template head<D>();
        }
        for (int a = 0; a < nen; ++a) {
          const VecD g = cache_->grad_q2(cell, q, a).template head<D>();
          const VecD pg = dev.P * g;
          for (int k = 0; k < D; ++k) {
            work.r_v[a * D + k] +=
                w * (rho_dt * N[a] * v_hist[k] - coeff.force_scale * pg[k] +
                     coeff.force_scale * params_.rho0 * N[a] * body[k]);
          }
        }
        const double corr_q = (kin_n.H.array() * G_du.array()).sum();
        const double rp_q = volk.W_J + coeff.corr * volk.W_JJ * corr_q;
        for (int b = 0; b < npn; ++b) work.r_p[b] += w * M[b] * rp_q;
      }
    }
  };
  if (dim == 2) {
    run_dim(std::integral_constant<int, 2>{});
  } else {
    run_dim(std::integral_constant<int, 3>{});
  }
}

BlockSystem Assembler::assemble(const TimeState& state, Stencil stencil,
                                const Loads& loads) const {
  const int dim = mesh_.dim;
  const int nen = q2_nodes_per_cell(dim);
  const int nvd = dofmap_.n_velocity_dofs;
  const int npd = dofmap_.n_pressure_dofs;
  const double t_np1 = state.t + state.dt;
  const StencilCoeffs coeff =
      stencil_coeffs(stencil, state.dt, options_.paper_literal_blocks);

  std::vector<CellWork> work(mesh_.n_cells());
  // exceptions from worker threads are rethrown on the calling thread
  std::exception_ptr err;
  std::mutex err_mutex;
  parallel_for(mesh_.n_cells(), options_.threads, [&](int c) {
    try {
      cell_kernel(c, state, stencil, loads, t_np1, true, true, work[c]);
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mutex);
      if (!err) err = std::current_exception();
    }
  });
  if (err) std::rethrow_exception(err);

  BlockSystem sys;
  sys.R_V = Vec::Zero(nvd);
  sys.R_p = Vec::Zero(npd);

  std::vector<Triplet> t_mv, t_vp, t_pv, t_p;
  t_mv.reserve(static_cast<size_t>(mesh_.n_cells()) * nen * nen * dim);

  const double rho_dt = params_.rho0 / state.dt;
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& vdofs = dofmap_.cell_vdofs[c];
    const auto& pdofs = dofmap_.cell_pdofs[c];
    const auto& mass = cell_mass_[c];
    const int nv = static_cast<int>(vdofs.size());
    const int np = static_cast<int>(pdofs.size());

    // velocity mass block, component-diagonal
    for (int a = 0; a < nen; ++a)
      for (int b = 0; b < nen; ++b) {
        const double mab = rho_dt * mass(a, b);
        for (int k = 0; k < dim; ++k) {
          const int i = vdofs[a * dim + k];
          const int j = vdofs[b * dim + k];
          if (dofmap_.is_constrained(i)) continue;
          if (dofmap_.is_constrained(j)) {
            sys.R_V[i] -= mab * dofmap_.constrained_value[j];
            continue;
          }
          t_mv.emplace_back(i, j, mab);
        }
      }
    for (int r = 0; r < nv; ++r) {
      const int i = vdofs[r];
      if (dofmap_.is_constrained(i)) continue;
      sys.R_V[i] += work[c].r_v[r];
      for (int s = 0; s < np; ++s) {
        const double v = work[c].K_vp(r, s);
        if (v != 0.0) t_vp.emplace_back(i, pdofs[s], v);
      }
    }
    for (int r = 0; r < np; ++r) {
      const int i = pdofs[r];
      sys.R_p[i] += work[c].r_p[r];
      for (int s = 0; s < nv; ++s) {
        const int j = vdofs[s];
        const double v = work[c].K_pv(r, s);
        if (v == 0.0) continue;
        if (dofmap_.is_constrained(j)) {
          sys.R_p[i] -= v * dofmap_.constrained_value[j];
          continue;
        }
        t_pv.emplace_back(i, j, v);
      }
      for (int s = 0; s < np; ++s) {
        const double v = work[c].K_p(r, s);
        if (v != 0.0) t_p.emplace_back(i, pdofs[s], v);
      }
    }
  }

  // tractions at t^{n+1}
  if (!loads.tractions.empty()) {
    const FaceRule& fr = face_rule(dim);
    for (const Facet& facet : mesh_.facets) {
      auto it = loads.tractions.find(facet.tag);
      if (it == loads.tractions.end()) continue;
      const auto& face = fr.faces[facet.local_face];
      const auto& vdofs = dofmap_.cell_vdofs[facet.cell];
      for (size_t q = 0; q < face.xi.size(); ++q) {
        const Mat3 J = cell_jacobian(mesh_, facet.cell, face.xi[q]);
        Mat3 cof;
        if (dim == 2) {
          cof.setZero();
          cof(0, 0) = J(1, 1);
          cof(0, 1) = -J(1, 0);
          cof(1, 0) = -J(0, 1);
          cof(1, 1) = J(0, 0);
        } else {
          cof = J.determinant() * J.inverse().transpose();
        }
        const double ds = face.w[q] * (face.side * cof.col(face.axis)).norm();
        for (int a = 0; a < nen; ++a) {
          const double nav = face.q2_val[q][a];
          if (nav == 0.0) continue;
          for (int k = 0; k < dim; ++k) {
            const int i = vdofs[a * dim + k];
            if (dofmap_.is_constrained(i)) continue;
            sys.R_V[i] += coeff.force_scale * nav * it->second[k] * ds;
          }
        }
      }
    }
  }

  // Dirichlet rows: identity diagonal, prescribed residual
  for (int i = 0; i < nvd; ++i) {
    if (dofmap_.is_constrained(i)) {
      t_mv.emplace_back(i, i, 1.0);
      sys.R_V[i] = dofmap_.constrained_value[i];
    }
  }

  sys.M_V.resize(nvd, nvd);
  sys.M_V.setFromTriplets(t_mv.begin(), t_mv.end());
  sys.M_Vp.resize(nvd, npd);
  sys.M_Vp.setFromTriplets(t_vp.begin(), t_vp.end());
  sys.M_pV.resize(npd, nvd);
  sys.M_pV.setFromTriplets(t_pv.begin(), t_pv.end());
  sys.M_p.resize(npd, npd);
  sys.M_p.setFromTriplets(t_p.begin(), t_p.end());
  sys.M_V_lumped = lump_mass(sys.M_V);
  return sys;
}

BlockSystem Assembler::assemble_blocks(const TimeState& state,
                                       Scheme scheme) const {
  return assemble(state, stencil_of(scheme), Loads{});
}

std::pair<Vec, Vec> Assembler::assemble_residuals(const TimeState& state,
                                                  Scheme scheme,
                                                  const Loads& loads) const {
  BlockSystem sys = assemble(state, stencil_of(scheme), loads);
  return {std::move(sys.R_V), std::move(sys.R_p)};
}

SpMat Assembler::assemble_schur_preconditioner(const TimeState& state,
                                               Stencil stencil) const {
  const int dim = mesh_.dim;
  const CellRule& rule = cache_->rule();
  const int nen = q2_nodes_per_cell(dim);
  const int npn = q1_nodes_per_cell(dim);
  const StencilCoeffs coeff =
      stencil_coeffs(stencil, state.dt, options_.paper_literal_blocks);
  const double stiff_w =
      coeff.force_scale * coeff.plin_dt * state.dt / params_.rho0;
  const double inv_kappa = params_.inv_kappa();

  std::vector<Triplet> trip;
  trip.reserve(static_cast<size_t>(mesh_.n_cells()) * npn * npn);
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& pdofs = dofmap_.cell_pdofs[c];

    Eigen::MatrixXd ue_n(nen, dim), ue_ex(nen, dim);
    for (int a = 0; a < nen; ++a)
      for (int k = 0; k < dim; ++k) {
        const int dof = dofmap_.cell_vdofs[c][a * dim + k];
        ue_n(a, k) = state.U_n[dof];
        switch (stencil) {
          case Stencil::MSBDF2:
            ue_ex(a, k) = 2.0 * state.U_n[dof] - state.U_nm1[dof];
            break;
          case Stencil::FEBDF2:
            ue_ex(a, k) = state.U_n[dof] + state.dt * state.V_n[dof];
            break;
          case Stencil::BackwardEulerStart:
            ue_ex(a, k) = state.U_n[dof];
            break;
        }
      }

    Eigen::MatrixXd pe = Eigen::MatrixXd::Zero(npn, npn);
    for (int q = 0; q < rule.nq; ++q) {
      const double w = cache_->jxw(c, q);
      const auto& M = rule.q1_val[q];

      Mat3 G_n = Mat3::Zero(), G_ex = Mat3::Zero();
      for (int a = 0; a < nen; ++a) {
        const Vec3& g = cache_->grad_q2(c, q, a);
        for (int k = 0; k < dim; ++k) {
          G_n.row(k) += ue_n(a, k) * g.transpose();
          G_ex.row(k) += ue_ex(a, k) * g.transpose();
        }
      }
      double J_n, J_ex;
      Mat3 H_n = Mat3::Identity(), H_ex = Mat3::Identity();
      if (dim == 2) {
        const auto kn = kinematics<2>(G_n.topLeftCorner<2, 2>());
        const auto ke = kinematics<2>(G_ex.topLeftCorner<2, 2>());
        J_n = kn.J;
        J_ex = ke.J;
        H_n.topLeftCorner<2, 2>() = kn.H;
        H_ex.topLeftCorner<2, 2>() = ke.H;
      } else {
        const auto kn = kinematics<3>(G_n);
        const auto ke = kinematics<3>(G_ex);
        J_n = kn.J;
        J_ex = ke.J;
        H_n = kn.H;
        H_ex = ke.H;
      }
      if (!(J_n > 0.0)) throw InvertedElementError(c, J_n);
      if (!(J_ex > 0.0)) throw InvertedElementError(c, J_ex);
      const auto volk = volumetric_derivatives_over_kappa(J_n, params_.vol_model);

      for (int b = 0; b < npn; ++b) {
        const Vec3 gb_ex = H_ex * cache_->grad_q1(c, q, b);
        const Vec3 gb_n = H_n * cache_->grad_q1(c, q, b);
        for (int c2 = 0; c2 < npn; ++c2) {
          const Vec3 gc_ex = H_ex * cache_->grad_q1(c, q, c2);
          const Vec3 gc_n = H_n * cache_->grad_q1(c, q, c2);
          const double stiff =
              0.5 * (gb_ex.dot(gc_n) + gb_n.dot(gc_ex));  // symmetrized
          pe(b, c2) += w * (inv_kappa * M[b] * M[c2] +
                            stiff_w * volk.W_JJ * stiff);
        }
      }
    }
    for (int b = 0; b < npn; ++b)
      for (int c2 = 0; c2 < npn; ++c2)
        trip.emplace_back(pdofs[b], pdofs[c2], pe(b, c2));
  }
  SpMat P(dofmap_.n_pressure_dofs, dofmap_.n_pressure_dofs);
  P.setFromTriplets(trip.begin(), trip.end());
  return P;
}

}  // namespace sielast
