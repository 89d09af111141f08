#include "sielast/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace sielast {

FieldDiagnostics::FieldDiagnostics(const MixedMesh& mesh, const DofMap& dofmap)
    : mesh_(mesh), dofmap_(dofmap), cache_(mesh) {}

namespace {

template <int D>
Eigen::Matrix<double, D, D> field_gradient(const QuadCache& cache,
                                           const std::vector<int>& vdofs,
                                           const Vec& field, int cell, int q,
                                           int nen) {
  Eigen::Matrix<double, D, D> G = Eigen::Matrix<double, D, D>::Zero();
  for (int a = 0; a < nen; ++a) {
    const auto g = cache.grad_q2(cell, q, a).head<D>();
    for (int k = 0; k < D; ++k) G.row(k) += field[vdofs[a * D + k]] * g.transpose();
  }
  return G;
}

}  // namespace

DiagnosticRecord FieldDiagnostics::evaluate(const TimeState& state,
                                            const MaterialParams& params) const {
  DiagnosticRecord rec;
  rec.t = state.t;
  const int dim = mesh_.dim;
  const CellRule& rule = cache_.rule();
  const int nen = q2_nodes_per_cell(dim);
  const int npn = q1_nodes_per_cell(dim);

  double kin = 0.0, dev = 0.0, press = 0.0, vol = 0.0;
  double e1 = 0.0, e2 = 0.0, einf = 0.0;

  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& vdofs = dofmap_.cell_vdofs[c];
    const auto& pdofs = dofmap_.cell_pdofs[c];
    for (int q = 0; q < rule.nq; ++q) {
      const double w = cache_.jxw(c, q);
      const auto& N = rule.q2_val[q];
      const auto& M = rule.q1_val[q];

      double v2 = 0.0;
      for (int k = 0; k < dim; ++k) {
        double vk = 0.0;
        for (int a = 0; a < nen; ++a) vk += N[a] * state.V_n[vdofs[a * dim + k]];
        v2 += vk * vk;
      }
      double pq = 0.0;
      for (int b = 0; b < npn; ++b) pq += M[b] * state.p_n[pdofs[b]];

      double J, W_dev;
      if (dim == 2) {
        const auto kin2 = kinematics<2>(
            field_gradient<2>(cache_, vdofs, state.U_n, c, q, nen));
        J = kin2.J;
        W_dev = deviatoric_pk1(kin2, params.mu).W;
      } else {
        const auto kin3 = kinematics<3>(
            field_gradient<3>(cache_, vdofs, state.U_n, c, q, nen));
        J = kin3.J;
        W_dev = deviatoric_pk1(kin3, params.mu).W;
      }

      kin += w * 0.5 * params.rho0 * v2;
      dev += w * W_dev;
      press += w * 0.5 * pq * (J - 1.0);
      vol += w * J;
      const double err = std::abs(J - 1.0);
      e1 += w * err;
      e2 += w * err * err;
      einf = std::max(einf, err);
    }
  }
  rec.energy_kinetic = kin;
  rec.energy_deviatoric = dev;
  rec.energy_pressure = press;
  rec.energy_total = kin + dev + press;
  rec.volume = vol;
  rec.vol_err_L1 = e1;
  rec.vol_err_L2 = std::sqrt(e2);
  rec.vol_err_Linf = einf;
  return rec;
}

double FieldDiagnostics::total_volume(const Vec& U) const {
  const int dim = mesh_.dim;
  const CellRule& rule = cache_.rule();
  const int nen = q2_nodes_per_cell(dim);
  double vol = 0.0;
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& vdofs = dofmap_.cell_vdofs[c];
    for (int q = 0; q < rule.nq; ++q) {
      const double J =
          dim == 2
              ? kinematics<2>(field_gradient<2>(cache_, vdofs, U, c, q, nen)).J
              : kinematics<3>(field_gradient<3>(cache_, vdofs, U, c, q, nen)).J;
      vol += cache_.jxw(c, q) * J;
    }
  }
  return vol;
}

Norms FieldDiagnostics::volumetric_error(const Vec& U) const {
  const int dim = mesh_.dim;
  const CellRule& rule = cache_.rule();
  const int nen = q2_nodes_per_cell(dim);
  Norms n;
  double e2 = 0.0;
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& vdofs = dofmap_.cell_vdofs[c];
    for (int q = 0; q < rule.nq; ++q) {
      const double J =
          dim == 2
              ? kinematics<2>(field_gradient<2>(cache_, vdofs, U, c, q, nen)).J
              : kinematics<3>(field_gradient<3>(cache_, vdofs, U, c, q, nen)).J;
      const double w = cache_.jxw(c, q);
      const double err = std::abs(J - 1.0);
      n.l1 += w * err;
      e2 += w * err * err;
      n.linf = std::max(n.linf, err);
    }
  }
  n.l2 = std::sqrt(e2);
  return n;
}

Norms FieldDiagnostics::field_norms_velocity(const Vec& field) const {
  if (field.size() != dofmap_.n_velocity_dofs) {
    throw ConfigError("field is not sized to the velocity space");
  }
  const int dim = mesh_.dim;
  const CellRule& rule = cache_.rule();
  const int nen = q2_nodes_per_cell(dim);
  Norms n;
  double e2 = 0.0;
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& vdofs = dofmap_.cell_vdofs[c];
    for (int q = 0; q < rule.nq; ++q) {
      const auto& N = rule.q2_val[q];
      double mag2 = 0.0;
      for (int k = 0; k < dim; ++k) {
        double vk = 0.0;
        for (int a = 0; a < nen; ++a) vk += N[a] * field[vdofs[a * dim + k]];
        mag2 += vk * vk;
      }
      const double w = cache_.jxw(c, q);
      const double mag = std::sqrt(mag2);
      n.l1 += w * mag;
      e2 += w * mag2;
      n.linf = std::max(n.linf, mag);
    }
  }
  n.l2 = std::sqrt(e2);
  return n;
}

Norms FieldDiagnostics::field_norms_pressure(const Vec& field) const {
  if (field.size() != dofmap_.n_pressure_dofs) {
    throw ConfigError("field is not sized to the pressure space");
  }
  const CellRule& rule = cache_.rule();
  const int npn = q1_nodes_per_cell(mesh_.dim);
  Norms n;
  double e2 = 0.0;
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& pdofs = dofmap_.cell_pdofs[c];
    for (int q = 0; q < rule.nq; ++q) {
      const auto& M = rule.q1_val[q];
      double pq = 0.0;
      for (int b = 0; b < npn; ++b) pq += M[b] * field[pdofs[b]];
      const double w = cache_.jxw(c, q);
      const double mag = std::abs(pq);
      n.l1 += w * mag;
      e2 += w * mag * mag;
      n.linf = std::max(n.linf, mag);
    }
  }
  n.l2 = std::sqrt(e2);
  return n;
}

std::vector<double> FieldDiagnostics::cell_min_jacobian(const Vec& U) const {
  const int dim = mesh_.dim;
  const CellRule& rule = cache_.rule();
  const int nen = q2_nodes_per_cell(dim);
  std::vector<double> out(mesh_.n_cells());
  for (int c = 0; c < mesh_.n_cells(); ++c) {
    const auto& vdofs = dofmap_.cell_vdofs[c];
    double jmin = std::numeric_limits<double>::max();
    for (int q = 0; q < rule.nq; ++q) {
      const double J =
          dim == 2
              ? kinematics<2>(field_gradient<2>(cache_, vdofs, U, c, q, nen)).J
              : kinematics<3>(field_gradient<3>(cache_, vdofs, U, c, q, nen)).J;
      jmin = std::min(jmin, J);
    }
    out[c] = jmin;
  }
  return out;
}

Norms self_convergence(const FieldDiagnostics& diag, const Vec& y_coarse,
                       const Vec& y_fine, bool pressure_space) {
  if (y_coarse.size() != y_fine.size()) {
    throw ConfigError("self-convergence fields live on different meshes");
  }
  const Vec eps = y_coarse - y_fine;
  return pressure_space ? diag.field_norms_pressure(eps)
                        : diag.field_norms_velocity(eps);
}

double convergence_order(double eps_coarse, double eps_fine) {
  return std::log2(eps_coarse / eps_fine);
}

double fitted_order(const std::vector<double>& eps) {
  // least-squares slope of log2(eps_i) against -i (one halving per level)
  const int n = static_cast<int>(eps.size());
  if (n < 2) throw ConfigError("fitted order needs at least two errors");
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = -static_cast<double>(i);
    const double y = std::log2(eps[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace sielast
