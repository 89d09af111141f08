#include "sielast/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace sielast {

Tag tag_from_string(const std::string& name) {
  if (name == "fixed") return Tag::Fixed;
  if (name == "traction_loaded") return Tag::TractionLoaded;
  if (name == "free") return Tag::Free;
  throw ConfigError("unknown boundary tag: " + name);
}

Geometry geometry_from_string(const std::string& name) {
  if (name == "unit_square") return Geometry::UnitSquare;
  if (name == "cooks_membrane") return Geometry::CooksMembrane;
  if (name == "column") return Geometry::Column;
  throw ConfigError("unknown geometry: " + name);
}

std::vector<Vec3> MixedMesh::cell_corners(int cell) const {
  std::vector<Vec3> out;
  out.reserve(cells_q1[cell].size());
  for (int b : cells_q1[cell]) out.push_back(pressure_nodes[b]);
  return out;
}

namespace {

using MapFn = std::function<Vec3(double, double, double)>;

struct GeometrySpec {
  int dim;
  MapFn map;  // unit-cube parameters -> physical coordinates
  // tags by unit-cube boundary: [axis][side(0:lo,1:hi)]
  Tag face_tags[3][2];
};

GeometrySpec geometry_spec(Geometry g) {
  GeometrySpec s;
  switch (g) {
    case Geometry::UnitSquare:
      s.dim = 2;
      s.map = [](double u, double v, double) { return Vec3(u, v, 0.0); };
      s.face_tags[0][0] = Tag::Free;
      s.face_tags[0][1] = Tag::Free;
      s.face_tags[1][0] = Tag::Fixed;           // bottom
      s.face_tags[1][1] = Tag::TractionLoaded;  // top
      break;
    case Geometry::CooksMembrane:
      s.dim = 2;
      // corners (0,0), (48,44), (48,60), (0,44) in cm
      s.map = [](double u, double v, double) {
        return Vec3(48.0 * u, 44.0 * u + v * (44.0 - 28.0 * u), 0.0);
      };
      s.face_tags[0][0] = Tag::Fixed;           // left edge x = 0
      s.face_tags[0][1] = Tag::TractionLoaded;  // right edge x = 48
      s.face_tags[1][0] = Tag::Free;
      s.face_tags[1][1] = Tag::Free;
      break;
    case Geometry::Column:
      s.dim = 3;
      s.map = [](double u, double v, double w) {
        return Vec3(-1.0 + 2.0 * u, -1.0 + 2.0 * v, 12.0 * w);
      };
      s.face_tags[0][0] = Tag::Free;
      s.face_tags[0][1] = Tag::Free;
      s.face_tags[1][0] = Tag::Free;
      s.face_tags[1][1] = Tag::Free;
      s.face_tags[2][0] = Tag::Fixed;  // base X3 = 0
      s.face_tags[2][1] = Tag::Free;
      break;
  }
  return s;
}

}  // namespace

MixedMesh generate_mesh(Geometry geometry, const GridRefinement& refinement) {
  const GeometrySpec spec = geometry_spec(geometry);
  const int dim = spec.dim;
  const int nx = refinement.nx;
  const int ny = refinement.ny;
  const int nz = dim == 3 ? refinement.nz : 1;
  if (nx < 1 || ny < 1 || (dim == 3 && refinement.nz < 1)) {
    throw ConfigError("element counts must be >= 1 per axis");
  }

  MixedMesh mesh;
  mesh.dim = dim;
  mesh.geometry = geometry;

  // Q2 geometric grid: 2n+1 points per axis; Q1 grid: n+1 per axis.
  const int qx = 2 * nx + 1, qy = 2 * ny + 1, qz = dim == 3 ? 2 * nz + 1 : 1;
  const int px = nx + 1, py = ny + 1, pz = dim == 3 ? nz + 1 : 1;

  auto q2_index = [&](int i, int j, int k) { return (k * qy + j) * qx + i; };
  auto q1_index = [&](int i, int j, int k) { return (k * py + j) * px + i; };

  mesh.nodes.reserve(static_cast<size_t>(qx) * qy * qz);
  for (int k = 0; k < qz; ++k)
    for (int j = 0; j < qy; ++j)
      for (int i = 0; i < qx; ++i) {
        const double u = static_cast<double>(i) / (2.0 * nx);
        const double v = static_cast<double>(j) / (2.0 * ny);
        const double w = dim == 3 ? static_cast<double>(k) / (2.0 * nz) : 0.0;
        mesh.nodes.push_back(spec.map(u, v, w));
      }
  mesh.pressure_nodes.reserve(static_cast<size_t>(px) * py * pz);
  for (int k = 0; k < pz; ++k)
    for (int j = 0; j < py; ++j)
      for (int i = 0; i < px; ++i) {
        const double u = static_cast<double>(i) / nx;
        const double v = static_cast<double>(j) / ny;
        const double w = dim == 3 ? static_cast<double>(k) / nz : 0.0;
        mesh.pressure_nodes.push_back(spec.map(u, v, w));
      }

  const int ncz = dim == 3 ? nz : 1;
  for (int ck = 0; ck < ncz; ++ck)
    for (int cj = 0; cj < ny; ++cj)
      for (int ci = 0; ci < nx; ++ci) {
        std::vector<int> q2c, q1c;
        if (dim == 2) {
          for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i)
              q2c.push_back(q2_index(2 * ci + i, 2 * cj + j, 0));
          for (int j = 0; j < 2; ++j)
            for (int i = 0; i < 2; ++i)
              q1c.push_back(q1_index(ci + i, cj + j, 0));
        } else {
          for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j)
              for (int i = 0; i < 3; ++i)
                q2c.push_back(q2_index(2 * ci + i, 2 * cj + j, 2 * ck + k));
          for (int k = 0; k < 2; ++k)
            for (int j = 0; j < 2; ++j)
              for (int i = 0; i < 2; ++i)
                q1c.push_back(q1_index(ci + i, cj + j, ck + k));
        }
        mesh.cells_q2.push_back(std::move(q2c));
        mesh.cells_q1.push_back(std::move(q1c));

        // boundary facets; local face f fixes axis f/2 at side f%2
        const int cell = mesh.n_cells() - 1;
        const int idx[3] = {ci, cj, ck};
        const int cnt[3] = {nx, ny, ncz};
        for (int axis = 0; axis < dim; ++axis)
          for (int side = 0; side < 2; ++side) {
            const bool on_boundary =
                side == 0 ? idx[axis] == 0 : idx[axis] == cnt[axis] - 1;
            if (on_boundary) {
              mesh.facets.push_back(
                  {cell, 2 * axis + side, spec.face_tags[axis][side]});
            }
          }
      }

  // h_min: minimum corner-to-corner edge length over all cells
  double h_min = std::numeric_limits<double>::max();
  static const int edges2[4][2] = {{0, 1}, {2, 3}, {0, 2}, {1, 3}};
  static const int edges3[12][2] = {{0, 1}, {2, 3}, {4, 5}, {6, 7},
                                    {0, 2}, {1, 3}, {4, 6}, {5, 7},
                                    {0, 4}, {1, 5}, {2, 6}, {3, 7}};
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto corners = mesh.cell_corners(c);
    if (dim == 2) {
      for (const auto& e : edges2)
        h_min = std::min(h_min, (corners[e[0]] - corners[e[1]]).norm());
    } else {
      for (const auto& e : edges3)
        h_min = std::min(h_min, (corners[e[0]] - corners[e[1]]).norm());
    }
  }
  mesh.h_min = h_min;
  return mesh;
}

DofMap taylor_hood_dofmap(const MixedMesh& mesh,
                          const std::map<Tag, Vec3>& prescribed) {
  DofMap dm;
  dm.dim = mesh.dim;
  dm.n_velocity_dofs = mesh.dim * mesh.n_q2();
  dm.n_pressure_dofs = mesh.n_q1();
  dm.cell_pdofs = mesh.cells_q1;

  dm.cell_vdofs.reserve(mesh.n_cells());
  for (const auto& cell : mesh.cells_q2) {
    std::vector<int> vd;
    vd.reserve(cell.size() * mesh.dim);
    for (int node : cell)
      for (int k = 0; k < mesh.dim; ++k) vd.push_back(node * mesh.dim + k);
    dm.cell_vdofs.push_back(std::move(vd));
  }

  dm.constrained.assign(dm.n_velocity_dofs, 0);
  dm.constrained_value.assign(dm.n_velocity_dofs, 0.0);

  const FaceRule& fr = face_rule(mesh.dim);
  const auto q2_nodes = q2_node_coords(mesh.dim);
  for (const Facet& facet : mesh.facets) {
    auto it = prescribed.find(facet.tag);
    if (it == prescribed.end()) continue;
    const auto& face = fr.faces[facet.local_face];
    const auto& cell = mesh.cells_q2[facet.cell];
    for (size_t a = 0; a < cell.size(); ++a) {
      if (q2_nodes[a][face.axis] != static_cast<double>(face.side)) continue;
      for (int k = 0; k < mesh.dim; ++k) {
        const int dof = cell[a] * mesh.dim + k;
        dm.constrained[dof] = 1;
        dm.constrained_value[dof] = it->second[k];
      }
    }
  }
  dm.n_constrained = static_cast<int>(
      std::count(dm.constrained.begin(), dm.constrained.end(), 1));
  return dm;
}

Mat3 cell_jacobian(const MixedMesh& mesh, int cell, const Vec3& xi) {
  const auto grads = q1_gradients(mesh.dim, xi);
  const auto corners = mesh.cell_corners(cell);
  Mat3 J = Mat3::Identity();  // out-of-plane row/col stay identity in 2D
  J.topLeftCorner(mesh.dim, mesh.dim).setZero();
  for (size_t c = 0; c < corners.size(); ++c)
    J.topLeftCorner(mesh.dim, mesh.dim) +=
        corners[c].head(mesh.dim) * grads[c].head(mesh.dim).transpose();
  return J;
}

Vec3 cell_point(const MixedMesh& mesh, int cell, const Vec3& xi) {
  const auto vals = q1_values(mesh.dim, xi);
  const auto corners = mesh.cell_corners(cell);
  Vec3 x = Vec3::Zero();
  for (size_t c = 0; c < corners.size(); ++c) x += vals[c] * corners[c];
  return x;
}

FacetGeometry facet_area_and_normal(const MixedMesh& mesh,
                                    const Facet& facet) {
  const bool known = std::any_of(
      mesh.facets.begin(), mesh.facets.end(), [&](const Facet& f) {
        return f.cell == facet.cell && f.local_face == facet.local_face;
      });
  if (!known) {
    throw ConfigError("facet (cell " + std::to_string(facet.cell) + ", face " +
                      std::to_string(facet.local_face) +
                      ") is not a boundary facet");
  }
  const auto& face = face_rule(mesh.dim).faces[facet.local_face];
  FacetGeometry out;
  Vec3 n_accum = Vec3::Zero();
  for (size_t q = 0; q < face.xi.size(); ++q) {
    const Mat3 J = cell_jacobian(mesh, facet.cell, face.xi[q]);
    // Nanson: (non-unit outward normal) * dS = side * cof(J) e_axis * dS_ref
    Mat3 cof;
    if (mesh.dim == 2) {
      cof.setZero();
      cof(0, 0) = J(1, 1);
      cof(0, 1) = -J(1, 0);
      cof(1, 0) = -J(0, 1);
      cof(1, 1) = J(0, 0);
    } else {
      cof = J.determinant() * J.inverse().transpose();
    }
    const Vec3 v = face.side * cof.col(face.axis);
    out.measure += face.w[q] * v.norm();
    n_accum += v;
  }
  out.normal = n_accum.normalized();
  return out;
}

QuadCache::QuadCache(const MixedMesh& mesh) : rule_(&cell_rule(mesh.dim)) {
  const int dim = mesh.dim;
  n_cells_ = mesh.n_cells();
  n_q2_ = q2_nodes_per_cell(dim);
  n_q1_ = q1_nodes_per_cell(dim);
  const int nq = rule_->nq;
  jxw_.resize(static_cast<size_t>(n_cells_) * nq);
  pts_.resize(static_cast<size_t>(n_cells_) * nq);
  grad_q2_.resize(static_cast<size_t>(n_cells_) * nq * n_q2_);
  grad_q1_.resize(static_cast<size_t>(n_cells_) * nq * n_q1_);

  for (int c = 0; c < n_cells_; ++c) {
    for (int q = 0; q < nq; ++q) {
      const Mat3 J = cell_jacobian(mesh, c, rule_->xi[q]);
      const double det = dim == 2 ? J.topLeftCorner(2, 2).determinant()
                                  : J.determinant();
      if (!(det > 0.0)) {
        throw NumericError("non-positive geometric Jacobian in cell " +
                           std::to_string(c));
      }
      jxw_[c * nq + q] = rule_->w[q] * det;
      pts_[c * nq + q] = cell_point(mesh, c, rule_->xi[q]);
      Mat3 Jinv = Mat3::Identity();
      if (dim == 2) {
        Jinv.topLeftCorner(2, 2) = J.topLeftCorner(2, 2).inverse();
      } else {
        Jinv = J.inverse();
      }
      for (int a = 0; a < n_q2_; ++a)
        grad_q2_[(c * nq + q) * n_q2_ + a] =
            Jinv.transpose() * rule_->q2_grad[q][a];
      for (int b = 0; b < n_q1_; ++b)
        grad_q1_[(c * nq + q) * n_q1_ + b] =
            Jinv.transpose() * rule_->q1_grad[q][b];
    }
  }
}

}  // namespace sielast
