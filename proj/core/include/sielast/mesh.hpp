#pragma once

#include <map>
#include <string>
#include <vector>

#include "sielast/element.hpp"
#include "sielast/types.hpp"

namespace sielast {

enum class Tag { Fixed, TractionLoaded, Free };
enum class Geometry { UnitSquare, CooksMembrane, Column };

Tag tag_from_string(const std::string& name);
Geometry geometry_from_string(const std::string& name);

/// Per-axis element counts for structured grids (nz ignored in 2D).
struct GridRefinement {
  int nx = 1;
  int ny = 1;
  int nz = 1;
};

/// A boundary facet of a cell, identified by cell index and local face.
struct Facet {
  int cell = 0;
  int local_face = 0;
  Tag tag = Tag::Free;
};

/// Structured Taylor-Hood mesh: Q2 geometry/velocity nodes with separately
/// numbered Q1 pressure nodes. Connectivity is tensor-lexicographic and the
/// Q1 corners of each cell coincide geometrically with the Q2 corner nodes.
struct MixedMesh {
  int dim = 2;
  Geometry geometry = Geometry::UnitSquare;
  std::vector<Vec3> nodes;           // Q2 node coordinates (z = 0 in 2D)
  std::vector<Vec3> pressure_nodes;  // Q1 node coordinates
  std::vector<std::vector<int>> cells_q2;
  std::vector<std::vector<int>> cells_q1;
  std::vector<Facet> facets;
  double h_min = 0.0;

  int n_cells() const { return static_cast<int>(cells_q2.size()); }
  int n_q2() const { return static_cast<int>(nodes.size()); }
  int n_q1() const { return static_cast<int>(pressure_nodes.size()); }

  /// Corner coordinates of a cell in local Q1 ordering.
  std::vector<Vec3> cell_corners(int cell) const;
};

/// UnitSquare: [0,1]^2, bottom Fixed, top TractionLoaded, sides Free.
/// CooksMembrane: bilinear map of [0,1]^2 onto the 48 x 44/60 trapezoid,
///   left edge Fixed, right edge TractionLoaded.
/// Column: [-1,1]^2 x [0,12] prism, base (X3 = 0) Fixed, rest Free.
MixedMesh generate_mesh(Geometry geometry, const GridRefinement& refinement);

/// Velocity/pressure dof numbering with Dirichlet bookkeeping. Velocity
/// dofs are numbered per Q2 node with the dim components consecutive;
/// pressure dofs are the Q1 node indices. The pressure space carries no
/// Dirichlet constraints.
struct DofMap {
  int dim = 2;
  int n_velocity_dofs = 0;
  int n_pressure_dofs = 0;
  std::vector<std::vector<int>> cell_vdofs;
  std::vector<std::vector<int>> cell_pdofs;
  std::vector<char> constrained;       // size n_velocity_dofs
  std::vector<double> constrained_value;
  int n_constrained = 0;

  bool is_constrained(int dof) const { return constrained[dof] != 0; }
};

/// Builds the Taylor-Hood dof map; every velocity dof on a facet whose tag
/// appears in `prescribed` is constrained to the given vector's component.
/// The default prescribes zero velocity on Fixed facets.
DofMap taylor_hood_dofmap(
    const MixedMesh& mesh,
    const std::map<Tag, Vec3>& prescribed = {{Tag::Fixed, Vec3::Zero()}});

/// Reference-configuration facet measure and unit outward normal. The facet
/// must be a boundary facet of the mesh; interior (cell, face) pairs are a
/// usage error.
struct FacetGeometry {
  double measure = 0.0;
  Vec3 normal = Vec3::Zero();
};
FacetGeometry facet_area_and_normal(const MixedMesh& mesh, const Facet& facet);

/// Geometric map helpers (Q1 isoparametric; exact for the structured
/// geometries used here).
Mat3 cell_jacobian(const MixedMesh& mesh, int cell, const Vec3& xi);
Vec3 cell_point(const MixedMesh& mesh, int cell, const Vec3& xi);

/// Physical-gradient and measure tables at every cell quadrature point,
/// shared by assembly and diagnostics. Immutable after construction.
class QuadCache {
 public:
  explicit QuadCache(const MixedMesh& mesh);

  int nq() const { return rule_->nq; }
  int n_cells() const { return n_cells_; }
  const CellRule& rule() const { return *rule_; }

  double jxw(int cell, int q) const { return jxw_[cell * nq() + q]; }
  /// Physical gradients of the Q2 (resp. Q1) basis, [cell][q][node].
  const Vec3& grad_q2(int cell, int q, int a) const {
    return grad_q2_[(cell * nq() + q) * n_q2_ + a];
  }
  const Vec3& grad_q1(int cell, int q, int b) const {
    return grad_q1_[(cell * nq() + q) * n_q1_ + b];
  }
  /// Physical position of a quadrature point in the reference configuration.
  const Vec3& point(int cell, int q) const { return pts_[cell * nq() + q]; }

 private:
  const CellRule* rule_;
  int n_cells_ = 0;
  int n_q2_ = 0;
  int n_q1_ = 0;
  std::vector<double> jxw_;
  std::vector<Vec3> grad_q2_;
  std::vector<Vec3> grad_q1_;
  std::vector<Vec3> pts_;
};

}  // namespace sielast
