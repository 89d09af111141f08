#pragma once

#include <array>
#include <vector>

#include "sielast/types.hpp"

namespace sielast {

// Reference cell is [-1,1]^dim. Node numbering is tensor-product
// lexicographic with x fastest: Q1 nodes at {-1,1}^dim, Q2 nodes at
// {-1,0,1}^dim. Local faces: face f fixes axis f/2 at side -1 (f even)
// or +1 (f odd).

int q2_nodes_per_cell(int dim);
int q1_nodes_per_cell(int dim);
int faces_per_cell(int dim);

/// Shape values of all Q2 (resp. Q1) basis functions at reference point xi.
std::vector<double> q2_values(int dim, const Vec3& xi);
std::vector<double> q1_values(int dim, const Vec3& xi);
/// Reference-coordinate gradients, one Vec3 per basis function (z = 0 in 2D).
std::vector<Vec3> q2_gradients(int dim, const Vec3& xi);
std::vector<Vec3> q1_gradients(int dim, const Vec3& xi);

/// Reference coordinates of the Q2 (resp. Q1) nodes in local numbering.
std::vector<Vec3> q2_node_coords(int dim);
std::vector<Vec3> q1_node_coords(int dim);

/// Tensor Gauss-Legendre rule, 3 points per axis (degree 5 per axis),
/// with shape tables evaluated at the quadrature points.
struct CellRule {
  int dim = 0;
  int nq = 0;
  std::vector<Vec3> xi;
  std::vector<double> w;
  std::vector<std::vector<double>> q2_val;  // [q][a]
  std::vector<std::vector<double>> q1_val;  // [q][b]
  std::vector<std::vector<Vec3>> q2_grad;   // [q][a], reference grads
  std::vector<std::vector<Vec3>> q1_grad;   // [q][b]
};
const CellRule& cell_rule(int dim);

/// Per-face tensor Gauss rule (3 points per in-face axis) with Q2/Q1 shape
/// tables at the face quadrature points and the fixed axis/side.
struct FaceRule {
  struct Face {
    int axis = 0;
    int side = 0;  // -1 or +1
    std::vector<Vec3> xi;
    std::vector<double> w;
    std::vector<std::vector<double>> q2_val;
    std::vector<std::vector<double>> q1_val;
  };
  std::vector<Face> faces;
};
const FaceRule& face_rule(int dim);

/// Q1 values interpolating at the Q2 node positions, [q2 node][q1 node];
/// used to sample pressure at velocity nodes for output.
const std::vector<std::vector<double>>& q1_at_q2_nodes(int dim);

}  // namespace sielast
