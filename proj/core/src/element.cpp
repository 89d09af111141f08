#include "sielast/element.hpp"

#include <cmath>

namespace sielast {

namespace {

// 1D quadratic Lagrange on nodes {-1, 0, 1}
inline double l2(int i, double x) {
  switch (i) {
    case 0: return 0.5 * x * (x - 1.0);
    case 1: return 1.0 - x * x;
    default: return 0.5 * x * (x + 1.0);
  }
}
inline double dl2(int i, double x) {
  switch (i) {
    case 0: return x - 0.5;
    case 1: return -2.0 * x;
    default: return x + 0.5;
  }
}

// 1D linear Lagrange on nodes {-1, 1}
inline double l1(int i, double x) { return i == 0 ? 0.5 * (1.0 - x) : 0.5 * (1.0 + x); }
inline double dl1(int i) { return i == 0 ? -0.5 : 0.5; }

}  // namespace

int q2_nodes_per_cell(int dim) { return dim == 2 ? 9 : 27; }
int q1_nodes_per_cell(int dim) { return dim == 2 ? 4 : 8; }
int faces_per_cell(int dim) { return 2 * dim; }

std::vector<double> q2_values(int dim, const Vec3& xi) {
  std::vector<double> out(q2_nodes_per_cell(dim));
  if (dim == 2) {
    for (int j = 0, a = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i, ++a) out[a] = l2(i, xi[0]) * l2(j, xi[1]);
  } else {
    for (int k = 0, a = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i, ++a)
          out[a] = l2(i, xi[0]) * l2(j, xi[1]) * l2(k, xi[2]);
  }
  return out;
}

std::vector<double> q1_values(int dim, const Vec3& xi) {
  std::vector<double> out(q1_nodes_per_cell(dim));
  if (dim == 2) {
    for (int j = 0, a = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i, ++a) out[a] = l1(i, xi[0]) * l1(j, xi[1]);
  } else {
    for (int k = 0, a = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i, ++a)
          out[a] = l1(i, xi[0]) * l1(j, xi[1]) * l1(k, xi[2]);
  }
  return out;
}

std::vector<Vec3> q2_gradients(int dim, const Vec3& xi) {
  std::vector<Vec3> out(q2_nodes_per_cell(dim), Vec3::Zero());
  if (dim == 2) {
    for (int j = 0, a = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i, ++a) {
        out[a][0] = dl2(i, xi[0]) * l2(j, xi[1]);
        out[a][1] = l2(i, xi[0]) * dl2(j, xi[1]);
      }
  } else {
    for (int k = 0, a = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i, ++a) {
          out[a][0] = dl2(i, xi[0]) * l2(j, xi[1]) * l2(k, xi[2]);
          out[a][1] = l2(i, xi[0]) * dl2(j, xi[1]) * l2(k, xi[2]);
          out[a][2] = l2(i, xi[0]) * l2(j, xi[1]) * dl2(k, xi[2]);
        }
  }
  return out;
}

std::vector<Vec3> q1_gradients(int dim, const Vec3& xi) {
  std::vector<Vec3> out(q1_nodes_per_cell(dim), Vec3::Zero());
  if (dim == 2) {
    for (int j = 0, a = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i, ++a) {
        out[a][0] = dl1(i) * l1(j, xi[1]);
        out[a][1] = l1(i, xi[0]) * dl1(j);
      }
  } else {
    for (int k = 0, a = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i, ++a) {
          out[a][0] = dl1(i) * l1(j, xi[1]) * l1(k, xi[2]);
          out[a][1] = l1(i, xi[0]) * dl1(j) * l1(k, xi[2]);
          out[a][2] = l1(i, xi[0]) * l1(j, xi[1]) * dl1(k);
        }
  }
  return out;
}

std::vector<Vec3> q2_node_coords(int dim) {
  static const double c[3] = {-1.0, 0.0, 1.0};
  std::vector<Vec3> out;
  if (dim == 2) {
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) out.emplace_back(c[i], c[j], 0.0);
  } else {
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) out.emplace_back(c[i], c[j], c[k]);
  }
  return out;
}

std::vector<Vec3> q1_node_coords(int dim) {
  static const double c[2] = {-1.0, 1.0};
  std::vector<Vec3> out;
  if (dim == 2) {
    for (int j = 0; j < 2; ++j)
      for (int i = 0; i < 2; ++i) out.emplace_back(c[i], c[j], 0.0);
  } else {
    for (int k = 0; k < 2; ++k)
      for (int j = 0; j < 2; ++j)
        for (int i = 0; i < 2; ++i) out.emplace_back(c[i], c[j], c[k]);
  }
  return out;
}

namespace {

const double kGauss3Pts[3] = {-std::sqrt(3.0 / 5.0), 0.0, std::sqrt(3.0 / 5.0)};
const double kGauss3Wts[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

CellRule build_cell_rule(int dim) {
  CellRule r;
  r.dim = dim;
  if (dim == 2) {
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        r.xi.emplace_back(kGauss3Pts[i], kGauss3Pts[j], 0.0);
        r.w.push_back(kGauss3Wts[i] * kGauss3Wts[j]);
      }
  } else {
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
          r.xi.emplace_back(kGauss3Pts[i], kGauss3Pts[j], kGauss3Pts[k]);
          r.w.push_back(kGauss3Wts[i] * kGauss3Wts[j] * kGauss3Wts[k]);
        }
  }
  r.nq = static_cast<int>(r.xi.size());
  for (const Vec3& p : r.xi) {
    r.q2_val.push_back(q2_values(dim, p));
    r.q1_val.push_back(q1_values(dim, p));
    r.q2_grad.push_back(q2_gradients(dim, p));
    r.q1_grad.push_back(q1_gradients(dim, p));
  }
  return r;
}

FaceRule build_face_rule(int dim) {
  FaceRule fr;
  for (int f = 0; f < faces_per_cell(dim); ++f) {
    FaceRule::Face face;
    face.axis = f / 2;
    face.side = (f % 2 == 0) ? -1 : +1;
    const int t0 = (face.axis + 1) % dim;
    const int t1 = (face.axis + 2) % dim;  // == t0 in 2D, unused there
    if (dim == 2) {
      for (int i = 0; i < 3; ++i) {
        Vec3 p = Vec3::Zero();
        p[face.axis] = face.side;
        p[t0] = kGauss3Pts[i];
        face.xi.push_back(p);
        face.w.push_back(kGauss3Wts[i]);
      }
    } else {
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
          Vec3 p = Vec3::Zero();
          p[face.axis] = face.side;
          p[t0] = kGauss3Pts[i];
          p[t1] = kGauss3Pts[j];
          face.xi.push_back(p);
          face.w.push_back(kGauss3Wts[i] * kGauss3Wts[j]);
        }
    }
    for (const Vec3& p : face.xi) {
      face.q2_val.push_back(q2_values(dim, p));
      face.q1_val.push_back(q1_values(dim, p));
    }
    fr.faces.push_back(std::move(face));
  }
  return fr;
}

std::vector<std::vector<double>> build_q1_at_q2(int dim) {
  std::vector<std::vector<double>> out;
  for (const Vec3& p : q2_node_coords(dim)) out.push_back(q1_values(dim, p));
  return out;
}

}  // namespace

const CellRule& cell_rule(int dim) {
  static const CellRule r2 = build_cell_rule(2);
  static const CellRule r3 = build_cell_rule(3);
  return dim == 2 ? r2 : r3;
}

const FaceRule& face_rule(int dim) {
  static const FaceRule f2 = build_face_rule(2);
  static const FaceRule f3 = build_face_rule(3);
  return dim == 2 ? f2 : f3;
}

const std::vector<std::vector<double>>& q1_at_q2_nodes(int dim) {
  static const auto t2 = build_q1_at_q2(2);
  static const auto t3 = build_q1_at_q2(3);
  return dim == 2 ? t2 : t3;
}

}  // namespace sielast
