#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <stdexcept>
#include <string>

namespace sielast {

using Vec = Eigen::VectorXd;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Raised for invalid user-facing configuration (bad scenario names,
/// out-of-range parameters, malformed config files).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a quadrature point sees det(F) <= 0 during assembly.
class InvertedElementError : public std::runtime_error {
 public:
  InvertedElementError(int cell, double jacobian)
      : std::runtime_error("inverted element " + std::to_string(cell) +
                           ": J = " + std::to_string(jacobian)),
        cell_index(cell),
        jacobian(jacobian) {}

  int cell_index;
  double jacobian;
};

/// Raised for numerical breakdowns outside user control (indefinite
/// operator in CG, singular amplification matrix, ...).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sielast
