#pragma once

#include <cmath>
#include <limits>
#include <utility>

#include "sielast/types.hpp"

namespace sielast {

/// Volumetric strain-energy model. Quadratic has a linear first derivative
/// in J; Liu has W_JJ = kappa/J and therefore a constant instantaneous
/// bulk modulus J*W_JJ = kappa.
enum class VolModel { Quadratic, Liu };

/// Distinguished bulk modulus of a fully incompressible material.
inline constexpr double kInfiniteKappa = std::numeric_limits<double>::infinity();

/// Constitutive constants of the modified Neo-Hookean model, in CGS units
/// (dyn/cm^2 moduli, g/cm^3 density).
struct MaterialParams {
  double E = 0.0;
  double nu = 0.0;
  double mu = 0.0;
  double kappa = 0.0;  // kInfiniteKappa when nu == 0.5
  double rho0 = 1.0;
  VolModel vol_model = VolModel::Quadratic;
  double kappa_scale = 1.0;

  bool incompressible() const { return std::isinf(kappa); }

  /// 1/kappa, exactly zero in the incompressible limit. Every assembled
  /// quantity uses this (or the kappa-divided energy derivatives), never
  /// kappa itself.
  double inv_kappa() const { return incompressible() ? 0.0 : 1.0 / kappa; }

  static MaterialParams from_E_nu(double E, double nu, double rho0,
                                  VolModel model = VolModel::Quadratic,
                                  double kappa_scale = 1.0);
};

/// mu = E / (2(1+nu)), kappa = kappa_scale * E / (3(1-2nu)); kappa is
/// infinite at nu = 0.5. Throws ConfigError outside 0 <= nu <= 0.5 or E <= 0.
std::pair<double, double> moduli_from_E_nu(double E, double nu,
                                           double kappa_scale = 1.0);

/// Per-quadrature-point kinematic bundle. In 2D everything is the in-plane
/// block of the plane-strain embedding: F has a unit out-of-plane stretch,
/// J = det(F_2x2), and the 3D contraction F:F carries an implicit +1.
template <int dim>
struct Kinematics {
  using Mat = Eigen::Matrix<double, dim, dim>;

  Mat F;       // deformation gradient, in-plane block for dim == 2
  double J;    // det(F), equals the full 3D determinant in plane strain
  Mat H;       // cofactor J * F^{-T}, in-plane block for dim == 2
  double ff3;  // 3D-embedded F:F (adds +1 for dim == 2)

  /// F-bar contraction J^{-2/3} F:F used by the deviatoric energy.
  double fbar_norm2() const { return std::pow(J, -2.0 / 3.0) * ff3; }
};

/// Builds F = I + gradU, J, and H via explicit cofactor formulas, which
/// stay valid at J <= 0; callers detect inversion from J.
template <int dim>
Kinematics<dim> kinematics(const Eigen::Matrix<double, dim, dim>& grad_u);

template <>
inline Kinematics<2> kinematics(const Mat2& grad_u) {
  Kinematics<2> k;
  k.F = Mat2::Identity() + grad_u;
  k.J = k.F(0, 0) * k.F(1, 1) - k.F(0, 1) * k.F(1, 0);
  k.H << k.F(1, 1), -k.F(1, 0), -k.F(0, 1), k.F(0, 0);
  k.ff3 = k.F.squaredNorm() + 1.0;
  return k;
}

template <>
inline Kinematics<3> kinematics(const Mat3& grad_u) {
  Kinematics<3> k;
  k.F = Mat3::Identity() + grad_u;
  const Mat3& F = k.F;
  k.H(0, 0) = F(1, 1) * F(2, 2) - F(1, 2) * F(2, 1);
  k.H(0, 1) = F(1, 2) * F(2, 0) - F(1, 0) * F(2, 2);
  k.H(0, 2) = F(1, 0) * F(2, 1) - F(1, 1) * F(2, 0);
  k.H(1, 0) = F(0, 2) * F(2, 1) - F(0, 1) * F(2, 2);
  k.H(1, 1) = F(0, 0) * F(2, 2) - F(0, 2) * F(2, 0);
  k.H(1, 2) = F(0, 1) * F(2, 0) - F(0, 0) * F(2, 1);
  k.H(2, 0) = F(0, 1) * F(1, 2) - F(0, 2) * F(1, 1);
  k.H(2, 1) = F(0, 2) * F(1, 0) - F(0, 0) * F(1, 2);
  k.H(2, 2) = F(0, 0) * F(1, 1) - F(0, 1) * F(1, 0);
  k.J = F(0, 0) * k.H(0, 0) + F(0, 1) * k.H(0, 1) + F(0, 2) * k.H(0, 2);
  k.ff3 = F.squaredNorm();
  return k;
}

/// Deviatoric energy density and PK1 stress. P holds the in-plane block;
/// p_out_of_plane is the 33 component of the plane-strain embedding (zero
/// contribution to the 2D weak form, needed for the full P:F contraction).
template <int dim>
struct DeviatoricState {
  double W;
  Eigen::Matrix<double, dim, dim> P;
  double p_out_of_plane;  // only meaningful for dim == 2
};

/// W_dev = (mu/2)(J^{-2/3} F:F - 3); P_dev = mu J^{-2/3}(F - (F:F)/3 F^{-T}),
/// with F:F and F^{-T} in the 3D plane-strain embedding for dim == 2.
/// Requires J > 0.
template <int dim>
inline DeviatoricState<dim> deviatoric_pk1(const Kinematics<dim>& kin,
                                           double mu) {
  DeviatoricState<dim> out;
  const double jm23 = std::pow(kin.J, -2.0 / 3.0);
  out.W = 0.5 * mu * (jm23 * kin.ff3 - 3.0);
  // F^{-T} = H / J
  out.P = mu * jm23 * (kin.F - (kin.ff3 / 3.0) * kin.H / kin.J);
  if constexpr (dim == 2) {
    // embedded F33 = 1, H33 = J
    out.p_out_of_plane = mu * jm23 * (1.0 - kin.ff3 / 3.0);
  } else {
    out.p_out_of_plane = 0.0;
  }
  return out;
}

/// Volumetric energy and its first two J-derivatives for finite kappa.
/// Quadratic: (kappa/2 (J-1)^2, kappa (J-1), kappa).
/// Liu:       (kappa (J ln J - J + 1), kappa ln J, kappa / J), J > 0.
struct VolDerivatives {
  double W;
  double W_J;
  double W_JJ;
};

VolDerivatives volumetric_derivatives(double J, double kappa, VolModel model);

/// The kappa-divided derivatives W_J / kappa and W_JJ / kappa, finite for
/// both models and for infinite kappa; this is the form assembly consumes.
struct VolDerivativesOverKappa {
  double W_J;   // (J-1) or ln(J)
  double W_JJ;  // 1 or 1/J
};

VolDerivativesOverKappa volumetric_derivatives_over_kappa(double J,
                                                          VolModel model);

/// Shear and bulk wave speeds: c_mu = sqrt(mu/rho0) and
/// c_kappa = sqrt((J W_JJ + 4/3 mu)/rho0); c_kappa is infinite for
/// incompressible materials. J W_JJ is the instantaneous bulk modulus
/// (constant and equal to kappa under the Liu model).
struct WaveSpeeds {
  double c_mu;
  double c_kappa;
};

WaveSpeeds wave_speeds(const MaterialParams& params, double J = 1.0);

}  // namespace sielast
