#include "sielast/material.hpp"

namespace sielast {

std::pair<double, double> moduli_from_E_nu(double E, double nu,
                                           double kappa_scale) {
  if (!(E > 0.0)) {
    throw ConfigError("Young's modulus must be positive, got " +
                      std::to_string(E));
  }
  if (!(nu >= 0.0 && nu <= 0.5)) {
    throw ConfigError("Poisson ratio must lie in [0, 0.5], got " +
                      std::to_string(nu));
  }
  const double mu = E / (2.0 * (1.0 + nu));
  const double kappa =
      nu == 0.5 ? kInfiniteKappa : kappa_scale * E / (3.0 * (1.0 - 2.0 * nu));
  return {mu, kappa};
}

MaterialParams MaterialParams::from_E_nu(double E, double nu, double rho0,
                                         VolModel model, double kappa_scale) {
  if (!(rho0 > 0.0)) {
    throw ConfigError("reference density must be positive, got " +
                      std::to_string(rho0));
  }
  auto [mu, kappa] = moduli_from_E_nu(E, nu, kappa_scale);
  MaterialParams p;
  p.E = E;
  p.nu = nu;
  p.mu = mu;
  p.kappa = kappa;
  p.rho0 = rho0;
  p.vol_model = model;
  p.kappa_scale = kappa_scale;
  return p;
}

VolDerivatives volumetric_derivatives(double J, double kappa, VolModel model) {
  if (std::isinf(kappa)) {
    throw ConfigError(
        "raw volumetric derivatives are undefined for infinite kappa; use "
        "volumetric_derivatives_over_kappa");
  }
  switch (model) {
    case VolModel::Quadratic:
      return {0.5 * kappa * (J - 1.0) * (J - 1.0), kappa * (J - 1.0), kappa};
    case VolModel::Liu:
      if (!(J > 0.0)) {
        throw ConfigError("Liu volumetric model requires J > 0, got " +
                          std::to_string(J));
      }
      return {kappa * (J * std::log(J) - J + 1.0), kappa * std::log(J),
              kappa / J};
  }
  throw ConfigError("unknown volumetric model");
}

VolDerivativesOverKappa volumetric_derivatives_over_kappa(double J,
                                                          VolModel model) {
  switch (model) {
    case VolModel::Quadratic:
      return {J - 1.0, 1.0};
    case VolModel::Liu:
      if (!(J > 0.0)) {
        throw ConfigError("Liu volumetric model requires J > 0, got " +
                          std::to_string(J));
      }
      return {std::log(J), 1.0 / J};
  }
  throw ConfigError("unknown volumetric model");
}

WaveSpeeds wave_speeds(const MaterialParams& params, double J) {
  if (!(J > 0.0)) {
    throw ConfigError("wave speeds require J > 0, got " + std::to_string(J));
  }
  WaveSpeeds w;
  w.c_mu = std::sqrt(params.mu / params.rho0);
  if (params.incompressible()) {
    w.c_kappa = std::numeric_limits<double>::infinity();
  } else {
    const auto d = volumetric_derivatives(J, params.kappa, params.vol_model);
    const double kappa_inst = J * d.W_JJ;
    w.c_kappa = std::sqrt((kappa_inst + 4.0 / 3.0 * params.mu) / params.rho0);
  }
  return w;
}

}  // namespace sielast
