#pragma once

#include <functional>
#include <string>

#include "sielast/fem.hpp"
#include "sielast/material.hpp"
#include "sielast/mesh.hpp"

namespace sielast {

/// The five benchmark scenarios: three unit-square loadings, Cook's
/// membrane, and the twisting column.
enum class ScenarioName {
  UnitSquareBF,
  UnitSquareIV,
  UnitSquareTr,
  CooksMembrane,
  TwistingColumn
};

ScenarioName scenario_from_string(const std::string& name);
std::string to_string(ScenarioName name);

/// Declarative description of one benchmark run: geometry, material
/// constants, loads, initial velocity, and a desk-scale default
/// resolution/horizon. nu is a free parameter of every scenario.
struct Scenario {
  ScenarioName name = ScenarioName::UnitSquareBF;
  Geometry geometry = Geometry::UnitSquare;
  GridRefinement refinement;  // desk-scale default, overridable
  double E = 0.0;
  double nu = 0.4;
  double rho0 = 1.0;
  VolModel vol_model = VolModel::Quadratic;
  double kappa_scale = 2.0;  // benchmark tables list kappa at twice E/(3(1-2nu))
  Loads loads;
  std::function<Vec3(const Vec3&)> initial_velocity;  // may be empty
  double t_end = 0.0;  // default horizon

  MaterialParams material() const {
    return MaterialParams::from_E_nu(E, nu, rho0, vol_model, kappa_scale);
  }
};

/// Builds a scenario with its paper-table material constants:
///   UnitSquare*: E = 100, rho0 = 1, B = (0,-25t) / V0 = (0,-sin(pi X2/2))
///                / T = (0,-2.5) on the top edge;
///   CooksMembrane: E = 2500, rho0 = 0.1, T = (0,+62.5) on the right edge;
///   TwistingColumn: E = 1.2e7, rho0 = 1.1, V0 the sinusoidal twist.
Scenario make_scenario(ScenarioName name, double nu,
                       VolModel model = VolModel::Quadratic);

}  // namespace sielast
