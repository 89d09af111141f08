#include "sielast/bench.hpp"

#include <cmath>

namespace sielast {

ScenarioName scenario_from_string(const std::string& name) {
  if (name == "unit_square_bf") return ScenarioName::UnitSquareBF;
  if (name == "unit_square_iv") return ScenarioName::UnitSquareIV;
  if (name == "unit_square_tr") return ScenarioName::UnitSquareTr;
  if (name == "cooks_membrane") return ScenarioName::CooksMembrane;
  if (name == "twisting_column") return ScenarioName::TwistingColumn;
  throw ConfigError("unknown scenario: " + name);
}

std::string to_string(ScenarioName name) {
  switch (name) {
    case ScenarioName::UnitSquareBF: return "unit_square_bf";
    case ScenarioName::UnitSquareIV: return "unit_square_iv";
    case ScenarioName::UnitSquareTr: return "unit_square_tr";
    case ScenarioName::CooksMembrane: return "cooks_membrane";
    case ScenarioName::TwistingColumn: return "twisting_column";
  }
  return "?";
}

Scenario make_scenario(ScenarioName name, double nu, VolModel model) {
  Scenario s;
  s.name = name;
  s.nu = nu;
  s.vol_model = model;
  switch (name) {
    case ScenarioName::UnitSquareBF:
      s.geometry = Geometry::UnitSquare;
      s.refinement = {16, 16, 1};
      s.E = 100.0;
      s.rho0 = 1.0;
      s.loads.body_force = [](const Vec3&, double t) {
        return Vec3(0.0, -25.0 * t, 0.0);
      };
      s.t_end = 0.1;
      break;
    case ScenarioName::UnitSquareIV:
      s.geometry = Geometry::UnitSquare;
      s.refinement = {16, 16, 1};
      s.E = 100.0;
      s.rho0 = 1.0;
      s.initial_velocity = [](const Vec3& X) {
        return Vec3(0.0, -std::sin(0.5 * M_PI * X[1]), 0.0);
      };
      s.t_end = 0.1;
      break;
    case ScenarioName::UnitSquareTr:
      s.geometry = Geometry::UnitSquare;
      s.refinement = {16, 16, 1};
      s.E = 100.0;
      s.rho0 = 1.0;
      s.loads.tractions[Tag::TractionLoaded] = Vec3(0.0, -2.5, 0.0);
      s.t_end = 0.1;
      break;
    case ScenarioName::CooksMembrane:
      s.geometry = Geometry::CooksMembrane;
      s.refinement = {8, 8, 1};
      s.E = 2500.0;
      s.rho0 = 0.1;
      s.loads.tractions[Tag::TractionLoaded] = Vec3(0.0, 62.5, 0.0);
      s.t_end = 1.0;
      break;
    case ScenarioName::TwistingColumn:
      s.geometry = Geometry::Column;
      s.refinement = {4, 4, 24};  // h = 0.5 cm
      s.E = 1.2e7;
      s.rho0 = 1.1;
      s.initial_velocity = [](const Vec3& X) {
        const double a = 1500.0 * std::sin(M_PI / 12.0 * X[2]);
        return Vec3(-a * X[1], a * X[0], 0.0);
      };
      s.t_end = 0.02;
      break;
  }
  return s;
}

}  // namespace sielast
