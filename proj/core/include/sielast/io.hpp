#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sielast/mesh.hpp"
#include "sielast/types.hpp"

namespace sielast {

/// Plain CSV with a fixed header; doubles are printed with 17 significant
/// digits so reruns diff bit-exactly.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void write_row(const std::vector<double>& values);
  void write_row(const std::vector<std::string>& values);
  const std::string& path() const { return path_; }

  static std::string format(double v);

 private:
  std::string path_;
  std::ofstream out_;
  size_t n_columns_;
};

/// Legacy ASCII VTK unstructured grid. Q2 cells are split into 2^dim
/// linear sub-cells so mid-edge data renders; point data carries
/// displacement, velocity, and pressure (Q1 interpolated to the Q2 nodes),
/// cell data the per-cell minimum Jacobian repeated over sub-cells.
void write_vtk(const std::string& path, const MixedMesh& mesh, const Vec& U,
               const Vec& V, const Vec& p,
               const std::vector<double>& cell_jacobian_min,
               const std::string& title = "sielast snapshot");

/// Flat key = value configuration with '#' comments and section-prefixed
/// keys (scenario.*, scheme.*, solver.*, output.*, run.*, fem.*).
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  static KeyValueConfig parse_file(const std::string& path);
  static KeyValueConfig parse_string(const std::string& text);

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;
  std::optional<std::string> get(const std::string& key) const;
  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  const std::map<std::string, std::string>& entries() const { return map_; }

 private:
  std::map<std::string, std::string> map_;
};

/// Resolved options of one CLI run; parseable from a config file with
/// command-line flags taking precedence.
struct RunConfig {
  std::string scenario = "unit_square_bf";
  double nu = 0.4;
  std::string vol_model = "quadratic";
  std::optional<double> kappa_scale;  // scenario default when unset
  std::string refine;                 // "16x16" / "4x4x24"; scenario default when empty
  std::string scheme = "febdf2";
  std::optional<double> dt;
  std::optional<double> cfl;
  std::optional<double> t_end;
  std::string startup = "semi_implicit_euler";
  double solver_tol = 1e-10;
  int solver_maxit = 500;
  int solver_restart = 50;
  std::string precond = "ic0";
  std::string out_dir = "out";
  int snapshot_stride = 0;  // 0: no VTK snapshots
  bool deterministic = false;
  bool paper_literal_blocks = false;
  int threads = 1;

  void apply(const KeyValueConfig& cfg);
};

/// Parses "16x16" or "4x4x24" into per-axis element counts.
GridRefinement parse_refinement(const std::string& text);

}  // namespace sielast
