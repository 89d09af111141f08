#include "sielast/io.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace sielast {

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : path_(path), out_(path), n_columns_(columns.size()) {
  if (!out_) throw ConfigError("cannot open " + path + " for writing");
  for (size_t i = 0; i < columns.size(); ++i) {
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
  }
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void CsvWriter::write_row(const std::vector<double>& values) {
  std::vector<std::string> cells(values.size());
  std::transform(values.begin(), values.end(), cells.begin(), format);
  write_row(cells);
}

void CsvWriter::write_row(const std::vector<std::string>& values) {
  if (values.size() != n_columns_) {
    throw ConfigError("CSV row width does not match header");
  }
  for (size_t i = 0; i < values.size(); ++i) {
    out_ << values[i] << (i + 1 < values.size() ? "," : "\n");
  }
  out_.flush();
}

namespace {

// local sub-cell corner patterns in Q2 lexicographic node numbering
const int kSub2[4][4] = {
    {0, 1, 4, 3}, {1, 2, 5, 4}, {3, 4, 7, 6}, {4, 5, 8, 7}};

int hex_id(int i, int j, int k) { return (k * 3 + j) * 3 + i; }

}  // namespace

void write_vtk(const std::string& path, const MixedMesh& mesh, const Vec& U,
               const Vec& V, const Vec& p,
               const std::vector<double>& cell_jacobian_min,
               const std::string& title) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open " + path + " for writing");
  const int dim = mesh.dim;
  const int n_pts = mesh.n_q2();

  out << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << n_pts << " double\n";
  for (const Vec3& x : mesh.nodes) {
    out << CsvWriter::format(x[0]) << ' ' << CsvWriter::format(x[1]) << ' '
        << CsvWriter::format(x[2]) << '\n';
  }

  const int subs = dim == 2 ? 4 : 8;
  const int corners = dim == 2 ? 4 : 8;
  const int n_cells = mesh.n_cells() * subs;
  out << "CELLS " << n_cells << ' ' << n_cells * (corners + 1) << '\n';
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& cell = mesh.cells_q2[c];
    if (dim == 2) {
      for (const auto& sub : kSub2) {
        out << 4;
        for (int s : sub) out << ' ' << cell[s];
        out << '\n';
      }
    } else {
      for (int ok = 0; ok < 2; ++ok)
        for (int oj = 0; oj < 2; ++oj)
          for (int oi = 0; oi < 2; ++oi) {
            out << 8 << ' ' << cell[hex_id(oi, oj, ok)] << ' '
                << cell[hex_id(oi + 1, oj, ok)] << ' '
                << cell[hex_id(oi + 1, oj + 1, ok)] << ' '
                << cell[hex_id(oi, oj + 1, ok)] << ' '
                << cell[hex_id(oi, oj, ok + 1)] << ' '
                << cell[hex_id(oi + 1, oj, ok + 1)] << ' '
                << cell[hex_id(oi + 1, oj + 1, ok + 1)] << ' '
                << cell[hex_id(oi, oj + 1, ok + 1)] << '\n';
          }
    }
  }
  out << "CELL_TYPES " << n_cells << '\n';
  const int vtk_type = dim == 2 ? 9 : 12;  // VTK_QUAD / VTK_HEXAHEDRON
  for (int i = 0; i < n_cells; ++i) out << vtk_type << '\n';

  auto write_vector_field = [&](const char* name, const Vec& field) {
    out << "VECTORS " << name << " double\n";
    for (int n = 0; n < n_pts; ++n) {
      double comp[3] = {0.0, 0.0, 0.0};
      for (int k = 0; k < dim; ++k) comp[k] = field[n * dim + k];
      out << CsvWriter::format(comp[0]) << ' ' << CsvWriter::format(comp[1])
          << ' ' << CsvWriter::format(comp[2]) << '\n';
    }
  };

  out << "POINT_DATA " << n_pts << '\n';
  write_vector_field("displacement", U);
  write_vector_field("velocity", V);

  // pressure: Q1 interpolated to the Q2 nodes (cell-averaged on shared nodes)
  Vec p_at_q2 = Vec::Zero(n_pts);
  Eigen::VectorXi touch = Eigen::VectorXi::Zero(n_pts);
  const auto& interp = q1_at_q2_nodes(dim);
  for (int c = 0; c < mesh.n_cells(); ++c) {
    const auto& q2c = mesh.cells_q2[c];
    const auto& q1c = mesh.cells_q1[c];
    for (size_t a = 0; a < q2c.size(); ++a) {
      double v = 0.0;
      for (size_t b = 0; b < q1c.size(); ++b) v += interp[a][b] * p[q1c[b]];
      p_at_q2[q2c[a]] += v;
      touch[q2c[a]] += 1;
    }
  }
  out << "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int n = 0; n < n_pts; ++n) {
    out << CsvWriter::format(p_at_q2[n] / std::max(1, touch[n])) << '\n';
  }

  out << "CELL_DATA " << n_cells << '\n';
  out << "SCALARS jacobian_min double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < mesh.n_cells(); ++c) {
    for (int s = 0; s < subs; ++s) {
      out << CsvWriter::format(cell_jacobian_min[c]) << '\n';
    }
  }
}

KeyValueConfig KeyValueConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_string(ss.str());
}

KeyValueConfig KeyValueConfig::parse_string(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) +
                        " is not key = value: " + line);
    }
    cfg.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  map_[key] = value;
}

bool KeyValueConfig::has(const std::string& key) const {
  return map_.count(key) != 0;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = map_.find(key);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

double KeyValueConfig::get_double(const std::string& key) const {
  const auto v = get(key);
  if (!v) throw ConfigError("missing config key: " + key);
  try {
    size_t pos = 0;
    const double d = std::stod(*v, &pos);
    if (pos != v->size()) throw std::invalid_argument("");
    return d;
  } catch (const std::exception&) {
    throw ConfigError("config key " + key + " is not a number: " + *v);
  }
}

int KeyValueConfig::get_int(const std::string& key) const {
  const double d = get_double(key);
  const int i = static_cast<int>(d);
  if (static_cast<double>(i) != d) {
    throw ConfigError("config key " + key + " is not an integer");
  }
  return i;
}

bool KeyValueConfig::get_bool(const std::string& key) const {
  const auto v = get(key);
  if (!v) throw ConfigError("missing config key: " + key);
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError("config key " + key + " is not a boolean: " + *v);
}

GridRefinement parse_refinement(const std::string& text) {
  GridRefinement r;
  int vals[3] = {0, 0, 0};
  int n = 0;
  std::string cur;
  for (char ch : text + "x") {
    if (ch == 'x' || ch == 'X') {
      if (cur.empty() || n >= 3) throw ConfigError("bad refinement: " + text);
      vals[n++] = std::stoi(cur);
      cur.clear();
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      cur += ch;
    } else {
      throw ConfigError("bad refinement: " + text);
    }
  }
  if (n < 2) throw ConfigError("refinement needs at least two axes: " + text);
  r.nx = vals[0];
  r.ny = vals[1];
  r.nz = n == 3 ? vals[2] : 1;
  return r;
}

void RunConfig::apply(const KeyValueConfig& cfg) {
  for (const auto& [key, value] : cfg.entries()) {
    if (key == "scenario.name") scenario = value;
    else if (key == "scenario.nu") nu = cfg.get_double(key);
    else if (key == "scenario.vol_model") vol_model = value;
    else if (key == "scenario.kappa_scale") kappa_scale = cfg.get_double(key);
    else if (key == "scenario.refine") refine = value;
    else if (key == "scheme.name") scheme = value;
    else if (key == "scheme.dt") dt = cfg.get_double(key);
    else if (key == "scheme.cfl") cfl = cfg.get_double(key);
    else if (key == "scheme.t_end") t_end = cfg.get_double(key);
    else if (key == "scheme.startup") startup = value;
    else if (key == "solver.tol") solver_tol = cfg.get_double(key);
    else if (key == "solver.maxit") solver_maxit = cfg.get_int(key);
    else if (key == "solver.restart") solver_restart = cfg.get_int(key);
    else if (key == "solver.precond") precond = value;
    else if (key == "output.dir") out_dir = value;
    else if (key == "output.stride") snapshot_stride = cfg.get_int(key);
    else if (key == "run.deterministic") deterministic = cfg.get_bool(key);
    else if (key == "run.threads") threads = cfg.get_int(key);
    else if (key == "fem.paper_literal_blocks")
      paper_literal_blocks = cfg.get_bool(key);
    else
      throw ConfigError("unknown config key: " + key);
  }
}

}  // namespace sielast
