#include "viscodyn/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace viscodyn {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> t;
  std::string w;
  while (in >> w) t.push_back(w);
  return t;
}

double to_double(const std::string& s, int line) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (...) {
    throw ConfigError("line " + std::to_string(line) + ": expected a number, got '" + s + "'");
  }
  if (pos != s.size())
    throw ConfigError("line " + std::to_string(line) + ": trailing characters in '" + s + "'");
  return v;
}

int to_int(const std::string& s, int line) {
  const double v = to_double(s, line);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError("line " + std::to_string(line) + ": expected an integer, got '" + s + "'");
  return i;
}

}  // namespace

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");

  ScenarioConfig cfg;
  cfg.branches.clear();
  std::string raw;
  int lineno = 0;

  auto need = [&](const std::vector<std::string>& v, std::size_t n, const std::string& key) {
    if (v.size() != n)
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' expects " +
                        std::to_string(n) + " value(s)");
  };

  while (std::getline(in, raw)) {
    ++lineno;
    const std::size_t hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    const std::size_t eq = line.find('=');
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key;
    {
      std::istringstream ks(line.substr(0, eq));
      ks >> key;
      std::string extra;
      if (ks >> extra)
        throw ConfigError("line " + std::to_string(lineno) + ": malformed key");
    }
    const std::vector<std::string> val = tokens(line.substr(eq + 1));

    if (key == "geometry") {
      need(val, 1, key);
      if (val[0] == "box")
        cfg.geometry = GeometryKind::Box;
      else if (val[0] == "annulus")
        cfg.geometry = GeometryKind::Annulus;
      else
        throw ConfigError("line " + std::to_string(lineno) + ": unknown geometry '" + val[0] + "'");
    } else if (key == "box_min") {
      need(val, 3, key);
      for (int i = 0; i < 3; ++i) cfg.box_min[i] = to_double(val[i], lineno);
    } else if (key == "box_max") {
      need(val, 3, key);
      for (int i = 0; i < 3; ++i) cfg.box_max[i] = to_double(val[i], lineno);
    } else if (key == "inner_radius") {
      need(val, 1, key);
      cfg.inner_radius = to_double(val[0], lineno);
    } else if (key == "outer_radius") {
      need(val, 1, key);
      cfg.outer_radius = to_double(val[0], lineno);
    } else if (key == "length") {
      need(val, 1, key);
      cfg.length = to_double(val[0], lineno);
    } else if (key == "degree") {
      need(val, 1, key);
      cfg.degree = to_int(val[0], lineno);
    } else if (key == "elements") {
      need(val, 3, key);
      for (int i = 0; i < 3; ++i) cfg.elements[i] = to_int(val[i], lineno);
    } else if (key == "model") {
      need(val, 1, key);
      if (val[0] == "IPC")
        cfg.model = ModelKind::IPC;
      else if (val[0] == "HS")
        cfg.model = ModelKind::HS;
      else if (val[0] == "MIPC")
        cfg.model = ModelKind::MIPC;
      else
        throw ConfigError("line " + std::to_string(lineno) + ": unknown model '" + val[0] + "'");
    } else if (key == "c1") {
      need(val, 1, key);
      cfg.c1 = to_double(val[0], lineno);
    } else if (key == "c2") {
      need(val, 1, key);
      cfg.c2 = to_double(val[0], lineno);
    } else if (key == "rho0") {
      need(val, 1, key);
      cfg.rho0 = to_double(val[0], lineno);
    } else if (key == "branch") {
      need(val, 3, key);
      cfg.branches.push_back({to_double(val[0], lineno), to_double(val[1], lineno),
                              to_double(val[2], lineno)});
    } else if (key == "initial_velocity") {
      need(val, 1, key);
      if (val[0] == "zero")
        cfg.initial_velocity = InitialVelocity::Zero;
      else if (val[0] == "bending")
        cfg.initial_velocity = InitialVelocity::Bending;
      else if (val[0] == "torsion")
        cfg.initial_velocity = InitialVelocity::Torsion;
      else if (val[0] == "uniform")
        cfg.initial_velocity = InitialVelocity::Uniform;
      else
        throw ConfigError("line " + std::to_string(lineno) + ": unknown initial_velocity");
    } else if (key == "v0") {
      need(val, 1, key);
      cfg.v0 = to_double(val[0], lineno);
    } else if (key == "l0") {
      need(val, 1, key);
      cfg.l0 = to_double(val[0], lineno);
    } else if (key == "uniform_velocity") {
      need(val, 3, key);
      for (int i = 0; i < 3; ++i) cfg.uniform_velocity[i] = to_double(val[i], lineno);
    } else if (key == "bc") {
      need(val, 1, key);
      if (val[0] == "free")
        cfg.bc = BoundaryKind::Free;
      else if (val[0] == "clamp_zmin")
        cfg.bc = BoundaryKind::ClampZmin;
      else if (val[0] == "support")
        cfg.bc = BoundaryKind::Support;
      else
        throw ConfigError("line " + std::to_string(lineno) + ": unknown bc '" + val[0] + "'");
    } else if (key == "support_amplitude") {
      need(val, 1, key);
      cfg.support_amplitude = to_double(val[0], lineno);
    } else if (key == "support_omega") {
      need(val, 1, key);
      cfg.support_omega = to_double(val[0], lineno);
    } else if (key == "dt") {
      need(val, 1, key);
      cfg.dt = to_double(val[0], lineno);
    } else if (key == "t_end") {
      need(val, 1, key);
      cfg.t_end = to_double(val[0], lineno);
    } else if (key == "rho_inf") {
      need(val, 1, key);
      cfg.rho_inf = to_double(val[0], lineno);
    } else if (key == "pin_pressure") {
      need(val, 1, key);
      cfg.pin_pressure = to_int(val[0], lineno) != 0;
    } else if (key == "energies_csv") {
      need(val, 1, key);
      cfg.energies_csv = val[0];
    } else if (key == "force_csv") {
      cfg.force_csv = val.empty() ? "" : val[0];
      if (val.size() > 1)
        throw ConfigError("line " + std::to_string(lineno) + ": key 'force_csv' expects one value");
    } else if (key == "output_every") {
      need(val, 1, key);
      cfg.output_every = to_int(val[0], lineno);
    } else if (key == "snapshot_every") {
      need(val, 1, key);
      cfg.snapshot_every = to_int(val[0], lineno);
    } else if (key == "snapshot_basename") {
      need(val, 1, key);
      cfg.snapshot_basename = val[0];
    } else if (key == "threads") {
      need(val, 1, key);
      cfg.threads = to_int(val[0], lineno);
    } else {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }

  // validation
  if (cfg.branches.empty()) throw ConfigError("scenario needs at least one 'branch' line");
  if (!(cfg.c1 >= 0.0 && cfg.c2 >= 0.0 && cfg.c1 + cfg.c2 > 0.0))
    throw ConfigError("c1, c2 must be non-negative and not both zero");
  if (!(cfg.rho0 > 0.0)) throw ConfigError("rho0 must be positive");
  for (const auto& br : cfg.branches)
    if (!(br.mu > 0.0 && br.tau > 0.0 && br.beta_inf > 0.0))
      throw ConfigError("branch parameters (beta, mu, tau) must be positive");
  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_end >= 0.0)) throw ConfigError("t_end must be non-negative");
  if (!(cfg.rho_inf >= 0.0 && cfg.rho_inf <= 1.0)) throw ConfigError("rho_inf must be in [0,1]");
  if (cfg.output_every < 1) throw ConfigError("output_every must be >= 1");
  if (cfg.snapshot_every < 0) throw ConfigError("snapshot_every must be >= 0");
  if (cfg.threads < 1) throw ConfigError("threads must be >= 1");
  if (cfg.bc == BoundaryKind::Support && cfg.geometry != GeometryKind::Annulus)
    throw ConfigError("bc = support requires the annulus geometry");
  return cfg;
}

void save_scenario(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write scenario file '" + path + "'");
  out << "geometry = " << (cfg.geometry == GeometryKind::Box ? "box" : "annulus") << "\n";
  if (cfg.geometry == GeometryKind::Box) {
    out << "box_min = " << fmt(cfg.box_min[0]) << " " << fmt(cfg.box_min[1]) << " "
        << fmt(cfg.box_min[2]) << "\n";
    out << "box_max = " << fmt(cfg.box_max[0]) << " " << fmt(cfg.box_max[1]) << " "
        << fmt(cfg.box_max[2]) << "\n";
  } else {
    out << "inner_radius = " << fmt(cfg.inner_radius) << "\n";
    out << "outer_radius = " << fmt(cfg.outer_radius) << "\n";
    out << "length = " << fmt(cfg.length) << "\n";
  }
  out << "degree = " << cfg.degree << "\n";
  out << "elements = " << cfg.elements[0] << " " << cfg.elements[1] << " " << cfg.elements[2]
      << "\n";
  out << "model = "
      << (cfg.model == ModelKind::IPC ? "IPC" : cfg.model == ModelKind::HS ? "HS" : "MIPC")
      << "\n";
  out << "c1 = " << fmt(cfg.c1) << "\n";
  out << "c2 = " << fmt(cfg.c2) << "\n";
  out << "rho0 = " << fmt(cfg.rho0) << "\n";
  for (const auto& br : cfg.branches)
    out << "branch = " << fmt(br.beta_inf) << " " << fmt(br.mu) << " " << fmt(br.tau) << "\n";
  switch (cfg.initial_velocity) {
    case InitialVelocity::Zero:
      out << "initial_velocity = zero\n";
      break;
    case InitialVelocity::Bending:
      out << "initial_velocity = bending\n";
      break;
    case InitialVelocity::Torsion:
      out << "initial_velocity = torsion\n";
      break;
    case InitialVelocity::Uniform:
      out << "initial_velocity = uniform\n";
      break;
  }
  out << "v0 = " << fmt(cfg.v0) << "\n";
  out << "l0 = " << fmt(cfg.l0) << "\n";
  out << "uniform_velocity = " << fmt(cfg.uniform_velocity[0]) << " "
      << fmt(cfg.uniform_velocity[1]) << " " << fmt(cfg.uniform_velocity[2]) << "\n";
  out << "bc = "
      << (cfg.bc == BoundaryKind::Free ? "free"
          : cfg.bc == BoundaryKind::ClampZmin ? "clamp_zmin" : "support")
      << "\n";
  out << "support_amplitude = " << fmt(cfg.support_amplitude) << "\n";
  out << "support_omega = " << fmt(cfg.support_omega) << "\n";
  out << "dt = " << fmt(cfg.dt) << "\n";
  out << "t_end = " << fmt(cfg.t_end) << "\n";
  out << "rho_inf = " << fmt(cfg.rho_inf) << "\n";
  out << "pin_pressure = " << (cfg.pin_pressure ? 1 : 0) << "\n";
  out << "energies_csv = " << cfg.energies_csv << "\n";
  out << "force_csv = " << cfg.force_csv << "\n";
  out << "output_every = " << cfg.output_every << "\n";
  out << "snapshot_every = " << cfg.snapshot_every << "\n";
  out << "snapshot_basename = " << cfg.snapshot_basename << "\n";
  out << "threads = " << cfg.threads << "\n";
}

Material make_material(const ScenarioConfig& cfg) {
  Material m;
  m.kind = cfg.model;
  m.base = {cfg.c1, cfg.c2};
  m.branches = cfg.branches;
  m.rho0 = cfg.rho0;
  return m;
}

GeometryTemplate make_geometry(const ScenarioConfig& cfg) {
  GeometryTemplate g;
  g.kind = cfg.geometry;
  g.box_min = cfg.box_min;
  g.box_max = cfg.box_max;
  g.inner_radius = cfg.inner_radius;
  g.outer_radius = cfg.outer_radius;
  g.length = cfg.length;
  return g;
}

std::array<int, 3> internal_elements(const ScenarioConfig& cfg) {
  if (cfg.geometry == GeometryKind::Box) return cfg.elements;
  // config order (circumferential, radial, axial) -> internal (radial,
  // circumferential, axial)
  return {cfg.elements[1], cfg.elements[0], cfg.elements[2]};
}

std::vector<FaceMotion> make_boundary(const ScenarioConfig& cfg) {
  auto zero = [](double) { return Vec3d::Zero(); };
  switch (cfg.bc) {
    case BoundaryKind::Free:
      return {};
    case BoundaryKind::ClampZmin:
      return {FaceMotion{2, 0, zero, zero}};
    case BoundaryKind::Support: {
      const double U0 = cfg.support_amplitude;
      const double om = cfg.support_omega;
      FaceMotion inner{0, 0,
                       [U0, om](double t) { return Vec3d(U0 * std::sin(om * t), 0.0, 0.0); },
                       [U0, om](double t) { return Vec3d(U0 * om * std::cos(om * t), 0.0, 0.0); }};
      FaceMotion outer{0, 1, zero, zero};
      return {inner, outer};
    }
  }
  return {};
}

Eigen::MatrixX3d initial_conditions(const ScenarioConfig& cfg, const Mesh& mesh) {
  switch (cfg.initial_velocity) {
    case InitialVelocity::Zero:
      return Eigen::MatrixX3d::Zero(mesh.n_kin_nodes(), 3);
    case InitialVelocity::Bending: {
      const double v0 = cfg.v0, l0 = cfg.l0;
      return project_kinematic_field(
          mesh, [v0, l0](const Vec3d& X) { return Vec3d(v0 * X[2] / l0, 0.0, 0.0); });
    }
    case InitialVelocity::Torsion: {
      const double v0 = cfg.v0, l0 = cfg.l0;
      return project_kinematic_field(mesh, [v0, l0](const Vec3d& X) {
        const double mag = v0 * std::sin(M_PI * X[2] / (12.0 * l0));
        return Vec3d(-mag * X[1] / l0, mag * X[0] / l0, 0.0);
      });
    }
    case InitialVelocity::Uniform: {
      Eigen::MatrixX3d v(mesh.n_kin_nodes(), 3);
      v.rowwise() = cfg.uniform_velocity.transpose();
      return v;
    }
  }
  return Eigen::MatrixX3d::Zero(mesh.n_kin_nodes(), 3);
}

}  // namespace viscodyn
