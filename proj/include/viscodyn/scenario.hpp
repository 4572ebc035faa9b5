#ifndef VISCODYN_SCENARIO_HPP
#define VISCODYN_SCENARIO_HPP

#include <array>
#include <string>
#include <vector>

#include "viscodyn/assembly.hpp"
#include "viscodyn/mesh.hpp"

namespace viscodyn {

enum class InitialVelocity { Zero, Bending, Torsion, Uniform };
enum class BoundaryKind { Free, ClampZmin, Support };

/// Everything needed to run one benchmark, parsed from a key = value file.
/// For the annulus the element counts are listed in the order
/// (circumferential, radial, axial).
struct ScenarioConfig {
  // geometry + discretization
  GeometryKind geometry = GeometryKind::Box;
  Vec3d box_min = Vec3d(-0.5, -0.5, 0.0);
  Vec3d box_max = Vec3d(0.5, 0.5, 6.0);
  double inner_radius = 0.1;
  double outer_radius = 0.25;
  double length = 0.2;
  int degree = 1;
  std::array<int, 3> elements = {1, 1, 6};

  // material
  ModelKind model = ModelKind::HS;
  double c1 = 1.7e7 / 6.0;
  double c2 = 1.7e7 / 6.0;
  double rho0 = 1.1e3;
  std::vector<ViscousBranch> branches;

  // initial and boundary conditions
  InitialVelocity initial_velocity = InitialVelocity::Zero;
  double v0 = 0.0;           // bending slope scale / torsion amplitude
  double l0 = 1.0;
  Vec3d uniform_velocity = Vec3d::Zero();
  BoundaryKind bc = BoundaryKind::Free;
  double support_amplitude = 5.625e-3;
  double support_omega = 5.0;

  // time stepping
  double dt = 1e-3;
  double t_end = 1.0;
  double rho_inf = 1.0;
  bool pin_pressure = false;

  // outputs
  std::string energies_csv = "energies.csv";
  std::string force_csv;            // empty: no force output
  int output_every = 1;
  int snapshot_every = 0;           // 0: no field snapshots
  std::string snapshot_basename = "snapshot";
  int threads = 1;

  bool operator==(const ScenarioConfig&) const = default;
};

// Parse/serialize; load rejects unknown keys with line diagnostics and
// validates ranges.  load(save(cfg)) == cfg.
ScenarioConfig load_scenario(const std::string& path);
void save_scenario(const ScenarioConfig& cfg, const std::string& path);

// Derived pieces
Material make_material(const ScenarioConfig& cfg);
GeometryTemplate make_geometry(const ScenarioConfig& cfg);
std::array<int, 3> internal_elements(const ScenarioConfig& cfg);  // annulus reorder
std::vector<FaceMotion> make_boundary(const ScenarioConfig& cfg);
Eigen::MatrixX3d initial_conditions(const ScenarioConfig& cfg, const Mesh& mesh);

}  // namespace viscodyn

#endif
