#ifndef VISCODYN_SIMULATION_HPP
#define VISCODYN_SIMULATION_HPP

#include <memory>
#include <string>

#include "viscodyn/diagnostics.hpp"
#include "viscodyn/scenario.hpp"
#include "viscodyn/timeint.hpp"

namespace viscodyn {

/// One scenario run: mesh and solver setup, the time loop, and the CSV / VTK
/// outputs.  Energy and force records are sampled at each committed step's
/// alpha_f configuration, where the committed material history lives.
class Simulation {
public:
  Simulation(ScenarioConfig cfg, std::string out_dir);

  // 0 on success, 3 when the stepper fails (partial outputs are flushed).
  int run();

  const Mesh& mesh() const { return *mesh_; }
  const Material& material() const { return material_; }
  GenAlphaStepper& stepper() { return *stepper_; }
  const SolutionState& state() const { return state_; }
  EnergyRecord initial_energies() const;

private:
  void write_energy_row(const EnergyRecord& rec);
  void write_force_row(const ForceRecord& rec);
  void write_snapshot(int index);

  ScenarioConfig cfg_;
  std::string out_dir_;
  Material material_;
  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<GenAlphaStepper> stepper_;
  SolutionState state_;
  AlphaParameters params_;
  std::vector<MaterialState> force_states_;   // inner-face history (support runs)
  std::vector<MaterialState> vertex_states_;  // element-corner history (snapshots)
  std::string energies_path_, force_path_;
};

// Legacy ASCII VTK unstructured-grid snapshot: hexahedra at element corners;
// point data: displacement, velocity, pressure, Cauchy stress evaluated
// directly from the solution and the per-vertex committed history.
void write_vtk_snapshot(const std::string& path, const Mesh& mesh, const Material& mat,
                        const std::vector<MaterialState>& vertex_states,
                        const Eigen::MatrixX3d& U, const Eigen::MatrixX3d& V,
                        const Eigen::VectorXd& P);

}  // namespace viscodyn

#endif
