#ifndef VISCODYN_DIAGNOSTICS_HPP
#define VISCODYN_DIAGNOSTICS_HPP

#include "viscodyn/timeint.hpp"

namespace viscodyn {

struct EnergyRecord {
  double t = 0.0;
  double kinetic = 0.0;
  double potential = 0.0;  // equilibrium energy + configurational energies
  double total = 0.0;
  double dissipation_rate = 0.0;  // sum_a |Q^a|^2 / (2 eta^a) integrated over the body
  Vec3d linear_momentum = Vec3d::Zero();
  Vec3d angular_momentum = Vec3d::Zero();  // about the origin, current placement
};

EnergyRecord compute_energies(const Mesh& mesh, const Material& mat, const History& history,
                              const SolutionState& state);

// (linear, angular) momentum of the nodal velocity field.
std::pair<Vec3d, Vec3d> compute_momenta(const Mesh& mesh, double rho0,
                                        const Eigen::MatrixX3d& U, const Eigen::MatrixX3d& V);

struct ForceRecord {
  double t = 0.0;
  double Ux = 0.0;   // prescribed lateral displacement
  Vec3d force = Vec3d::Zero();  // first Piola-Kirchhoff traction resultant
};

// Reaction resultant on a reference boundary face: integral of (F S) N with
// S = S_iso (from the committed per-point history) + S_vol = -J P C^{-1}.
ForceRecord compute_surface_force(const Mesh& mesh, const Material& mat,
                                  const std::vector<MaterialState>& face_states, int dir,
                                  int side, const Eigen::MatrixX3d& U, const Eigen::VectorXd& P,
                                  double t, double Ux);

// Fresh reference-state history for the quadrature points of a face.
std::vector<MaterialState> make_face_history(const Mesh& mesh, const Material& mat, int dir,
                                             int side);

// Advance the face history to the displacement field U (collocation-level),
// mirroring the volumetric recurrence update.
void advance_face_history(const Mesh& mesh, const Material& mat, int dir, int side,
                          const Eigen::MatrixX3d& U, double dt,
                          std::vector<MaterialState>& states);

}  // namespace viscodyn

#endif
