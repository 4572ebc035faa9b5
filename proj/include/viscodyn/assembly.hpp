#ifndef VISCODYN_ASSEMBLY_HPP
#define VISCODYN_ASSEMBLY_HPP

#include <Eigen/Sparse>
#include <functional>
#include <utility>
#include <vector>

#include "viscodyn/material.hpp"
#include "viscodyn/mesh.hpp"

namespace viscodyn {

/// Rigid motion prescribed on a parametric boundary face: U = g(t), V = dg/dt.
struct FaceMotion {
  int dir = 0;
  int side = 0;
  std::function<Vec3d(double)> g;
  std::function<Vec3d(double)> gdot;
};

/// Global unknown numbering: three velocity components per kinematic node
/// (Dirichlet components removed) followed by one pressure per pressure node.
/// Pressure carries no Dirichlet data; an optional single pinned dof removes
/// the constant mode in fully clamped configurations.
class DofMap {
public:
  DofMap(const Mesh& mesh, std::vector<FaceMotion> motions, bool pin_pressure = false);

  int n_v_free() const { return n_v_free_; }
  int n_p() const { return n_p_; }
  int n_eq() const { return n_v_free_ + n_p_; }

  int v_eq(int node, int comp) const { return v_eq_[3 * node + comp]; }   // -1 if fixed
  int p_eq(int node) const { return p_eq_[node]; }                        // -1 if pinned
  bool node_fixed(int node) const { return fixed_[node]; }

  struct Prescribed {
    std::vector<int> nodes;
    std::function<Vec3d(double)> g, gdot;
  };
  const std::vector<Prescribed>& prescriptions() const { return prescribed_; }

  // Overwrite the fixed kinematic nodes with exact boundary values/rates.
  void apply_dirichlet(double t, Eigen::MatrixX3d& U, Eigen::MatrixX3d& V) const;

private:
  std::vector<int> v_eq_, p_eq_;
  std::vector<uint8_t> fixed_;
  std::vector<Prescribed> prescribed_;
  int n_v_free_ = 0, n_p_ = 0;
};

/// Nodal fields of the mixed problem at the generalized-alpha collocation
/// levels (states at n+alpha_f, rates at n+alpha_m).
struct CollocatedState {
  Eigen::MatrixX3d U;     // displacement at n+alpha_f
  Eigen::MatrixX3d V;     // velocity at n+alpha_f
  Eigen::MatrixX3d Vdot;  // acceleration at n+alpha_m
  Eigen::VectorXd P;      // pressure at n+alpha_f
};

/// Chain-rule factors of the collocated fields with respect to the Newton
/// unknowns (Vdot_{n+1}, Pdot_{n+1}).
struct TangentScales {
  double mass = 1.0;   // d Vdot_{n+alpha_m} / d Vdot_{n+1} = alpha_m
  double vel = 1.0;    // d V_{n+alpha_f}   / d Vdot_{n+1} = alpha_f gamma dt
  double disp = 1.0;   // d U_{n+alpha_f}   / d Vdot_{n+1} (through the kinematic link)
  double pres = 1.0;   // d P_{n+alpha_f}   / d Pdot_{n+1} = alpha_f gamma dt
};

struct AssemblyOptions {
  Vec3d body_force = Vec3d::Zero();
  std::vector<std::pair<int, Vec3d>> tractions;  // face id 2*dir+side -> reference traction H
  int threads = 1;
};

/// Assembled saddle-point system in the ordering [v; p]; the pressure block
/// K_pp is identically zero.
struct SystemMatrices {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd R;     // stacked (R_m, R_p)
  int n_v = 0, n_p = 0;
};

using History = std::vector<std::vector<MaterialState>>;  // [element][qp]

// Momentum and mass residuals at the collocated state (material history kept
// at level n; the per-point advanced history is written into `updated` when
// given).  Throws InvertedElement when det F <= 0 at any quadrature point.
void assemble_residual(const Mesh& mesh, const Material& mat, const DofMap& dofs,
                       const AssemblyOptions& opts, const CollocatedState& cs,
                       const History& history, double dt, Eigen::VectorXd& R,
                       History* updated = nullptr);

// Residual plus consistent tangent with respect to (Vdot_{n+1}, Pdot_{n+1}).
void assemble_system(const Mesh& mesh, const Material& mat, const DofMap& dofs,
                     const AssemblyOptions& opts, const CollocatedState& cs,
                     const History& history, double dt, const TangentScales& scales,
                     SystemMatrices& sys, History* updated = nullptr);

// rho-weighted kinematic mass matrix on the free velocity equations.
Eigen::SparseMatrix<double> velocity_mass_matrix(const Mesh& mesh, double rho,
                                                 const DofMap& dofs);

// L2 projection of an analytic field onto the kinematic space (all nodes).
Eigen::MatrixX3d project_kinematic_field(const Mesh& mesh,
                                         const std::function<Vec3d(const Vec3d&)>& field);

// Fresh per-quadrature-point history at the reference configuration.
History make_history(const Mesh& mesh, const Material& mat);

}  // namespace viscodyn

#endif
