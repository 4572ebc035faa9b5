#ifndef VISCODYN_MATERIAL_HPP
#define VISCODYN_MATERIAL_HPP

#include <vector>

#include "viscodyn/kinematics.hpp"
#include "viscodyn/tensor.hpp"

namespace viscodyn {

enum class ModelKind { IPC, HS, MIPC };

/// Equilibrium isochoric energy c1/2 (I1-3) + c2/2 (I2-3) in the modified
/// invariants of C̃.
struct MooneyRivlin {
  double c1 = 0.0;
  double c2 = 0.0;
};

struct EquilibriumEval {
  double energy;             // G_iso^inf(C̃)
  Mat3d Stilde;              // 2 dG/dC̃ = c1 I + c2 (I1 I - C̃)
  Tensor4d dStilde_dCtilde;  // c2 (I x I - I4s), constant in C̃
};

EquilibriumEval mr_derivatives(const MooneyRivlin& mr, const Mat3d& Ctilde);

// (d^3 G / dC̃^3) : A.  Identically zero for Mooney-Rivlin (the second
// derivative is constant); kept as an explicit hook so the appendix
// elasticity-tensor algorithms remain complete for future energies.
Tensor4d mr_third_derivative_contraction(const MooneyRivlin& mr, const Mat3d& Ctilde,
                                         const Mat3d& a);

/// One relaxation process: beta_inf enters the IPC/MIPC branch stress, mu and
/// tau are the process modulus and relaxation time, eta = mu tau.
struct ViscousBranch {
  double beta_inf = 1.0;
  double mu = 0.0;   // Pa
  double tau = 0.0;  // s
  double eta() const { return mu * tau; }
};

struct Material {
  ModelKind kind = ModelKind::HS;
  MooneyRivlin base;
  std::vector<ViscousBranch> branches;
  double rho0 = 0.0;  // kg/m^3
};

/// Per-point history: conjugate variables Q^a at the previous sample, the
/// branch stresses S̃^a_iso at the previous sample, and the constant Ŝ^a_0
/// frozen at t = 0.
struct MaterialState {
  std::vector<Mat3d> Q;
  std::vector<Mat3d> Siso_prev;
  std::vector<Mat3d> S0hat;
};

struct StressTangent {
  Mat3d Siso;                      // isochoric second Piola-Kirchhoff stress
  Tensor4d Ciso;                   // isochoric elasticity tensor, 2 dSiso/dC
  Mat3d Stilde;                    // total fictitious stress
  std::vector<Mat3d> Sneq_tilde;   // per-branch fictitious non-equilibrium stress
  MaterialState updated;           // history advanced to the evaluated configuration
};

// Branch stress S̃^a_iso(C̃): beta_inf S̃^inf_iso for IPC/MIPC, mu (C̃ - I) for HS.
Mat3d branch_siso(ModelKind kind, const MooneyRivlin& mr, const ViscousBranch& br,
                  const Mat3d& Ctilde);

// History at t = 0 with the given initial conjugate variables (zero in all
// benchmark scenarios), which fixes Ŝ^a_0 = S̃^a_iso,0 - Q^a_0.
MaterialState init_state(const Material& mat, const Mat3d& Ctilde0,
                         const std::vector<Mat3d>* Q0 = nullptr);

// One-step recurrence for the conjugate variable, xi = -dt/(2 tau):
// Q_{n+1} = e^xi S̃_{n+1} + e^xi (e^xi Q_n - S̃_n).
Mat3d update_Q(const ViscousBranch& br, double dt, const Mat3d& Siso_n,
               const Mat3d& Siso_np1, const Mat3d& Qn);

// Algorithmic stress and consistent tangent; dispatches on mat.kind to the
// IPC / HS / MIPC update.  The stored state is not modified; the advanced
// history is returned in StressTangent::updated.
StressTangent evaluate_stress(const Material& mat, const MaterialState& state,
                              const DeformationState& def, double dt);

// Sum of the configurational free energies Υ^a evaluated from the committed
// state, with Γ^a recovered algebraically from Q^a.
double branch_energy(const Material& mat, const MaterialState& state, const Mat3d& Ctilde);

// Isochoric stress evaluated from the stored conjugate variables without
// advancing the recurrence (output and surface-force evaluation).
Mat3d stress_from_committed(const Material& mat, const MaterialState& state,
                            const DeformationState& def);

// Advance one point's history to a new configuration: recurrence update of
// Q^a and refresh of the stored branch stresses.
void advance_state(const Material& mat, const Mat3d& Ctilde_new, double dt,
                   MaterialState& state);

// Σ_a |Q^a|^2 / (2 eta^a), the (isothermal) viscous dissipation rate density.
double dissipation_rate(const Material& mat, const MaterialState& state);

}  // namespace viscodyn

#endif
