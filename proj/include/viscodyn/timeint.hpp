#ifndef VISCODYN_TIMEINT_HPP
#define VISCODYN_TIMEINT_HPP

#include <Eigen/Sparse>

#include "viscodyn/assembly.hpp"

namespace viscodyn {

/// Generalized-alpha parameters for first-order systems, derived from the
/// high-frequency spectral radius:
///   alpha_m = (3 - rho_inf) / (2 (1 + rho_inf)),  alpha_f = gamma = 1/(1 + rho_inf).
struct AlphaParameters {
  double rho_inf = 0.5;
  double alpha_m = 0.0;
  double alpha_f = 0.0;
  double gamma = 0.0;
};

AlphaParameters derive_parameters(double rho_inf);  // ConfigError outside [0,1]

/// Global solution (Y, Ydot) at a time level: Y = (U, P, V).
struct SolutionState {
  double t = 0.0;
  Eigen::MatrixX3d U, V;    // kinematic nodal values
  Eigen::MatrixX3d Ud, Vd;  // their rates
  Eigen::VectorXd P, Pd;

  static SolutionState zero(int n_kin_nodes, int n_prs_nodes);
};

struct NewtonOptions {
  double rtol = 1e-8;
  double atol = 1e-11;
  int max_iter = 20;
  int max_halvings = 3;
};

struct StepReport {
  int newton_iters = 0;
  double dt_used = 0.0;
  int halvings = 0;
};

/// One-step solver: Newton on (Vdot_{n+1}, Pdot_{n+1}) with the displacement
/// rate eliminated through the kinematic equation at the collocation points;
/// all unknowns, including pressure, are collocated at the intermediate step.
class GenAlphaStepper {
public:
  GenAlphaStepper(const Mesh& mesh, const Material& mat, DofMap dofs, AssemblyOptions opts,
                  AlphaParameters params, NewtonOptions newton = {});

  History& history() { return history_; }
  const History& history() const { return history_; }
  const DofMap& dofs() const { return dofs_; }
  const AlphaParameters& params() const { return params_; }
  const AssemblyOptions& options() const { return opts_; }

  // Consistent initial rates: Ud0 = V0, Pd0 = 0, and Vdot0 from the momentum
  // residual at t = 0 restricted to the free velocity equations.
  void initialize_rates(SolutionState& s) const;

  // Advance the state in place; on InvertedElement or Newton failure the step
  // is retried with a halved increment (the state then advances by the
  // reduced amount).  Throws StepFailed after max_halvings cuts.
  StepReport step(SolutionState& s, double dt);

  // Collocated fields for a candidate end state (used by the step and by the
  // finite-difference tangent oracle).
  CollocatedState collocate(const SolutionState& sn, const SolutionState& snp1,
                            double dt) const;
  TangentScales scales(double dt) const;

  // Kinematic elimination: overwrite snp1.Ud/U on free nodes so that
  // Udot_{n+alpha_m} = V_{n+alpha_f} and the update rule holds.
  void update_displacement(const SolutionState& sn, SolutionState& snp1, double dt) const;

private:
  bool try_step(const SolutionState& sn, SolutionState& s, double dt, StepReport& rep);

  const Mesh& mesh_;
  const Material& mat_;
  DofMap dofs_;
  AssemblyOptions opts_;
  AlphaParameters params_;
  NewtonOptions newton_;
  History history_;
  History scratch_;
  double force_scale_ = 1.0;  // residual units; scales the absolute tolerance
};

}  // namespace viscodyn

#endif
