#include "viscodyn/material.hpp"

#include <cmath>

namespace viscodyn {

EquilibriumEval mr_derivatives(const MooneyRivlin& mr, const Mat3d& Ctilde) {
  EquilibriumEval e;
  const double I1 = Ctilde.trace();
  const double I2 = 0.5 * (I1 * I1 - (Ctilde * Ctilde).trace());
  e.energy = 0.5 * mr.c1 * (I1 - 3.0) + 0.5 * mr.c2 * (I2 - 3.0);
  e.Stilde = mr.c1 * Mat3d::Identity() + mr.c2 * (I1 * Mat3d::Identity() - Ctilde);
  const Mat3d id = Mat3d::Identity();
  e.dStilde_dCtilde = mr.c2 * (dyad(id, id) - Tensor4<double>::symmetric_identity());
  return e;
}

Tensor4d mr_third_derivative_contraction(const MooneyRivlin&, const Mat3d&, const Mat3d&) {
  return Tensor4d::zero();
}

Mat3d branch_siso(ModelKind kind, const MooneyRivlin& mr, const ViscousBranch& br,
                  const Mat3d& Ctilde) {
  if (kind == ModelKind::HS) return br.mu * (Ctilde - Mat3d::Identity());
  return br.beta_inf * mr_derivatives(mr, Ctilde).Stilde;
}

MaterialState init_state(const Material& mat, const Mat3d& Ctilde0,
                         const std::vector<Mat3d>* Q0) {
  MaterialState s;
  const std::size_t m = mat.branches.size();
  s.Q.resize(m);
  s.Siso_prev.resize(m);
  s.S0hat.resize(m);
  for (std::size_t a = 0; a < m; ++a) {
    s.Q[a] = Q0 ? (*Q0)[a] : Mat3d::Zero();
    s.Siso_prev[a] = branch_siso(mat.kind, mat.base, mat.branches[a], Ctilde0);
    s.S0hat[a] = s.Siso_prev[a] - s.Q[a];
  }
  return s;
}

Mat3d update_Q(const ViscousBranch& br, double dt, const Mat3d& Siso_n,
               const Mat3d& Siso_np1, const Mat3d& Qn) {
  const double e = std::exp(-dt / (2.0 * br.tau));
  return e * Siso_np1 + e * (e * Qn - Siso_n);
}

namespace {

// Per-branch fictitious non-equilibrium stress from a given conjugate
// variable (appendix step 5 of each algorithm).
Mat3d sneq_from_Q(ModelKind kind, const ViscousBranch& br, const Mat3d& S0hat, const Mat3d& Q,
                  const DeformationState& def, const EquilibriumEval& eq, const Tensor4d& Cinf) {
  switch (kind) {
    case ModelKind::HS:
      return Q;
    case ModelKind::MIPC:
      return (def.Jp43 * br.beta_inf / (2.0 * br.mu)) * ddot(Cinf, Q);
    case ModelKind::IPC: {
      const Mat3d drive = br.beta_inf * eq.Stilde - S0hat - Q;
      return br.beta_inf * eq.Stilde -
             (br.beta_inf / (2.0 * br.mu) * def.Jp43) * ddot(Cinf, drive);
    }
  }
  return Mat3d::Zero();
}

// Final assembly shared by all three models:
// Ciso = P : C̃tot : P^T + 2/3 Tr(J^{-2/3} S̃) P̃ - 2/3 (Cinv x Siso + Siso x Cinv).
void finalize(const DeformationState& def, const Mat3d& Stilde, const Tensor4d& Ctot,
              StressTangent& out) {
  out.Stilde = Stilde;
  out.Siso = def.Jm23 * ddot(def.P, Stilde);
  const double tr = ddot<double>(def.Jm23 * Stilde, def.C);
  out.Ciso = Tensor4d(def.P.flat() * Ctot.flat() * def.P.flat().transpose()) +
             (2.0 / 3.0) * tr * def.Ptilde -
             (2.0 / 3.0) * (dyad(def.Cinv, out.Siso) + dyad(out.Siso, def.Cinv));
}

}  // namespace

StressTangent evaluate_stress(const Material& mat, const MaterialState& state,
                              const DeformationState& def, double dt) {
  const std::size_t m = mat.branches.size();
  StressTangent out;
  out.Sneq_tilde.resize(m);
  out.updated = state;

  const EquilibriumEval eq = mr_derivatives(mat.base, def.Ctilde);
  const double Jm43 = def.Jm23 * def.Jm23;
  const Tensor4d Cinf = (2.0 * Jm43) * eq.dStilde_dCtilde;  // 4 J^{-4/3} d2G/dC̃dC̃

  Mat3d Stilde = eq.Stilde;
  Tensor4d Ctot = Cinf;

  for (std::size_t a = 0; a < m; ++a) {
    const ViscousBranch& br = mat.branches[a];
    const double expxi = std::exp(-dt / (2.0 * br.tau));

    const Mat3d Siso_np1 = branch_siso(mat.kind, mat.base, br, def.Ctilde);
    const Mat3d Qnp1 = update_Q(br, dt, state.Siso_prev[a], Siso_np1, state.Q[a]);
    out.updated.Q[a] = Qnp1;
    out.updated.Siso_prev[a] = Siso_np1;

    const Mat3d Sneq = sneq_from_Q(mat.kind, br, state.S0hat[a], Qnp1, def, eq, Cinf);
    Tensor4d Cneq;
    switch (mat.kind) {
      case ModelKind::HS: {
        Cneq = (2.0 * br.mu * expxi * Jm43) * Tensor4d::symmetric_identity();
        break;
      }
      case ModelKind::MIPC: {
        const double delta = br.beta_inf * expxi;
        Cneq = (4.0 * br.beta_inf / br.mu * Jm43) *
                   mr_third_derivative_contraction(mat.base, def.Ctilde, Qnp1) +
               (delta * br.beta_inf * def.Jp43 / (2.0 * br.mu)) * ddot(Cinf, Cinf);
        break;
      }
      case ModelKind::IPC: {
        const double delta = br.beta_inf * expxi;
        const Mat3d drive = br.beta_inf * eq.Stilde - state.S0hat[a] - Qnp1;
        Cneq = br.beta_inf * Cinf -
               (4.0 * br.beta_inf / br.mu * Jm43) *
                   mr_third_derivative_contraction(mat.base, def.Ctilde, drive) -
               (br.beta_inf / (2.0 * br.mu) * def.Jp43 * (1.0 - delta)) * ddot(Cinf, Cinf);
        break;
      }
    }
    out.Sneq_tilde[a] = Sneq;
    Stilde += Sneq;
    Ctot += Cneq;
  }

  finalize(def, Stilde, Ctot, out);
  return out;
}

double branch_energy(const Material& mat, const MaterialState& state, const Mat3d& Ctilde) {
  double sum = 0.0;
  for (std::size_t a = 0; a < mat.branches.size(); ++a) {
    const ViscousBranch& br = mat.branches[a];
    const Mat3d Siso = branch_siso(mat.kind, mat.base, br, Ctilde);
    // (Γ^a - I)/2 recovered from Q^a
    const Mat3d Ev = (Siso - state.S0hat[a] - state.Q[a]) / (2.0 * br.mu);
    const double H = br.mu * magnitude_sq<double>(Ev);
    const double coupling = ddot<double>(state.S0hat[a] - Siso, Ev);
    double F;
    if (mat.kind == ModelKind::IPC) {
      F = br.beta_inf * mr_derivatives(mat.base, Ctilde).energy;
    } else {
      F = magnitude_sq<double>(Siso - state.S0hat[a]) / (4.0 * br.mu);
    }
    sum += H + coupling + F;
  }
  return sum;
}

Mat3d stress_from_committed(const Material& mat, const MaterialState& state,
                            const DeformationState& def) {
  const EquilibriumEval eq = mr_derivatives(mat.base, def.Ctilde);
  const Tensor4d Cinf = (2.0 * def.Jm23 * def.Jm23) * eq.dStilde_dCtilde;
  Mat3d Stilde = eq.Stilde;
  for (std::size_t a = 0; a < mat.branches.size(); ++a)
    Stilde += sneq_from_Q(mat.kind, mat.branches[a], state.S0hat[a], state.Q[a], def, eq, Cinf);
  return def.Jm23 * ddot(def.P, Stilde);
}

void advance_state(const Material& mat, const Mat3d& Ctilde_new, double dt,
                   MaterialState& state) {
  for (std::size_t a = 0; a < mat.branches.size(); ++a) {
    const Mat3d Snew = branch_siso(mat.kind, mat.base, mat.branches[a], Ctilde_new);
    state.Q[a] = update_Q(mat.branches[a], dt, state.Siso_prev[a], Snew, state.Q[a]);
    state.Siso_prev[a] = Snew;
  }
}

double dissipation_rate(const Material& mat, const MaterialState& state) {
  double sum = 0.0;
  for (std::size_t a = 0; a < mat.branches.size(); ++a)
    sum += magnitude_sq<double>(state.Q[a]) / (2.0 * mat.branches[a].eta());
  return sum;
}

}  // namespace viscodyn
