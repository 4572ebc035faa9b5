#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>

#include "viscodyn/material.hpp"
#include "viscodyn/oracle.hpp"

using namespace viscodyn;

namespace {

std::mt19937 rng(424242);

Mat3d random_gradU(double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Mat3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = dist(rng);
  return g;
}

Mat3d random_sym(double scale) { return symmetrize(random_gradU(scale)); }

Material table1_material(ModelKind kind, double mu_factor = 10.0) {
  Material m;
  m.kind = kind;
  const double c1 = 1.7e7 / 6.0;
  m.base = {c1, c1};
  m.branches = {{1.0, mu_factor * c1, 1.0}};
  m.rho0 = 1.1e3;
  return m;
}

Mat3d shear_Ctilde(double gamma) {
  Mat3d g = Mat3d::Zero();
  g(0, 1) = gamma;
  return build_deformation(g).Ctilde;
}

// Recurrence marched over a smooth simple-shear ramp with N steps; returns
// terminal Q of the single branch.
Mat3d march_recurrence(const Material& mat, double T, int nsteps, double gamma_max) {
  MaterialState s = init_state(mat, Mat3d::Identity());
  const double dt = T / nsteps;
  for (int k = 1; k <= nsteps; ++k) {
    const double t = k * dt;
    const double gamma = gamma_max * 0.5 * (1.0 - std::cos(M_PI * t / T));
    const Mat3d Siso = branch_siso(mat.kind, mat.base, mat.branches[0], shear_Ctilde(gamma));
    s.Q[0] = update_Q(mat.branches[0], dt, s.Siso_prev[0], Siso, s.Q[0]);
    s.Siso_prev[0] = Siso;
  }
  return s.Q[0];
}

oracle::StrainHistory shear_history(double T, int nsamples, double gamma_max) {
  oracle::StrainHistory h;
  for (int k = 0; k <= nsamples; ++k) {
    const double t = T * k / nsamples;
    h.t.push_back(t);
    h.Ctilde.push_back(shear_Ctilde(gamma_max * 0.5 * (1.0 - std::cos(M_PI * t / T))));
  }
  return h;
}

}  // namespace

TEST_CASE("Mooney-Rivlin derivatives") {
  const MooneyRivlin mr{2.0, 3.0};
  {
    const EquilibriumEval e = mr_derivatives(mr, Mat3d::Identity());
    CHECK(e.energy == doctest::Approx(0.0));
    CHECK((e.Stilde - (mr.c1 + 2.0 * mr.c2) * Mat3d::Identity()).norm() < 1e-14);
  }
  {
    const MooneyRivlin nh{2.0, 0.0};
    const EquilibriumEval e = mr_derivatives(nh, shear_Ctilde(0.4));
    CHECK(e.dStilde_dCtilde.norm() == 0.0);
  }
  // FD validation of dStilde/dCtilde at a random state
  for (int trial = 0; trial < 5; ++trial) {
    const Mat3d Ct = build_deformation(random_gradU(0.3)).Ctilde;
    const EquilibriumEval e = mr_derivatives(mr, Ct);
    const Tensor4d fd = oracle::fd_tangent(
        [&](const Mat3d& c) { return mr_derivatives(mr, c).Stilde; }, Ct, 1e-6);
    // fd recovers 2 dS/dC̃
    CHECK((fd - 2.0 * e.dStilde_dCtilde).norm() < 1e-6 * (1.0 + fd.norm()));
  }
  CHECK(mr_third_derivative_contraction(mr, shear_Ctilde(0.2), random_sym(1.0)).norm() == 0.0);
}

TEST_CASE("update_Q constant strain decays exponentially") {
  const ViscousBranch br{1.0, 5.0, 0.7};
  const Mat3d S = random_sym(2.0);
  const Mat3d Q0 = random_sym(1.0);
  const double dt = 0.13;
  const Mat3d Q1 = update_Q(br, dt, S, S, Q0);
  CHECK((Q1 - std::exp(-dt / br.tau) * Q0).norm() < 1e-14 * Q0.norm());
}

TEST_CASE("update_Q small-step limit") {
  const ViscousBranch br{1.0, 5.0, 0.7};
  const Mat3d Sn = random_sym(1.0), Snp1 = Sn + random_sym(0.01);
  const Mat3d Q0 = random_sym(1.0);
  const Mat3d Q1 = update_Q(br, 1e-9, Sn, Snp1, Q0);
  CHECK((Q1 - (Q0 + Snp1 - Sn)).norm() < 1e-8);
}

TEST_CASE("convolution oracle: closed-form linear ramp") {
  // HS branch stress is linear in C̃, so C̃(s) = I + sB gives S̃(s) = mu s B.
  const ViscousBranch br{1.0, 3.0, 0.45};
  const Mat3d B = random_sym(0.2);
  const double T = 1.2;
  oracle::StrainHistory h;
  const int n = 16000;
  for (int k = 0; k <= n; ++k) {
    const double s = T * k / n;
    h.t.push_back(s);
    h.Ctilde.push_back(Mat3d::Identity() + s * B);
  }
  const Mat3d q = oracle::convolve_Q(br, ModelKind::HS, MooneyRivlin{1.0, 1.0}, h);
  const Mat3d exact = br.mu * B * br.tau * (1.0 - std::exp(-T / br.tau));
  CHECK((q - exact).norm() < 1e-8 * exact.norm());

  // Richardson: halving the grid changes the answer below 1e-8 relative
  oracle::StrainHistory h2;
  for (int k = 0; k <= 2 * n; ++k) {
    const double s = T * k / (2 * n);
    h2.t.push_back(s);
    h2.Ctilde.push_back(Mat3d::Identity() + s * B);
  }
  const Mat3d q2 = oracle::convolve_Q(br, ModelKind::HS, MooneyRivlin{1.0, 1.0}, h2);
  CHECK((q - q2).norm() < 1e-8 * exact.norm());
}

TEST_CASE("recurrence update converges at second order to the hereditary integral") {
  for (ModelKind kind : {ModelKind::IPC, ModelKind::HS, ModelKind::MIPC}) {
    const Material mat = table1_material(kind);
    const double tau = mat.branches[0].tau;
    const double T = 2.0 * tau;
    const Mat3d ref =
        oracle::convolve_Q(mat.branches[0], kind, mat.base, shear_history(T, 40000, 0.3));

    std::vector<double> errs, dts;
    for (int n : {50, 100, 200}) {
      errs.push_back((march_recurrence(mat, T, n, 0.3) - ref).norm());
      dts.push_back(T / n);
    }
    for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
      const double order = std::log(errs[i] / errs[i + 1]) / std::log(dts[i] / dts[i + 1]);
      CHECK(order == doctest::Approx(2.0).epsilon(0.15));
    }
  }
}

TEST_CASE("stress at the reference state is zero") {
  for (ModelKind kind : {ModelKind::IPC, ModelKind::HS, ModelKind::MIPC}) {
    const Material mat = table1_material(kind);
    const DeformationState def = build_deformation(Mat3d::Zero());
    const MaterialState s0 = init_state(mat, def.Ctilde);
    const StressTangent st = evaluate_stress(mat, s0, def, 1e-3);
    CHECK(st.Siso.norm() < 1e-10 * mat.base.c1);
  }
}

TEST_CASE("consistent tangent matches finite differences") {
  for (ModelKind kind : {ModelKind::IPC, ModelKind::HS, ModelKind::MIPC}) {
    const Material mat = table1_material(kind);
    for (int trial = 0; trial < 10; ++trial) {
      const DeformationState base = build_deformation(random_gradU(0.2));
      MaterialState state = init_state(mat, Mat3d::Identity());
      state.Q[0] = random_sym(0.05 * mat.base.c1);
      state.Siso_prev[0] =
          branch_siso(kind, mat.base, mat.branches[0], build_deformation(random_gradU(0.1)).Ctilde);
      const double dt = 0.01;

      const StressTangent st = evaluate_stress(mat, state, base, dt);
      const Tensor4d fd = oracle::fd_tangent(
          [&](const Mat3d& c) {
            return evaluate_stress(mat, state, deformation_from_C(c), dt).Siso;
          },
          base.C, 1e-5);
      CHECK((fd - st.Ciso).norm() < 1e-5 * st.Ciso.norm());
    }
  }
}

TEST_CASE("elasticity tensor has minor symmetries; major for these models") {
  for (ModelKind kind : {ModelKind::IPC, ModelKind::HS, ModelKind::MIPC}) {
    const Material mat = table1_material(kind);
    const DeformationState def = build_deformation(random_gradU(0.25));
    MaterialState state = init_state(mat, Mat3d::Identity());
    state.Q[0] = random_sym(0.02 * mat.base.c1);
    const StressTangent st = evaluate_stress(mat, state, def, 0.01);
    double minor = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) {
            minor = std::max(minor, std::abs(st.Ciso(i, j, k, l) - st.Ciso(j, i, k, l)));
            minor = std::max(minor, std::abs(st.Ciso(i, j, k, l) - st.Ciso(i, j, l, k)));
          }
    CHECK(minor < 1e-10 * st.Ciso.norm());
    CHECK((st.Ciso.flat() - st.Ciso.flat().transpose()).norm() < 1e-10 * st.Ciso.norm());
  }
}

TEST_CASE("HS structural identity: S̃neq is Q, bitwise") {
  const Material mat = table1_material(ModelKind::HS);
  for (int trial = 0; trial < 100; ++trial) {
    const DeformationState def = build_deformation(random_gradU(0.3));
    MaterialState state = init_state(mat, Mat3d::Identity());
    state.Q[0] = random_sym(0.1 * mat.base.c1);
    state.Siso_prev[0] = random_sym(0.1 * mat.base.c1);
    const StressTangent st = evaluate_stress(mat, state, def, 0.005);
    CHECK(std::memcmp(st.Sneq_tilde[0].data(), st.updated.Q[0].data(), 9 * sizeof(double)) == 0);
  }
}

TEST_CASE("Neo-Hookean MIPC has no viscous stress") {
  Material mat = table1_material(ModelKind::MIPC);
  mat.base.c2 = 0.0;
  MaterialState state = init_state(mat, Mat3d::Identity());
  for (int step = 0; step < 20; ++step) {
    const DeformationState def = build_deformation(random_gradU(0.3));
    const StressTangent st = evaluate_stress(mat, state, def, 0.01);
    CHECK(st.Sneq_tilde[0].norm() == 0.0);
    state = st.updated;
  }
}

TEST_CASE("IPC equals MIPC plus closed-form offset on the first step from rest") {
  const Material ipc = table1_material(ModelKind::IPC);
  const Material mipc = table1_material(ModelKind::MIPC);
  const DeformationState def = build_deformation(random_gradU(0.2));
  const MaterialState s0 = init_state(ipc, Mat3d::Identity());
  const double dt = 0.02;
  const StressTangent a = evaluate_stress(ipc, s0, def, dt);
  const StressTangent b = evaluate_stress(mipc, s0, def, dt);

  const EquilibriumEval eq = mr_derivatives(ipc.base, def.Ctilde);
  const double beta = ipc.branches[0].beta_inf, mu = ipc.branches[0].mu;
  const Tensor4d Cinf = (2.0 * def.Jm23 * def.Jm23) * eq.dStilde_dCtilde;
  const Mat3d offset = beta * eq.Stilde - (beta / (2.0 * mu)) * def.Jp43 *
                                              ddot(Cinf, Mat3d(beta * eq.Stilde - s0.S0hat[0]));
  CHECK((a.Sneq_tilde[0] - b.Sneq_tilde[0] - offset).norm() < 1e-12 * offset.norm());
}

TEST_CASE("relaxation dichotomy under a held shear") {
  const Mat3d held = shear_Ctilde(0.4);
  auto project_norm = [&](const Mat3d& Sneq) {
    const DeformationState def = deformation_from_C(held);
    return ddot(def.P, Sneq).norm();
  };

  for (ModelKind kind : {ModelKind::HS, ModelKind::MIPC, ModelKind::IPC}) {
    const Material mat = table1_material(kind);
    const double tau = mat.branches[0].tau;
    const double dt = tau / 20.0;
    MaterialState state = init_state(mat, Mat3d::Identity());
    const DeformationState def = deformation_from_C(held);

    StressTangent st = evaluate_stress(mat, state, def, dt);
    const double initial = project_norm(st.Sneq_tilde[0]);
    state = st.updated;
    const int nsteps = static_cast<int>(10.0 * tau / dt);
    for (int k = 1; k < nsteps; ++k) {
      st = evaluate_stress(mat, state, def, dt);
      state = st.updated;
    }
    const double final = project_norm(st.Sneq_tilde[0]);
    if (kind == ModelKind::IPC)
      CHECK(final >= 0.1 * initial);
    else
      CHECK(final <= 1e-3 * initial);
  }
}

TEST_CASE("branch energies: normalization and closed forms") {
  for (ModelKind kind : {ModelKind::IPC, ModelKind::HS, ModelKind::MIPC}) {
    const Material mat = table1_material(kind);
    const MaterialState s0 = init_state(mat, Mat3d::Identity());
    CHECK(std::abs(branch_energy(mat, s0, Mat3d::Identity())) < 1e-12 * mat.base.c1);
  }
  // HS and MIPC: Υ = |Q|^2 / (4 mu) once Ŝ0 is folded in
  for (ModelKind kind : {ModelKind::HS, ModelKind::MIPC}) {
    const Material mat = table1_material(kind);
    MaterialState state = init_state(mat, Mat3d::Identity());
    state.Q[0] = random_sym(0.05 * mat.base.c1);
    const Mat3d Ct = shear_Ctilde(0.25);
    const double closed = magnitude_sq<double>(state.Q[0]) / (4.0 * mat.branches[0].mu);
    CHECK(branch_energy(mat, state, Ct) == doctest::Approx(closed).epsilon(1e-10));
    CHECK(branch_energy(mat, state, Ct) >= 0.0);
  }
}

TEST_CASE("dissipation rate is non-negative") {
  const Material mat = table1_material(ModelKind::MIPC);
  MaterialState state = init_state(mat, Mat3d::Identity());
  CHECK(dissipation_rate(mat, state) == 0.0);
  state.Q[0] = random_sym(1.0);
  CHECK(dissipation_rate(mat, state) > 0.0);
  CHECK(dissipation_rate(mat, state) ==
        doctest::Approx(magnitude_sq<double>(state.Q[0]) / (2.0 * mat.branches[0].eta())));
}
