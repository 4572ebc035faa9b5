#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "viscodyn/assembly.hpp"
#include "viscodyn/timeint.hpp"

using namespace viscodyn;

namespace {

std::mt19937 rng(5150);
double urand(double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Material table1(ModelKind kind) {
  Material m;
  m.kind = kind;
  const double c1 = 1.7e7 / 6.0;
  m.base = {c1, c1};
  m.branches = {{1.0, 10.0 * c1, 1.0}};
  m.rho0 = 1.1e3;
  return m;
}

Mesh unit_cube_mesh(int degree = 1, std::array<int, 3> nel = {1, 1, 1}) {
  GeometryTemplate g;
  g.kind = GeometryKind::Box;
  g.box_min = Vec3d(0, 0, 0);
  g.box_max = Vec3d(1, 1, 1);
  return Mesh(build_mixed_pair(degree, nel, g));
}

void randomize(Eigen::MatrixX3d& m, double scale) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = scale * urand();
}

}  // namespace

TEST_CASE("reference state has zero residual") {
  const Mesh mesh = unit_cube_mesh();
  const Material mat = table1(ModelKind::HS);
  const DofMap dofs(mesh, {});
  const History hist = make_history(mesh, mat);
  CollocatedState cs;
  cs.U = Eigen::MatrixX3d::Zero(mesh.n_kin_nodes(), 3);
  cs.V = cs.U;
  cs.Vdot = cs.U;
  cs.P = Eigen::VectorXd::Zero(mesh.n_prs_nodes());
  Eigen::VectorXd R;
  assemble_residual(mesh, mat, dofs, {}, cs, hist, 1e-3, R);
  CHECK(R.norm() < 1e-9);
}

TEST_CASE("rigid translation velocity: mass residual vanishes, momentum only inertia") {
  const Mesh mesh = unit_cube_mesh(1, {2, 2, 2});
  const Material mat = table1(ModelKind::MIPC);
  const DofMap dofs(mesh, {});
  const History hist = make_history(mesh, mat);
  CollocatedState cs;
  cs.U = Eigen::MatrixX3d::Zero(mesh.n_kin_nodes(), 3);
  cs.V = cs.U;
  cs.Vdot = cs.U;
  cs.P = Eigen::VectorXd::Zero(mesh.n_prs_nodes());
  cs.V.rowwise() = Eigen::RowVector3d(1.0, -2.0, 0.5);
  Eigen::VectorXd R;
  assemble_residual(mesh, mat, dofs, {}, cs, hist, 1e-3, R);
  CHECK(R.norm() < 1e-9);  // divergence-free and no strain, no inertia
}

TEST_CASE("hydrostatic balance: constant pressure against matching tractions") {
  const Mesh mesh = unit_cube_mesh(1, {2, 2, 2});
  const Material mat = table1(ModelKind::HS);
  const DofMap dofs(mesh, {});
  const History hist = make_history(mesh, mat);
  const double p0 = 3.7e4;

  AssemblyOptions opts;
  // reference traction H = -p0 N on all six faces; at F = I the volumetric
  // stress is exactly -p0 I
  const Vec3d normals[6] = {{-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}, {0, 0, -1}, {0, 0, 1}};
  for (int f = 0; f < 6; ++f) opts.tractions.push_back({f, -p0 * normals[f]});

  CollocatedState cs;
  cs.U = Eigen::MatrixX3d::Zero(mesh.n_kin_nodes(), 3);
  cs.V = cs.U;
  cs.Vdot = cs.U;
  cs.P = Eigen::VectorXd::Constant(mesh.n_prs_nodes(), p0);
  Eigen::VectorXd R;
  assemble_residual(mesh, mat, dofs, opts, cs, hist, 1e-3, R);
  CHECK(R.norm() < 1e-9 * p0);
}

TEST_CASE("internal forces are orthogonal to rigid modes at a deformed state") {
  const Mesh mesh = unit_cube_mesh(1, {2, 2, 3});
  const Material mat = table1(ModelKind::MIPC);
  const DofMap dofs(mesh, {});
  History hist = make_history(mesh, mat);

  CollocatedState cs;
  cs.U.resize(mesh.n_kin_nodes(), 3);
  randomize(cs.U, 0.05);
  cs.V = Eigen::MatrixX3d::Zero(mesh.n_kin_nodes(), 3);
  cs.Vdot = cs.V;  // no inertia: pure internal force balance
  cs.P.resize(mesh.n_prs_nodes());
  for (int i = 0; i < cs.P.size(); ++i) cs.P[i] = 1e4 * urand();

  Eigen::VectorXd R;
  assemble_residual(mesh, mat, dofs, {}, cs, hist, 1e-3, R);

  const double rnorm = R.norm();
  // translation modes
  for (int i = 0; i < 3; ++i) {
    double sum = 0.0;
    for (int n = 0; n < mesh.n_kin_nodes(); ++n) sum += R[dofs.v_eq(n, i)];
    CHECK(std::abs(sum) < 1e-10 * rnorm);
  }
  // rotation modes about the current placement
  const auto& pts = mesh.patch().kinematic.points;
  // merged nodal positions
  Eigen::MatrixX3d phi(mesh.n_kin_nodes(), 3);
  {
    const auto& space = mesh.patch().kinematic.space;
    for (int raw = 0; raw < space.num_basis(); ++raw) phi.row(mesh.kin_node(raw)) = pts.row(raw);
    phi += cs.U;
  }
  for (int i = 0; i < 3; ++i) {
    Vec3d e = Vec3d::Zero();
    e[i] = 1.0;
    double sum = 0.0;
    for (int n = 0; n < mesh.n_kin_nodes(); ++n) {
      const Vec3d w = e.cross(Vec3d(phi.row(n).transpose()));
      for (int c = 0; c < 3; ++c) sum += w[c] * R[dofs.v_eq(n, c)];
    }
    CHECK(std::abs(sum) < 1e-10 * rnorm);
  }
}

TEST_CASE("mass residual vanishes for rigid velocity fields at any deformation") {
  const Mesh mesh = unit_cube_mesh(1, {2, 2, 2});
  const Material mat = table1(ModelKind::HS);
  const DofMap dofs(mesh, {});
  const History hist = make_history(mesh, mat);

  CollocatedState cs;
  cs.U.resize(mesh.n_kin_nodes(), 3);
  randomize(cs.U, 0.08);
  cs.Vdot = Eigen::MatrixX3d::Zero(mesh.n_kin_nodes(), 3);
  cs.P = Eigen::VectorXd::Zero(mesh.n_prs_nodes());

  // rigid velocity on the current placement: v = c + omega x phi
  const Vec3d c(0.3, -0.1, 0.8), omega(0.2, 0.5, -0.4);
  Eigen::MatrixX3d phi(mesh.n_kin_nodes(), 3);
  const auto& pts = mesh.patch().kinematic.points;
  const auto& space = mesh.patch().kinematic.space;
  for (int raw = 0; raw < space.num_basis(); ++raw) phi.row(mesh.kin_node(raw)) = pts.row(raw);
  phi += cs.U;
  cs.V.resize(mesh.n_kin_nodes(), 3);
  for (int n = 0; n < mesh.n_kin_nodes(); ++n)
    cs.V.row(n) = (c + omega.cross(Vec3d(phi.row(n).transpose()))).transpose();

  Eigen::VectorXd R;
  assemble_residual(mesh, mat, dofs, {}, cs, hist, 1e-3, R);
  CHECK(R.tail(dofs.n_p()).norm() < 1e-10 * std::max(1.0, R.norm()));
}

TEST_CASE("global tangent matches finite differences of the global residual") {
  for (ModelKind kind : {ModelKind::HS, ModelKind::MIPC, ModelKind::IPC}) {
    const Mesh mesh = unit_cube_mesh();
    const Material mat = table1(kind);
    const AlphaParameters params = derive_parameters(0.5);
    // clamp one face so both free and fixed nodes are exercised
    FaceMotion clamp{2, 0, [](double) { return Vec3d::Zero(); },
                     [](double) { return Vec3d::Zero(); }};
    GenAlphaStepper stepper(mesh, mat, DofMap(mesh, {clamp}), {}, params);
    const DofMap& dofs = stepper.dofs();
    const double dt = 2e-3;

    SolutionState sn = SolutionState::zero(mesh.n_kin_nodes(), mesh.n_prs_nodes());
    randomize(sn.U, 0.02);
    randomize(sn.V, 0.1);
    randomize(sn.Ud, 0.1);
    randomize(sn.Vd, 0.1);
    for (int i = 0; i < sn.P.size(); ++i) sn.P[i] = 1e4 * urand();
    for (int n = 0; n < sn.U.rows(); ++n)
      if (dofs.node_fixed(n)) {
        sn.U.row(n).setZero();
        sn.V.row(n).setZero();
        sn.Ud.row(n).setZero();
        sn.Vd.row(n).setZero();
      }

    SolutionState s = sn;
    randomize(s.Vd, 0.2);
    for (int i = 0; i < s.Pd.size(); ++i) s.Pd[i] = 1e3 * urand();
    for (int n = 0; n < s.U.rows(); ++n)
      if (dofs.node_fixed(n)) s.Vd.row(n).setZero();
    // consistent Y_{n+1} via the update rule, then kinematic elimination
    const double gdt = params.gamma * dt;
    s.V = sn.V + dt * sn.Vd + gdt * (s.Vd - sn.Vd);
    s.P = sn.P + dt * sn.Pd + gdt * (s.Pd - sn.Pd);
    stepper.update_displacement(sn, s, dt);

    auto residual_at = [&](const SolutionState& cand) {
      SolutionState c2 = cand;
      stepper.update_displacement(sn, c2, dt);
      Eigen::VectorXd R;
      assemble_residual(mesh, mat, dofs, {}, stepper.collocate(sn, c2, dt),
                        stepper.history(), dt, R);
      return R;
    };

    SystemMatrices sys;
    assemble_system(mesh, mat, dofs, {}, stepper.collocate(sn, s, dt), stepper.history(), dt,
                    stepper.scales(dt), sys);

    const int neq = dofs.n_eq();
    Eigen::MatrixXd Kfd(neq, neq);
    const double h = 1e-5;
    for (int j = 0; j < neq; ++j) {
      SolutionState sp = s, sm = s;
      if (j < dofs.n_v_free()) {
        int node = -1, comp = -1;
        for (int n = 0; n < mesh.n_kin_nodes() && node < 0; ++n)
          for (int cc = 0; cc < 3; ++cc)
            if (dofs.v_eq(n, cc) == j) {
              node = n;
              comp = cc;
              break;
            }
        sp.Vd(node, comp) += h;
        sp.V(node, comp) += gdt * h;
        sm.Vd(node, comp) -= h;
        sm.V(node, comp) -= gdt * h;
      } else {
        int pnode = -1;
        for (int n = 0; n < mesh.n_prs_nodes(); ++n)
          if (dofs.p_eq(n) == j - dofs.n_v_free()) {
            pnode = n;
            break;
          }
        sp.Pd[pnode] += h;
        sp.P[pnode] += gdt * h;
        sm.Pd[pnode] -= h;
        sm.P[pnode] -= gdt * h;
      }
      Kfd.col(j) = (residual_at(sp) - residual_at(sm)) / (2.0 * h);
    }
    const Eigen::MatrixXd Kdense(sys.K);
    CHECK((Kdense - Kfd).norm() < 1e-5 * Kfd.norm());
  }
}

TEST_CASE("L2 projection reproduces fields in the space") {
  GeometryTemplate g;
  g.kind = GeometryKind::Box;
  g.box_min = Vec3d(-0.5, -0.5, 0.0);
  g.box_max = Vec3d(0.5, 0.5, 6.0);
  const Mesh mesh(build_mixed_pair(1, {1, 1, 6}, g));
  // linear bending profile lies in the quadratic kinematic space
  const double v0 = 5.0 / 3.0;
  const Eigen::MatrixX3d coeff = project_kinematic_field(
      mesh, [&](const Vec3d& X) { return Vec3d(v0 * X[2] / 1.0, 0.0, 0.0); });
  for (int trial = 0; trial < 15; ++trial) {
    const Vec3d xi(urand(0, 1), urand(0, 1), urand(0, 1));
    Vec3d val;
    Mat3d grad;
    mesh.eval_kinematic(xi, coeff, val, grad);
    Vec3d X;
    Mat3d jac;
    mesh.geometry(xi, X, jac);
    CHECK((val - Vec3d(v0 * X[2], 0, 0)).norm() < 1e-10);
  }
}

TEST_CASE("dirichlet bookkeeping") {
  const Mesh mesh = unit_cube_mesh(1, {2, 2, 2});
  FaceMotion clamp{2, 0, [](double) { return Vec3d::Zero(); },
                   [](double) { return Vec3d::Zero(); }};
  FaceMotion wave{2, 1, [](double t) { return Vec3d(std::sin(t), 0, 0); },
                  [](double t) { return Vec3d(std::cos(t), 0, 0); }};
  const DofMap dofs(mesh, {clamp, wave});
  const int nface = static_cast<int>(mesh.kin_face_nodes(2, 0).size());
  CHECK(dofs.n_v_free() == 3 * (mesh.n_kin_nodes() - 2 * nface));
  Eigen::MatrixX3d U = Eigen::MatrixX3d::Ones(mesh.n_kin_nodes(), 3);
  Eigen::MatrixX3d V = U;
  dofs.apply_dirichlet(0.3, U, V);
  for (int n : mesh.kin_face_nodes(2, 0)) {
    CHECK(U.row(n).norm() == 0.0);
    CHECK(V.row(n).norm() == 0.0);
  }
  for (int n : mesh.kin_face_nodes(2, 1)) {
    CHECK(U(n, 0) == doctest::Approx(std::sin(0.3)));
    CHECK(V(n, 0) == doctest::Approx(std::cos(0.3)));
  }
}
