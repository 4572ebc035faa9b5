#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "viscodyn/kinematics.hpp"

using namespace viscodyn;

namespace {

std::mt19937 rng(777);

Mat3d random_gradU(double scale) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Mat3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = dist(rng);
  return g;
}

}  // namespace

TEST_CASE("reference state") {
  const DeformationState s = build_deformation(Mat3d::Zero());
  CHECK(s.J == doctest::Approx(1.0));
  CHECK((s.F - Mat3d::Identity()).norm() == 0.0);
  CHECK((s.C - Mat3d::Identity()).norm() == 0.0);
  CHECK((s.Ctilde - Mat3d::Identity()).norm() < 1e-15);
  const Tensor4d expect = Tensor4d::symmetric_identity() -
                          (1.0 / 3.0) * dyad<double>(Mat3d::Identity(), Mat3d::Identity());
  CHECK((s.P - expect).norm() < 1e-15);
}

TEST_CASE("pure dilatation leaves Ctilde at identity") {
  const DeformationState s = build_deformation(0.1 * Mat3d::Identity());
  CHECK(s.J == doctest::Approx(1.331));
  CHECK((s.Ctilde - Mat3d::Identity()).norm() < 1e-14);
}

TEST_CASE("simple shear") {
  Mat3d g = Mat3d::Zero();
  g(0, 1) = 0.5;
  const DeformationState s = build_deformation(g);
  CHECK(s.J == doctest::Approx(1.0));
  CHECK(s.Ctilde(0, 1) == doctest::Approx(0.5));
  CHECK(s.Ctilde(1, 1) == doctest::Approx(1.25));
  CHECK((s.Ctilde - s.C).norm() < 1e-14);
}

TEST_CASE("det(Ctilde) = 1 and inverted-element detection") {
  for (int trial = 0; trial < 30; ++trial) {
    const DeformationState s = build_deformation(random_gradU(0.3));
    CHECK(s.Ctilde.determinant() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK((s.C - s.C.transpose()).norm() < 1e-14);
  }
  Mat3d g = Mat3d::Zero();
  g(0, 0) = -1.5;  // F_00 = -0.5
  CHECK_THROWS_AS(build_deformation(g), InvertedElement);
}

TEST_CASE("projection annihilates multiples of Cinv") {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const DeformationState s = build_deformation(random_gradU(0.3));
    const double a = dist(rng);
    const Mat3d r = ddot(s.P, Mat3d(a * s.Cinv));
    CHECK(r.norm() <= 1e-12 * std::max(1.0, std::abs(a) * s.Cinv.norm()));
  }
}

TEST_CASE("projected stress is Lagrangian-deviatoric") {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    const DeformationState s = build_deformation(random_gradU(0.3));
    Mat3d st;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) st(i, j) = dist(rng);
    st = symmetrize(st);
    const Mat3d proj = project_deviatoric(s, st);
    CHECK(std::abs(ddot<double>(proj, s.C)) < 1e-10 * st.norm() * s.C.norm());
    // matches the explicit formula
    const Mat3d ref = s.Jm23 * ddot(s.P, st);
    CHECK((proj - ref).norm() < 1e-12 * std::max(1.0, ref.norm()));
  }
}

TEST_CASE("project_deviatoric special cases") {
  // S̃ proportional to C̃^{-1} maps to zero
  for (int trial = 0; trial < 10; ++trial) {
    const DeformationState s = build_deformation(random_gradU(0.25));
    const Mat3d ctinv = s.Ctilde.inverse();
    const Mat3d r = project_deviatoric(s, Mat3d(1.7 * ctinv));
    CHECK(r.norm() < 1e-12 * ctinv.norm());
  }
  // at F = I the projection is the Eulerian deviator
  const DeformationState id = build_deformation(Mat3d::Zero());
  const Mat3d st = symmetrize(random_gradU(1.0));
  const Mat3d expect = st - st.trace() / 3.0 * Mat3d::Identity();
  CHECK((project_deviatoric(id, st) - expect).norm() < 1e-14);
  CHECK(project_deviatoric(id, Mat3d::Zero()).norm() == 0.0);
}

TEST_CASE("deformation_from_C reproduces build_deformation measures") {
  for (int trial = 0; trial < 10; ++trial) {
    const DeformationState a = build_deformation(random_gradU(0.3));
    const DeformationState b = deformation_from_C(a.C);
    CHECK(b.J == doctest::Approx(a.J).epsilon(1e-12));
    CHECK((b.Ctilde - a.Ctilde).norm() < 1e-12);
    CHECK((b.F.transpose() * b.F - a.C).norm() < 1e-12 * a.C.norm());
  }
}
