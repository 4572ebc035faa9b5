#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "viscodyn/tensor.hpp"

using namespace viscodyn;

namespace {

std::mt19937 rng(20240811);

Mat3d random_mat(double scale = 1.0) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  Mat3d a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = dist(rng);
  return a;
}

Mat3d random_spd() {
  const Mat3d a = random_mat();
  return a * a.transpose() + 3.0 * Mat3d::Identity();
}

}  // namespace

TEST_CASE("magnitude_sq basics") {
  CHECK(magnitude_sq<double>(Mat3d::Identity()) == doctest::Approx(3.0));
  CHECK(magnitude_sq<double>(Mat3d::Zero()) == 0.0);
  Mat3d a = Mat3d::Zero();
  a(0, 0) = 2.0;
  CHECK(magnitude_sq<double>(a) == doctest::Approx(4.0));
  // equals sum of squared components for symmetric tensors
  const Mat3d s = symmetrize(random_mat());
  CHECK(magnitude_sq<double>(s) == doctest::Approx(s.array().square().sum()));
}

TEST_CASE("fourth-order identity and dyad contractions") {
  const Mat3d b = random_mat();
  CHECK((ddot(Tensor4d::identity(), b) - b).norm() == doctest::Approx(0.0));
  CHECK(ddot<double>(Mat3d::Identity(), Mat3d::Identity()) == doctest::Approx(3.0));

  const Mat3d id = Mat3d::Identity();
  const Mat3d traced = ddot(dyad(id, id), b);
  CHECK((traced - b.trace() * id).norm() == doctest::Approx(0.0));

  const Mat3d a = random_mat(), c = random_mat();
  const Tensor4d d = dyad(a, c);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) CHECK(d(i, j, k, l) == a(i, j) * c(k, l));
}

TEST_CASE("symdyad matches component formula and preserves symmetry") {
  const Mat3d a = random_spd();
  const Mat3d s = symmetrize(random_mat());
  const Mat3d r = ddot(symdyad(a, a), s);
  Mat3d ref = Mat3d::Zero();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          ref(i, j) += 0.5 * (a(i, k) * a(j, l) + a(i, l) * a(j, k)) * s(k, l);
  CHECK((r - ref).norm() < 1e-12 * ref.norm());
  CHECK((r - r.transpose()).norm() < 1e-12 * r.norm());
}

TEST_CASE("4:4 double contraction composes actions") {
  const Tensor4d s(Eigen::Matrix<double, 9, 9>::Random());
  const Tensor4d t(Eigen::Matrix<double, 9, 9>::Random());
  const Mat3d b = random_mat();
  const Mat3d lhs = ddot(ddot(s, t), b);
  const Mat3d rhs = ddot(s, ddot(t, b));
  CHECK((lhs - rhs).norm() < 1e-12 * rhs.norm());
}

TEST_CASE("contractions are bilinear") {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  const double alpha = dist(rng), beta = dist(rng);
  const Mat3d a = random_mat(), b = random_mat(), c = random_mat();
  CHECK(ddot<double>(alpha * a + beta * b, c) ==
        doctest::Approx(alpha * ddot<double>(a, c) + beta * ddot<double>(b, c)));
  const Tensor4d t(Eigen::Matrix<double, 9, 9>::Random());
  const Mat3d lhs = ddot(t, Mat3d(alpha * a + beta * b));
  const Mat3d rhs = alpha * ddot(t, a) + beta * ddot(t, b);
  CHECK((lhs - rhs).norm() < 1e-12);
}

TEST_CASE("det_inv basics and property check") {
  {
    auto [d, inv] = det_inv<double>(Mat3d::Identity());
    CHECK(d == doctest::Approx(1.0));
    CHECK((inv - Mat3d::Identity()).norm() == doctest::Approx(0.0));
  }
  {
    auto [d, inv] = det_inv<double>(2.0 * Mat3d::Identity());
    CHECK(d == doctest::Approx(8.0));
    CHECK((inv - 0.5 * Mat3d::Identity()).norm() == doctest::Approx(0.0));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const Mat3d a = random_spd();
    auto [d, inv] = det_inv<double>(a);
    CHECK(d == doctest::Approx(a.determinant()).epsilon(1e-12));
    CHECK((a * inv - Mat3d::Identity()).norm() < 1e-12);
  }
  CHECK_THROWS_AS(det_inv<double>(Mat3d::Zero()), SingularTensor);
}

TEST_CASE("major transpose flips the outer index pair") {
  const Tensor4d t(Eigen::Matrix<double, 9, 9>::Random());
  const Tensor4d tt = t.major_transpose();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) CHECK(tt(i, j, k, l) == t(k, l, i, j));
}
