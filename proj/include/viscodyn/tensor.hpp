#ifndef VISCODYN_TENSOR_HPP
#define VISCODYN_TENSOR_HPP

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "viscodyn/errors.hpp"

namespace viscodyn {

template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;
template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

using Mat3d = Mat3<double>;
using Vec3d = Vec3<double>;

/// Dense fourth-order tensor in 3D, stored as the 9x9 matrix of its action on
/// row-major flattened second-order tensors: row = 3i+j, col = 3k+l.  In this
/// flattening all the double contractions of the constitutive algorithms are
/// plain matrix products, and the major transpose is the matrix transpose.
template <typename Scalar>
class Tensor4 {
public:
  using Flat = Eigen::Matrix<Scalar, 9, 9>;

  Tensor4() : m_(Flat::Zero()) {}
  explicit Tensor4(const Flat& m) : m_(m) {}

  static Tensor4 zero() { return Tensor4(); }

  // (i,j,k,l) -> delta_ik delta_jl; acts as A -> A on any second-order tensor.
  static Tensor4 identity() { return Tensor4(Flat::Identity()); }

  // (i,j,k,l) -> (delta_ik delta_jl + delta_il delta_jk)/2; identity on
  // symmetric tensors, symmetrizer otherwise.
  static Tensor4 symmetric_identity() {
    Tensor4 t;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l)
            t(i, j, k, l) = 0.5 * ((i == k && j == l) + (i == l && j == k));
    return t;
  }

  Scalar& operator()(int i, int j, int k, int l) { return m_(3 * i + j, 3 * k + l); }
  Scalar operator()(int i, int j, int k, int l) const { return m_(3 * i + j, 3 * k + l); }

  Flat& flat() { return m_; }
  const Flat& flat() const { return m_; }

  // Major transpose: T^t_ijkl = T_klij.
  Tensor4 major_transpose() const { return Tensor4(m_.transpose()); }

  Tensor4 operator+(const Tensor4& o) const { return Tensor4(m_ + o.m_); }
  Tensor4 operator-(const Tensor4& o) const { return Tensor4(m_ - o.m_); }
  Tensor4 operator-() const { return Tensor4(-m_); }
  Tensor4& operator+=(const Tensor4& o) {
    m_ += o.m_;
    return *this;
  }
  Tensor4& operator-=(const Tensor4& o) {
    m_ -= o.m_;
    return *this;
  }
  Tensor4 operator*(Scalar s) const { return Tensor4(m_ * s); }
  Tensor4& operator*=(Scalar s) {
    m_ *= s;
    return *this;
  }
  friend Tensor4 operator*(Scalar s, const Tensor4& t) { return t * s; }

  Scalar norm() const { return m_.norm(); }

private:
  Flat m_;
};

using Tensor4d = Tensor4<double>;

template <typename Scalar>
Eigen::Matrix<Scalar, 9, 1> flatten(const Mat3<Scalar>& a) {
  Eigen::Matrix<Scalar, 9, 1> v;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) v(3 * i + j) = a(i, j);
  return v;
}

template <typename Scalar>
Mat3<Scalar> unflatten(const Eigen::Matrix<Scalar, 9, 1>& v) {
  Mat3<Scalar> a;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = v(3 * i + j);
  return a;
}

// |A|^2 = tr[A A^T]
template <typename Scalar>
Scalar magnitude_sq(const Mat3<Scalar>& a) {
  return a.squaredNorm();
}

template <typename Scalar>
Mat3<Scalar> symmetrize(const Mat3<Scalar>& a) {
  return Scalar(0.5) * (a + a.transpose());
}

// dyad(A,B)_ijkl = A_ij B_kl
template <typename Scalar>
Tensor4<Scalar> dyad(const Mat3<Scalar>& a, const Mat3<Scalar>& b) {
  return Tensor4<Scalar>(flatten(a) * flatten(b).transpose());
}

// symdyad(A,B)_ijkl = (A_ik B_jl + A_il B_jk)/2, the odot product.
template <typename Scalar>
Tensor4<Scalar> symdyad(const Mat3<Scalar>& a, const Mat3<Scalar>& b) {
  Tensor4<Scalar> t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          t(i, j, k, l) = Scalar(0.5) * (a(i, k) * b(j, l) + a(i, l) * b(j, k));
  return t;
}

// A : B = A_ij B_ij
template <typename Scalar>
Scalar ddot(const Mat3<Scalar>& a, const Mat3<Scalar>& b) {
  return a.cwiseProduct(b).sum();
}

// (T : B)_ij = T_ijkl B_kl
template <typename Scalar>
Mat3<Scalar> ddot(const Tensor4<Scalar>& t, const Mat3<Scalar>& b) {
  return unflatten<Scalar>(t.flat() * flatten(b));
}

// (B : T)_kl = B_ij T_ijkl
template <typename Scalar>
Mat3<Scalar> ddot(const Mat3<Scalar>& b, const Tensor4<Scalar>& t) {
  return unflatten<Scalar>(t.flat().transpose() * flatten(b));
}

// (S : T)_ijkl = S_ijmn T_mnkl
template <typename Scalar>
Tensor4<Scalar> ddot(const Tensor4<Scalar>& s, const Tensor4<Scalar>& t) {
  return Tensor4<Scalar>(s.flat() * t.flat());
}

// Determinant and inverse via the cofactor formula.  Throws SingularTensor
// when |det| <= 1e-14 (inputs are O(1) deformation tensors).
template <typename Scalar>
std::pair<Scalar, Mat3<Scalar>> det_inv(const Mat3<Scalar>& a) {
  Mat3<Scalar> cof;
  cof(0, 0) = a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  cof(0, 1) = a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2);
  cof(0, 2) = a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0);
  cof(1, 0) = a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2);
  cof(1, 1) = a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0);
  cof(1, 2) = a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1);
  cof(2, 0) = a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1);
  cof(2, 1) = a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2);
  cof(2, 2) = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  const Scalar det = a(0, 0) * cof(0, 0) + a(0, 1) * cof(0, 1) + a(0, 2) * cof(0, 2);
  if (!(std::abs(det) > Scalar(1e-14)))
    throw SingularTensor("det_inv: |det| <= 1e-14");
  Mat3<Scalar> inv;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) inv(i, j) = cof(j, i) / det;
  return {det, inv};
}

}  // namespace viscodyn

#endif
