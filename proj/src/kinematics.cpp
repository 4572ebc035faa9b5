#include "viscodyn/kinematics.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace viscodyn {

namespace {

DeformationState finish(DeformationState s) {
  auto [det, inv] = det_inv(s.C);
  (void)det;
  s.Cinv = inv;
  s.Jm23 = std::pow(s.J, -2.0 / 3.0);
  s.Jp43 = std::pow(s.J, 4.0 / 3.0);
  s.Ctilde = s.Jm23 * s.C;
  s.P = Tensor4d::symmetric_identity() - (1.0 / 3.0) * dyad(s.Cinv, s.C);
  s.Ptilde = symdyad(s.Cinv, s.Cinv) - (1.0 / 3.0) * dyad(s.Cinv, s.Cinv);
  return s;
}

}  // namespace

DeformationState build_deformation(const Mat3d& gradU) {
  DeformationState s;
  s.F = Mat3d::Identity() + gradU;
  const double det = s.F.determinant();
  if (!(det > 0.0)) throw InvertedElement("build_deformation: det(I + gradU) <= 0");
  s.J = det;
  s.C = s.F.transpose() * s.F;
  return finish(s);
}

DeformationState deformation_from_C(const Mat3d& C) {
  DeformationState s;
  s.C = symmetrize(C);
  const double det = s.C.determinant();
  if (!(det > 0.0)) throw InvertedElement("deformation_from_C: det C <= 0");
  s.J = std::sqrt(det);
  Eigen::SelfAdjointEigenSolver<Mat3d> eig(s.C);
  s.F = eig.operatorSqrt();
  return finish(s);
}

Mat3d project_deviatoric(const DeformationState& def, const Mat3d& Stilde) {
  return def.Jm23 * (Stilde - (1.0 / 3.0) * ddot(Stilde, def.C) * def.Cinv);
}

}  // namespace viscodyn
