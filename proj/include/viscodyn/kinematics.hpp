#ifndef VISCODYN_KINEMATICS_HPP
#define VISCODYN_KINEMATICS_HPP

#include "viscodyn/tensor.hpp"

namespace viscodyn {

/// Deformation measures at a material point, all derived from the referential
/// displacement gradient.  P and Ptilde are the Lagrangian deviatoric
/// projectors built on the symmetric fourth-order identity.
struct DeformationState {
  Mat3d F;       // I + gradU
  double J;      // det F > 0
  Mat3d C;       // F^T F
  Mat3d Cinv;
  Mat3d Ctilde;  // J^{-2/3} C, det = 1
  double Jm23;   // J^{-2/3}
  double Jp43;   // J^{4/3}
  Tensor4d P;       // I4s - (1/3) Cinv x C
  Tensor4d Ptilde;  // Cinv odot Cinv - (1/3) Cinv x Cinv
};

// Throws InvertedElement when det(I + gradU) <= 0.
DeformationState build_deformation(const Mat3d& gradU);

// Variant used by finite-difference oracles: all measures from a given C
// (J = sqrt(det C)); F is set to a symmetric placeholder with F^T F = C only
// where unused by constitutive algorithms.
DeformationState deformation_from_C(const Mat3d& C);

// S_iso contribution of a fictitious stress: J^{-2/3} P : S̃.
Mat3d project_deviatoric(const DeformationState& def, const Mat3d& Stilde);

}  // namespace viscodyn

#endif
