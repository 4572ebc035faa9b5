#include "viscodyn/oracle.hpp"

#include <cmath>
#include <cstddef>

namespace viscodyn {
namespace oracle {

Mat3d convolve_Q(const ViscousBranch& br, ModelKind kind, const MooneyRivlin& mr,
                 const StrainHistory& history, const Mat3d& Q0) {
  const std::size_t n = history.t.size();
  const double tend = history.t.back();

  std::vector<Mat3d> S(n);
  for (std::size_t k = 0; k < n; ++k)
    S[k] = branch_siso(kind, mr, br, history.Ctilde[k]);

  // dS̃/ds on the sample grid
  std::vector<Mat3d> Sdot(n);
  for (std::size_t k = 1; k + 1 < n; ++k)
    Sdot[k] = (S[k + 1] - S[k - 1]) / (history.t[k + 1] - history.t[k - 1]);
  {
    const double h0 = history.t[1] - history.t[0];
    Sdot[0] = (-3.0 * S[0] + 4.0 * S[1] - S[2]) / (2.0 * h0);
    const double h1 = history.t[n - 1] - history.t[n - 2];
    Sdot[n - 1] = (3.0 * S[n - 1] - 4.0 * S[n - 2] + S[n - 3]) / (2.0 * h1);
  }

  Mat3d q = std::exp(-tend / br.tau) * Q0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double dt = history.t[k + 1] - history.t[k];
    const Mat3d f0 = std::exp(-(tend - history.t[k]) / br.tau) * Sdot[k];
    const Mat3d f1 = std::exp(-(tend - history.t[k + 1]) / br.tau) * Sdot[k + 1];
    q += 0.5 * dt * (f0 + f1);
  }
  return q;
}

Tensor4d fd_tangent(const std::function<Mat3d(const Mat3d&)>& stress_of_C, const Mat3d& C0,
                    double h) {
  Tensor4d t;
  for (int k = 0; k < 3; ++k) {
    for (int l = k; l < 3; ++l) {
      Mat3d pert = Mat3d::Zero();
      pert(k, l) += 1.0;
      pert(l, k) += 1.0;
      const Mat3d sp = stress_of_C(C0 + h * pert);
      const Mat3d sm = stress_of_C(C0 - h * pert);
      const Mat3d col = (sp - sm) / (2.0 * h);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          t(i, j, k, l) = col(i, j);
          t(i, j, l, k) = col(i, j);
        }
    }
  }
  return t;
}

}  // namespace oracle
}  // namespace viscodyn
