#ifndef VISCODYN_ORACLE_HPP
#define VISCODYN_ORACLE_HPP

#include <functional>
#include <vector>

#include "viscodyn/material.hpp"

namespace viscodyn {
namespace oracle {

/// Finely sampled modified right Cauchy-Green history, starting at t = 0 with
/// C̃ = I.  Used as the input of the hereditary-integral reference.
struct StrainHistory {
  std::vector<double> t;
  std::vector<Mat3d> Ctilde;
};

// Brute-force evaluation of the hereditary integral
//   Q(t_end) = e^{-t_end/tau} Q0 + \int_0^{t_end} e^{-(t_end-s)/tau} dS̃^a_iso/ds ds
// by trapezoidal quadrature on the sample grid, with dS̃/ds from centered
// differences (one-sided second order at the ends).
Mat3d convolve_Q(const ViscousBranch& br, ModelKind kind, const MooneyRivlin& mr,
                 const StrainHistory& history, const Mat3d& Q0 = Mat3d::Zero());

// Centered finite difference of a stress map S(C), symmetrized in the
// perturbation pair; recovers 2 dS/dC for differentiable maps.
Tensor4d fd_tangent(const std::function<Mat3d(const Mat3d&)>& stress_of_C, const Mat3d& C0,
                    double h);

}  // namespace oracle
}  // namespace viscodyn

#endif
