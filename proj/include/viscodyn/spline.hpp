#ifndef VISCODYN_SPLINE_HPP
#define VISCODYN_SPLINE_HPP

#include <Eigen/Dense>
#include <vector>

#include "viscodyn/errors.hpp"

namespace viscodyn {

/// Open knot vector on [0,1] with interior multiplicities bounded by the
/// degree (at least C^0 everywhere inside).
class KnotVector {
public:
  KnotVector(int degree, std::vector<double> knots);

  // n_elements uniform spans at maximal interior continuity C^{p-1}.
  static KnotVector uniform_open(int degree, int n_elements);
  // open vector with prescribed interior breakpoints and multiplicities
  static KnotVector with_breaks(int degree, const std::vector<double>& breaks,
                                const std::vector<int>& mults);

  int degree() const { return p_; }
  int num_basis() const { return static_cast<int>(knots_.size()) - p_ - 1; }
  const std::vector<double>& knots() const { return knots_; }

  std::vector<double> breakpoints() const;          // unique knots
  std::vector<int> interior_multiplicities() const; // aligned with breakpoints()[1..m-2]
  std::vector<int> element_spans() const;           // span index of each nonempty span
  std::vector<double> greville() const;

  // Same breakpoints, degree + 1, every multiplicity raised by one; the
  // continuity across each breakpoint is preserved.
  KnotVector elevated() const;

  int find_span(double xi) const;

  // Cox-de Boor values and first derivatives of the p+1 basis functions
  // supported on the span containing xi.  Global function indices are
  // span - p .. span.  Throws DomainError outside [0,1].
  void eval_basis(double xi, int& span, double* values, double* derivs) const;

private:
  int p_;
  std::vector<double> knots_;
};

// Spec-level convenience wrapper around KnotVector::eval_basis.
struct BasisEval {
  int span;
  std::vector<double> values;
  std::vector<double> derivs;
};
BasisEval eval_bspline_basis(const KnotVector& kv, double xi);

/// Univariate NURBS space: B-spline basis with positive weights.
struct NurbsSpace1D {
  KnotVector kv;
  Eigen::VectorXd weights;

  NurbsSpace1D(KnotVector k, Eigen::VectorXd w);

  // Rational values and derivatives (quotient rule) of the p+1 supported
  // functions at xi.
  void eval(double xi, int& span, double* values, double* derivs) const;
};

// Gauss-Legendre rule on [0,1].
void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights);

// Interpolate a spline curve given in homogeneous coordinates (rows of
// `coeff`) into a richer space: collocation at the Greville abscissae of
// `target`.  Exact whenever span{source} is contained in span{target}
// (knot refinement and degree elevation both are).
Eigen::MatrixXd greville_project(const KnotVector& source, const Eigen::MatrixXd& coeff,
                                 const KnotVector& target);

}  // namespace viscodyn

#endif
