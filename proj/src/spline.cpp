#include "viscodyn/spline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace viscodyn {

KnotVector::KnotVector(int degree, std::vector<double> knots)
    : p_(degree), knots_(std::move(knots)) {
  if (p_ < 0) throw ConfigError("KnotVector: negative degree");
  if (static_cast<int>(knots_.size()) < 2 * (p_ + 1))
    throw ConfigError("KnotVector: too few knots");
  if (!std::is_sorted(knots_.begin(), knots_.end()))
    throw ConfigError("KnotVector: knots must be non-decreasing");
  if (knots_.front() != 0.0 || knots_.back() != 1.0)
    throw ConfigError("KnotVector: domain must be [0,1]");
  for (int i = 0; i <= p_; ++i) {
    if (knots_[i] != 0.0 || knots_[knots_.size() - 1 - i] != 1.0)
      throw ConfigError("KnotVector: knot vector must be open");
  }
  // interior multiplicities r <= p
  std::size_t i = p_ + 1;
  while (i + p_ + 1 < knots_.size()) {
    std::size_t j = i;
    while (j + 1 < knots_.size() && knots_[j + 1] == knots_[i]) ++j;
    if (static_cast<int>(j - i + 1) > std::max(p_, 1))
      throw ConfigError("KnotVector: interior multiplicity exceeds degree");
    i = j + 1;
  }
}

KnotVector KnotVector::uniform_open(int degree, int n_elements) {
  if (n_elements < 1) throw ConfigError("KnotVector: need at least one element");
  std::vector<double> knots(degree + 1, 0.0);
  for (int k = 1; k < n_elements; ++k)
    knots.push_back(static_cast<double>(k) / n_elements);
  knots.insert(knots.end(), degree + 1, 1.0);
  return KnotVector(degree, std::move(knots));
}

KnotVector KnotVector::with_breaks(int degree, const std::vector<double>& breaks,
                                   const std::vector<int>& mults) {
  std::vector<double> knots(degree + 1, 0.0);
  for (std::size_t k = 0; k < breaks.size(); ++k)
    knots.insert(knots.end(), mults[k], breaks[k]);
  knots.insert(knots.end(), degree + 1, 1.0);
  return KnotVector(degree, std::move(knots));
}

std::vector<double> KnotVector::breakpoints() const {
  std::vector<double> b;
  for (double k : knots_)
    if (b.empty() || k != b.back()) b.push_back(k);
  return b;
}

std::vector<int> KnotVector::interior_multiplicities() const {
  std::vector<int> m;
  std::size_t i = p_ + 1;
  while (i + p_ + 1 < knots_.size()) {
    std::size_t j = i;
    while (j + 1 < knots_.size() && knots_[j + 1] == knots_[i]) ++j;
    m.push_back(static_cast<int>(j - i + 1));
    i = j + 1;
  }
  return m;
}

std::vector<int> KnotVector::element_spans() const {
  std::vector<int> s;
  for (int i = p_; i < num_basis(); ++i)
    if (knots_[i] < knots_[i + 1]) s.push_back(i);
  return s;
}

std::vector<double> KnotVector::greville() const {
  std::vector<double> g(num_basis());
  for (int i = 0; i < num_basis(); ++i) {
    if (p_ == 0) {
      g[i] = 0.5 * (knots_[i] + knots_[i + 1]);
    } else {
      double sum = 0.0;
      for (int j = 1; j <= p_; ++j) sum += knots_[i + j];
      g[i] = sum / p_;
    }
  }
  return g;
}

KnotVector KnotVector::elevated() const {
  const std::vector<double> b = breakpoints();
  const std::vector<int> m = interior_multiplicities();
  std::vector<double> breaks(b.begin() + 1, b.end() - 1);
  std::vector<int> mults(m);
  for (int& v : mults) ++v;
  return with_breaks(p_ + 1, breaks, mults);
}

int KnotVector::find_span(double xi) const {
  const int n = num_basis();
  auto it = std::upper_bound(knots_.begin(), knots_.end(), xi);
  int span = static_cast<int>(it - knots_.begin()) - 1;
  return std::clamp(span, p_, n - 1);
}

void KnotVector::eval_basis(double xi, int& span, double* values, double* derivs) const {
  if (xi < 0.0 || xi > 1.0) throw DomainError("eval_basis: parametric point outside [0,1]");
  span = find_span(xi);
  const int p = p_;
  if (p == 0) {
    values[0] = 1.0;
    if (derivs) derivs[0] = 0.0;
    return;
  }

  // triangular table ndu[r][j] = N_{span-j+r}^j(xi)
  std::array<double, 64> buf{};  // supports degree <= 7
  auto ndu = [&](int r, int j) -> double& { return buf[r * (p + 1) + j]; };
  std::array<double, 8> left{}, right{};

  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = xi - knots_[span + 1 - j];
    right[j] = knots_[span + j] - xi;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = ndu(r, j - 1) / (right[r + 1] + left[j - r]);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }
  for (int r = 0; r <= p; ++r) values[r] = ndu(r, p);

  if (!derivs) return;
  for (int r = 0; r <= p; ++r) {
    const int i = span - p + r;  // global function index
    double term1 = 0.0, term2 = 0.0;
    if (r >= 1) {
      const double den = knots_[i + p] - knots_[i];
      if (den > 0.0) term1 = ndu(r - 1, p - 1) / den;
    }
    if (r <= p - 1) {
      const double den = knots_[i + p + 1] - knots_[i + 1];
      if (den > 0.0) term2 = ndu(r, p - 1) / den;
    }
    derivs[r] = p * (term1 - term2);
  }
}

BasisEval eval_bspline_basis(const KnotVector& kv, double xi) {
  BasisEval e;
  e.values.resize(kv.degree() + 1);
  e.derivs.resize(kv.degree() + 1);
  kv.eval_basis(xi, e.span, e.values.data(), e.derivs.data());
  return e;
}

NurbsSpace1D::NurbsSpace1D(KnotVector k, Eigen::VectorXd w)
    : kv(std::move(k)), weights(std::move(w)) {
  if (weights.size() != kv.num_basis())
    throw ConfigError("NurbsSpace1D: weight count does not match basis dimension");
  if ((weights.array() <= 0.0).any()) throw ConfigError("NurbsSpace1D: weights must be positive");
}

void NurbsSpace1D::eval(double xi, int& span, double* values, double* derivs) const {
  const int p = kv.degree();
  std::array<double, 8> N{}, dN{};
  kv.eval_basis(xi, span, N.data(), dN.data());
  double W = 0.0, dW = 0.0;
  for (int r = 0; r <= p; ++r) {
    const double w = weights[span - p + r];
    W += w * N[r];
    dW += w * dN[r];
  }
  for (int r = 0; r <= p; ++r) {
    const double w = weights[span - p + r];
    values[r] = w * N[r] / W;
    if (derivs) derivs[r] = w * (dN[r] * W - N[r] * dW) / (W * W);
  }
}

void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights) {
  points.resize(n);
  weights.resize(n);
  std::vector<double> x_desc(n), w_desc(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration from the Chebyshev estimate, roots on [-1,1]
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x_desc[i] = x;
    w_desc[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  for (int i = 0; i < n; ++i) {
    points[i] = 0.5 * (1.0 - x_desc[i]);  // map to [0,1], ascending
    weights[i] = 0.5 * w_desc[i];
  }
}

Eigen::MatrixXd greville_project(const KnotVector& source, const Eigen::MatrixXd& coeff,
                                 const KnotVector& target) {
  const int nt = target.num_basis();
  const std::vector<double> g = target.greville();

  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(nt, nt);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nt, coeff.cols());

  std::array<double, 8> N{};
  for (int r = 0; r < nt; ++r) {
    int span;
    target.eval_basis(g[r], span, N.data(), nullptr);
    for (int k = 0; k <= target.degree(); ++k) B(r, span - target.degree() + k) = N[k];

    source.eval_basis(g[r], span, N.data(), nullptr);
    for (int k = 0; k <= source.degree(); ++k)
      rhs.row(r) += N[k] * coeff.row(span - source.degree() + k);
  }
  return B.partialPivLu().solve(rhs);
}

}  // namespace viscodyn
