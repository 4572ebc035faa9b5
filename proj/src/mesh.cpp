#include "viscodyn/mesh.hpp"

#include <algorithm>
#include <cmath>

namespace viscodyn {

TensorProductSpace::TensorProductSpace(NurbsSpace1D s1, NurbsSpace1D s2, NurbsSpace1D s3)
    : dir_{std::move(s1), std::move(s2), std::move(s3)} {}

void TensorProductSpace::eval(const Vec3d& xi, int* indices, double* values,
                              Vec3d* grads) const {
  // weights factorize by construction, so the trivariate rational basis is
  // the product of the univariate rational bases
  std::array<std::array<double, 8>, 3> R, dR;
  std::array<int, 3> span, p;
  for (int l = 0; l < 3; ++l) {
    p[l] = dir_[l].kv.degree();
    dir_[l].eval(xi[l], span[l], R[l].data(), dR[l].data());
  }
  int c = 0;
  for (int a3 = 0; a3 <= p[2]; ++a3)
    for (int a2 = 0; a2 <= p[1]; ++a2)
      for (int a1 = 0; a1 <= p[0]; ++a1, ++c) {
        const int i1 = span[0] - p[0] + a1;
        const int i2 = span[1] - p[1] + a2;
        const int i3 = span[2] - p[2] + a3;
        indices[c] = global_index(i1, i2, i3);
        values[c] = R[0][a1] * R[1][a2] * R[2][a3];
        if (grads) {
          grads[c][0] = dR[0][a1] * R[1][a2] * R[2][a3];
          grads[c][1] = R[0][a1] * dR[1][a2] * R[2][a3];
          grads[c][2] = R[0][a1] * R[1][a2] * dR[2][a3];
        }
      }
}

void Patch::map(const Vec3d& xi, Vec3d& X, Mat3d& jac) const {
  const int nloc = space.local_size();
  std::vector<int> idx(nloc);
  std::vector<double> val(nloc);
  std::vector<Vec3d> grad(nloc);
  space.eval(xi, idx.data(), val.data(), grad.data());
  X.setZero();
  jac.setZero();
  for (int a = 0; a < nloc; ++a) {
    const Vec3d P = points.row(idx[a]).transpose();
    X += val[a] * P;
    jac += P * grad[a].transpose();
  }
}

namespace {

// Exact unit circle: degree 2, four quadrant arcs, 9 control points stored in
// homogeneous form (w x, w y, w).
struct Curve2D {
  KnotVector kv;
  Eigen::MatrixXd hcoeff;
};

Curve2D unit_circle() {
  const double s = std::sqrt(2.0) / 2.0;
  KnotVector kv = KnotVector::with_breaks(2, {0.25, 0.5, 0.75}, {2, 2, 2});
  Eigen::MatrixXd h(9, 3);
  const double pts[9][2] = {{1, 0},   {1, 1},  {0, 1},  {-1, 1}, {-1, 0},
                            {-1, -1}, {0, -1}, {1, -1}, {1, 0}};
  for (int i = 0; i < 9; ++i) {
    const double w = (i % 2 == 0) ? 1.0 : s;
    h(i, 0) = w * pts[i][0];
    h(i, 1) = w * pts[i][1];
    h(i, 2) = w;
  }
  return {std::move(kv), std::move(h)};
}

// B-spline coefficients of an affine function (linear precision at the
// Greville abscissae).
Eigen::VectorXd affine_coeffs(const KnotVector& kv, double lo, double hi) {
  const std::vector<double> g = kv.greville();
  Eigen::VectorXd c(kv.num_basis());
  for (int i = 0; i < kv.num_basis(); ++i) c[i] = lo + (hi - lo) * g[i];
  return c;
}

struct BuiltSpace {
  TensorProductSpace space;
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;
};

BuiltSpace build_box_space(const std::array<KnotVector, 3>& kv, const GeometryTemplate& geom) {
  std::array<Eigen::VectorXd, 3> c;
  for (int l = 0; l < 3; ++l) c[l] = affine_coeffs(kv[l], geom.box_min[l], geom.box_max[l]);
  const int n1 = static_cast<int>(c[0].size());
  const int n2 = static_cast<int>(c[1].size());
  const int n3 = static_cast<int>(c[2].size());
  Eigen::Matrix<double, Eigen::Dynamic, 3> pts(n1 * n2 * n3, 3);
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i)
        pts.row(i + n1 * (j + n2 * k)) = Eigen::RowVector3d(c[0][i], c[1][j], c[2][k]);
  return {TensorProductSpace(NurbsSpace1D(kv[0], Eigen::VectorXd::Ones(n1)),
                             NurbsSpace1D(kv[1], Eigen::VectorXd::Ones(n2)),
                             NurbsSpace1D(kv[2], Eigen::VectorXd::Ones(n3))),
          std::move(pts)};
}

// Direction roles: (radial, circumferential, axial); this ordering keeps the
// parametric frame right-handed, det(dX/dxi) > 0.
BuiltSpace build_annulus_space(const KnotVector& rkv, const KnotVector& ckv,
                               const KnotVector& akv, const GeometryTemplate& geom) {
  const Curve2D coarse = unit_circle();
  const Eigen::MatrixXd circ = greville_project(coarse.kv, coarse.hcoeff, ckv);
  const Eigen::VectorXd rho = affine_coeffs(rkv, geom.inner_radius, geom.outer_radius);
  const Eigen::VectorXd z = affine_coeffs(akv, 0.0, geom.length);

  const int n1 = static_cast<int>(rho.size());
  const int n2 = static_cast<int>(circ.rows());
  const int n3 = static_cast<int>(z.size());
  Eigen::VectorXd w2(n2);
  for (int i = 0; i < n2; ++i) w2[i] = circ(i, 2);
  Eigen::Matrix<double, Eigen::Dynamic, 3> pts(n1 * n2 * n3, 3);
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        const int row = i + n1 * (j + n2 * k);
        pts(row, 0) = circ(j, 0) / w2[j] * rho[i];
        pts(row, 1) = circ(j, 1) / w2[j] * rho[i];
        pts(row, 2) = z[k];
      }
  return {TensorProductSpace(NurbsSpace1D(rkv, Eigen::VectorXd::Ones(n1)),
                             NurbsSpace1D(ckv, w2),
                             NurbsSpace1D(akv, Eigen::VectorXd::Ones(n3))),
          std::move(pts)};
}

}  // namespace

MixedPatch build_mixed_pair(int degree, const std::array<int, 3>& n_elements,
                            const GeometryTemplate& geom) {
  if (degree < 1) throw ConfigError("build_mixed_pair: pressure degree must be >= 1");
  for (int l = 0; l < 3; ++l)
    if (n_elements[l] < 1) throw ConfigError("build_mixed_pair: element counts must be positive");

  if (geom.kind == GeometryKind::Box) {
    const std::array<KnotVector, 3> pkv = {KnotVector::uniform_open(degree, n_elements[0]),
                                           KnotVector::uniform_open(degree, n_elements[1]),
                                           KnotVector::uniform_open(degree, n_elements[2])};
    const std::array<KnotVector, 3> kkv = {pkv[0].elevated(), pkv[1].elevated(),
                                           pkv[2].elevated()};
    BuiltSpace ps = build_box_space(pkv, geom);
    BuiltSpace ks = build_box_space(kkv, geom);
    return MixedPatch{Patch{std::move(ks.space), std::move(ks.points)},
                      std::move(ps.space),
                      std::move(ps.points),
                      {false, false, false},
                      geom,
                      degree,
                      n_elements};
  }

  // annulus direction roles: (radial, circumferential, axial)
  if (degree < 2) throw ConfigError("build_mixed_pair: annulus requires degree >= 2");
  if (n_elements[1] % 4 != 0)
    throw ConfigError("build_mixed_pair: circumferential element count must be divisible by 4");
  if (!(geom.inner_radius > 0.0 && geom.outer_radius > geom.inner_radius))
    throw ConfigError("build_mixed_pair: invalid annulus radii");

  // circumferential pressure knots: C^0 at the quadrant joints
  std::vector<double> breaks;
  std::vector<int> mults;
  for (int k = 1; k < n_elements[1]; ++k) {
    breaks.push_back(static_cast<double>(k) / n_elements[1]);
    mults.push_back(k % (n_elements[1] / 4) == 0 ? degree : 1);
  }
  const KnotVector circ_p = KnotVector::with_breaks(degree, breaks, mults);
  const KnotVector rad_p = KnotVector::uniform_open(degree, n_elements[0]);
  const KnotVector ax_p = KnotVector::uniform_open(degree, n_elements[2]);

  BuiltSpace ps = build_annulus_space(rad_p, circ_p, ax_p, geom);
  BuiltSpace ks =
      build_annulus_space(rad_p.elevated(), circ_p.elevated(), ax_p.elevated(), geom);
  return MixedPatch{Patch{std::move(ks.space), std::move(ks.points)},
                    std::move(ps.space),
                    std::move(ps.points),
                    {false, true, false},
                    geom,
                    degree,
                    n_elements};
}

namespace {

std::vector<int> merge_map(const TensorProductSpace& space, const std::array<bool, 3>& periodic,
                           int& n_nodes) {
  const int n1 = space.dim(0), n2 = space.dim(1), n3 = space.dim(2);
  std::vector<int> map(static_cast<std::size_t>(n1) * n2 * n3, -1);
  n_nodes = 0;
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        const int raw = i + n1 * (j + n2 * k);
        const int ii = (periodic[0] && i == n1 - 1) ? 0 : i;
        const int jj = (periodic[1] && j == n2 - 1) ? 0 : j;
        const int kk = (periodic[2] && k == n3 - 1) ? 0 : k;
        const int owner = ii + n1 * (jj + n2 * kk);
        map[raw] = (owner == raw) ? n_nodes++ : map[owner];
      }
  return map;
}

}  // namespace

Mesh::Mesh(MixedPatch patch) : patch_(std::move(patch)) {
  const TensorProductSpace& kin = patch_.kinematic.space;
  const TensorProductSpace& prs = patch_.pressure;

  kin_merge_ = merge_map(kin, patch_.periodic, n_kin_nodes_);
  prs_merge_ = merge_map(prs, patch_.periodic, n_prs_nodes_);

  for (int l = 0; l < 3; ++l) breaks_[l] = kin.dir(l).kv.breakpoints();

  const int nq1 = patch_.degree + 2;  // p + a + 1 Gauss points per direction
  std::vector<double> gp, gw;
  gauss_legendre(nq1, gp, gw);

  std::array<std::vector<int>, 3> kspans, pspans;
  for (int l = 0; l < 3; ++l) {
    kspans[l] = kin.dir(l).kv.element_spans();
    pspans[l] = prs.dir(l).kv.element_spans();
    if (kspans[l].size() != breaks_[l].size() - 1 || pspans[l].size() != kspans[l].size())
      throw ConfigError("Mesh: element grids of the space pair do not match");
  }

  const int nloc_k = kin.local_size();
  const int nloc_p = prs.local_size();
  std::vector<int> kidx(nloc_k), pidx(nloc_p);
  std::vector<double> kval(nloc_k), pval(nloc_p);
  std::vector<Vec3d> kgrad(nloc_k);

  auto connectivity = [&](const std::array<int, 3>& cell, std::vector<int>& knodes,
                          std::vector<int>& pnodes) {
    knodes.resize(nloc_k);
    pnodes.resize(nloc_p);
    int c = 0;
    for (int a3 = 0; a3 <= kin.dir(2).kv.degree(); ++a3)
      for (int a2 = 0; a2 <= kin.dir(1).kv.degree(); ++a2)
        for (int a1 = 0; a1 <= kin.dir(0).kv.degree(); ++a1, ++c) {
          const int i1 = kspans[0][cell[0]] - kin.dir(0).kv.degree() + a1;
          const int i2 = kspans[1][cell[1]] - kin.dir(1).kv.degree() + a2;
          const int i3 = kspans[2][cell[2]] - kin.dir(2).kv.degree() + a3;
          knodes[c] = kin_merge_[kin.global_index(i1, i2, i3)];
        }
    c = 0;
    for (int a3 = 0; a3 <= prs.dir(2).kv.degree(); ++a3)
      for (int a2 = 0; a2 <= prs.dir(1).kv.degree(); ++a2)
        for (int a1 = 0; a1 <= prs.dir(0).kv.degree(); ++a1, ++c) {
          const int i1 = pspans[0][cell[0]] - prs.dir(0).kv.degree() + a1;
          const int i2 = pspans[1][cell[1]] - prs.dir(1).kv.degree() + a2;
          const int i3 = pspans[2][cell[2]] - prs.dir(2).kv.degree() + a3;
          pnodes[c] = prs_merge_[prs.global_index(i1, i2, i3)];
        }
  };

  auto eval_at = [&](const Vec3d& xi, QuadPoint& q) {
    kin.eval(xi, kidx.data(), kval.data(), kgrad.data());
    prs.eval(xi, pidx.data(), pval.data(), nullptr);
    Vec3d X = Vec3d::Zero();
    Mat3d jac = Mat3d::Zero();
    for (int a = 0; a < nloc_k; ++a) {
      const Vec3d P = patch_.kinematic.points.row(kidx[a]).transpose();
      X += kval[a] * P;
      jac += P * kgrad[a].transpose();
    }
    const double det = jac.determinant();
    if (!(det > 0.0)) throw DegenerateMapping("Mesh: non-positive geometry Jacobian");
    const Mat3d jinvT = jac.inverse().transpose();
    q.X = X;
    q.Nk = Eigen::Map<Eigen::VectorXd>(kval.data(), nloc_k);
    q.Gk.resize(nloc_k, 3);
    for (int a = 0; a < nloc_k; ++a) q.Gk.row(a) = (jinvT * kgrad[a]).transpose();
    q.Np = Eigen::Map<Eigen::VectorXd>(pval.data(), nloc_p);
    return det;
  };

  const int ne1 = static_cast<int>(kspans[0].size());
  const int ne2 = static_cast<int>(kspans[1].size());
  const int ne3 = static_cast<int>(kspans[2].size());
  elements_.reserve(static_cast<std::size_t>(ne1) * ne2 * ne3);
  for (int e3 = 0; e3 < ne3; ++e3)
    for (int e2 = 0; e2 < ne2; ++e2)
      for (int e1 = 0; e1 < ne1; ++e1) {
        Element el;
        el.cell = {e1, e2, e3};
        connectivity(el.cell, el.kin_nodes, el.prs_nodes);
        el.qp.reserve(static_cast<std::size_t>(nq1) * nq1 * nq1);
        for (int q3 = 0; q3 < nq1; ++q3)
          for (int q2 = 0; q2 < nq1; ++q2)
            for (int q1 = 0; q1 < nq1; ++q1) {
              Vec3d xi;
              double scale = 1.0;
              const std::array<int, 3> qi = {q1, q2, q3};
              for (int l = 0; l < 3; ++l) {
                const double b0 = breaks_[l][el.cell[l]];
                const double b1 = breaks_[l][el.cell[l] + 1];
                xi[l] = b0 + (b1 - b0) * gp[qi[l]];
                scale *= (b1 - b0) * gw[qi[l]];
              }
              QuadPoint q;
              const double det = eval_at(xi, q);
              q.w = scale * det;
              volume_ += q.w;
              el.qp.push_back(std::move(q));
            }
        elements_.push_back(std::move(el));
      }

  for (int dir = 0; dir < 3; ++dir) {
    for (int side = 0; side < 2; ++side) {
      Face& face = faces_[2 * dir + side];
      face.dir = dir;
      face.side = side;
      if (patch_.periodic[dir]) continue;  // closed direction: no boundary
      const int ta = (dir + 1) % 3, tb = (dir + 2) % 3;
      const double xid = side == 0 ? 0.0 : 1.0;
      const int nea = static_cast<int>(kspans[ta].size());
      const int neb = static_cast<int>(kspans[tb].size());
      for (int eb = 0; eb < neb; ++eb)
        for (int ea = 0; ea < nea; ++ea) {
          std::array<int, 3> cell;
          cell[dir] = side == 0 ? 0 : static_cast<int>(kspans[dir].size()) - 1;
          cell[ta] = ea;
          cell[tb] = eb;
          std::vector<int> knodes, pnodes;
          connectivity(cell, knodes, pnodes);
          for (int qb = 0; qb < nq1; ++qb)
            for (int qa = 0; qa < nq1; ++qa) {
              Vec3d xi;
              xi[dir] = xid;
              double scale = 1.0;
              {
                const double b0 = breaks_[ta][ea], b1 = breaks_[ta][ea + 1];
                xi[ta] = b0 + (b1 - b0) * gp[qa];
                scale *= (b1 - b0) * gw[qa];
              }
              {
                const double b0 = breaks_[tb][eb], b1 = breaks_[tb][eb + 1];
                xi[tb] = b0 + (b1 - b0) * gp[qb];
                scale *= (b1 - b0) * gw[qb];
              }
              FaceQuadPoint fq;
              QuadPoint q;
              eval_at(xi, q);
              Vec3d X;
              Mat3d jac;
              patch_.kinematic.map(xi, X, jac);
              const Vec3d va = jac.col(ta), vb = jac.col(tb);
              Vec3d area = va.cross(vb);
              const Vec3d outward = jac.inverse().transpose().col(dir) * (side == 0 ? -1.0 : 1.0);
              if (area.dot(outward) < 0.0) area = -area;
              fq.w = scale * area.norm();
              fq.normal = area.normalized();
              fq.X = q.X;
              fq.Nk = std::move(q.Nk);
              fq.Gk = std::move(q.Gk);
              fq.Np = std::move(q.Np);
              fq.kin_nodes = knodes;
              fq.prs_nodes = pnodes;
              face.qp.push_back(std::move(fq));
            }
        }
    }
  }
}

std::vector<int> Mesh::kin_face_nodes(int dir, int side) const {
  const TensorProductSpace& kin = patch_.kinematic.space;
  const int n1 = kin.dim(0), n2 = kin.dim(1), n3 = kin.dim(2);
  std::vector<int> nodes;
  for (int k = 0; k < n3; ++k)
    for (int j = 0; j < n2; ++j)
      for (int i = 0; i < n1; ++i) {
        const std::array<int, 3> idx = {i, j, k};
        const std::array<int, 3> dims = {n1, n2, n3};
        if (idx[dir] != (side == 0 ? 0 : dims[dir] - 1)) continue;
        nodes.push_back(kin_merge_[kin.global_index(i, j, k)]);
      }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

int Mesh::n_vertices() const {
  return static_cast<int>(breaks_[0].size() * breaks_[1].size() * breaks_[2].size());
}

Vec3d Mesh::vertex_param(int v) const {
  const int n1 = static_cast<int>(breaks_[0].size());
  const int n2 = static_cast<int>(breaks_[1].size());
  const int i = v % n1;
  const int j = (v / n1) % n2;
  const int k = v / (n1 * n2);
  return Vec3d(breaks_[0][i], breaks_[1][j], breaks_[2][k]);
}

void Mesh::eval_kinematic(const Vec3d& xi, const Eigen::MatrixX3d& coeff, Vec3d& value,
                          Mat3d& grad) const {
  const TensorProductSpace& kin = patch_.kinematic.space;
  const int nloc = kin.local_size();
  std::vector<int> idx(nloc);
  std::vector<double> val(nloc);
  std::vector<Vec3d> g(nloc);
  kin.eval(xi, idx.data(), val.data(), g.data());
  Mat3d jac = Mat3d::Zero();
  for (int a = 0; a < nloc; ++a) {
    const Vec3d P = patch_.kinematic.points.row(idx[a]).transpose();
    jac += P * g[a].transpose();
  }
  const Mat3d jinvT = jac.inverse().transpose();
  value.setZero();
  grad.setZero();
  for (int a = 0; a < nloc; ++a) {
    const Vec3d ca = coeff.row(kin_merge_[idx[a]]).transpose();
    value += val[a] * ca;
    grad += ca * (jinvT * g[a]).transpose();
  }
}

double Mesh::eval_pressure(const Vec3d& xi, const Eigen::VectorXd& coeff) const {
  const int nloc = patch_.pressure.local_size();
  std::vector<int> idx(nloc);
  std::vector<double> val(nloc);
  patch_.pressure.eval(xi, idx.data(), val.data(), nullptr);
  double p = 0.0;
  for (int a = 0; a < nloc; ++a) p += val[a] * coeff[prs_merge_[idx[a]]];
  return p;
}

}  // namespace viscodyn
