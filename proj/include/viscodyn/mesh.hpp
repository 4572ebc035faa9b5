#ifndef VISCODYN_MESH_HPP
#define VISCODYN_MESH_HPP

#include <array>
#include <vector>

#include "viscodyn/spline.hpp"
#include "viscodyn/tensor.hpp"

namespace viscodyn {

/// Trivariate NURBS space; global function index is i1 + n1*(i2 + n2*i3).
class TensorProductSpace {
public:
  TensorProductSpace(NurbsSpace1D s1, NurbsSpace1D s2, NurbsSpace1D s3);

  const NurbsSpace1D& dir(int l) const { return dir_[l]; }
  int dim(int l) const { return dir_[l].kv.num_basis(); }
  int num_basis() const { return dim(0) * dim(1) * dim(2); }
  int local_size() const {
    return (dir_[0].kv.degree() + 1) * (dir_[1].kv.degree() + 1) * (dir_[2].kv.degree() + 1);
  }
  int global_index(int i1, int i2, int i3) const { return i1 + dim(0) * (i2 + dim(1) * i3); }

  // Rational values and parametric gradients of the supported functions at
  // xi; `indices` receives their global indices.  All output arrays must
  // hold local_size() entries.
  void eval(const Vec3d& xi, int* indices, double* values, Vec3d* grads) const;

private:
  std::array<NurbsSpace1D, 3> dir_;
};

/// A NURBS space together with physical control points: the geometry map.
struct Patch {
  TensorProductSpace space;
  Eigen::Matrix<double, Eigen::Dynamic, 3> points;  // one row per basis function

  // X(xi) and the parametric Jacobian dX/dxi.
  void map(const Vec3d& xi, Vec3d& X, Mat3d& jac) const;
};

enum class GeometryKind { Box, Annulus };

struct GeometryTemplate {
  GeometryKind kind = GeometryKind::Box;
  Vec3d box_min = Vec3d::Zero();
  Vec3d box_max = Vec3d::Ones();
  double inner_radius = 0.1;   // annulus
  double outer_radius = 0.25;  // annulus
  double length = 0.2;         // annulus axial extent
};

/// Inf-sup-stable space pair on one patch: pressure of degree p at maximal
/// interior continuity, kinematic fields one degree higher at the same
/// continuity (a = 1, b = 0), sharing a single exactly-represented geometry.
/// Direction roles for the annulus: (radial, circumferential, axial); the
/// circumferential direction is closed by identifying the first and last
/// control points.
struct MixedPatch {
  Patch kinematic;                     // geometry carried in the kinematic space
  TensorProductSpace pressure;
  Eigen::Matrix<double, Eigen::Dynamic, 3> pressure_points;
  std::array<bool, 3> periodic = {false, false, false};
  GeometryTemplate geometry;
  int degree = 1;                      // pressure degree p
  std::array<int, 3> n_elements = {1, 1, 1};
};

MixedPatch build_mixed_pair(int degree, const std::array<int, 3>& n_elements,
                            const GeometryTemplate& geom);

/// Per-quadrature-point data cached on the reference configuration.
struct QuadPoint {
  double w;                                      // quadrature weight * |det dX/dxi|
  Vec3d X;                                       // physical point
  Eigen::VectorXd Nk;                            // kinematic values
  Eigen::Matrix<double, Eigen::Dynamic, 3> Gk;   // kinematic physical gradients
  Eigen::VectorXd Np;                            // pressure values
};

struct Element {
  std::array<int, 3> cell;      // element index per direction
  std::vector<int> kin_nodes;   // merged global kinematic node ids
  std::vector<int> prs_nodes;   // merged global pressure node ids
  std::vector<QuadPoint> qp;
};

struct FaceQuadPoint {
  double w;       // quadrature weight * surface area element
  Vec3d normal;   // outward unit reference normal
  Vec3d X;
  Eigen::VectorXd Nk;
  Eigen::Matrix<double, Eigen::Dynamic, 3> Gk;  // volumetric gradients at the face point
  Eigen::VectorXd Np;
  std::vector<int> kin_nodes;
  std::vector<int> prs_nodes;
};

/// A parametric boundary face: direction d, side 0 (xi_d = 0) or 1 (xi_d = 1).
struct Face {
  int dir = 0;
  int side = 0;
  std::vector<FaceQuadPoint> qp;
};

/// Discrete mesh: elements with cached basis data, node merge maps for the
/// periodic seam, and the breakpoint vertex grid used for output.
class Mesh {
public:
  explicit Mesh(MixedPatch patch);

  const MixedPatch& patch() const { return patch_; }
  const std::vector<Element>& elements() const { return elements_; }
  int n_kin_nodes() const { return n_kin_nodes_; }
  int n_prs_nodes() const { return n_prs_nodes_; }
  int kin_node(int raw) const { return kin_merge_[raw]; }
  int prs_node(int raw) const { return prs_merge_[raw]; }

  // Raw tensor indices (i1,i2,i3) of kinematic functions whose trace is
  // non-zero on the given face, mapped to merged node ids.
  std::vector<int> kin_face_nodes(int dir, int side) const;

  const Face& face(int dir, int side) const { return faces_[2 * dir + side]; }

  // vertex grid (element corners) for output and corner history
  const std::array<std::vector<double>, 3>& vertex_breaks() const { return breaks_; }
  int n_vertices() const;
  Vec3d vertex_param(int v) const;

  // Evaluate kinematic field (coefficients per merged node, 3 columns) and
  // its displacement gradient at a parametric point.
  void eval_kinematic(const Vec3d& xi, const Eigen::MatrixX3d& coeff, Vec3d& value,
                      Mat3d& grad) const;
  double eval_pressure(const Vec3d& xi, const Eigen::VectorXd& coeff) const;
  void geometry(const Vec3d& xi, Vec3d& X, Mat3d& jac) const { patch_.kinematic.map(xi, X, jac); }

  double volume() const { return volume_; }

private:
  MixedPatch patch_;
  std::vector<Element> elements_;
  std::array<Face, 6> faces_;
  std::vector<int> kin_merge_, prs_merge_;
  int n_kin_nodes_ = 0, n_prs_nodes_ = 0;
  std::array<std::vector<double>, 3> breaks_;
  double volume_ = 0.0;
};

}  // namespace viscodyn

#endif
