#include "viscodyn/diagnostics.hpp"

namespace viscodyn {

EnergyRecord compute_energies(const Mesh& mesh, const Material& mat, const History& history,
                              const SolutionState& state) {
  EnergyRecord rec;
  rec.t = state.t;
  const auto& elements = mesh.elements();
  for (std::size_t e = 0; e < elements.size(); ++e) {
    const Element& el = elements[e];
    const int nk = static_cast<int>(el.kin_nodes.size());
    Eigen::MatrixX3d Uloc(nk, 3), Vloc(nk, 3);
    for (int a = 0; a < nk; ++a) {
      Uloc.row(a) = state.U.row(el.kin_nodes[a]);
      Vloc.row(a) = state.V.row(el.kin_nodes[a]);
    }
    for (std::size_t q = 0; q < el.qp.size(); ++q) {
      const QuadPoint& qp = el.qp[q];
      const Vec3d v = Vloc.transpose() * qp.Nk;
      const Vec3d u = Uloc.transpose() * qp.Nk;
      const Mat3d gradU = Uloc.transpose() * qp.Gk;
      const DeformationState def = build_deformation(gradU);

      rec.kinetic += qp.w * 0.5 * mat.rho0 * v.squaredNorm();
      rec.potential += qp.w * (mr_derivatives(mat.base, def.Ctilde).energy +
                               branch_energy(mat, history[e][q], def.Ctilde));
      rec.dissipation_rate += qp.w * dissipation_rate(mat, history[e][q]);
      rec.linear_momentum += qp.w * mat.rho0 * v;
      rec.angular_momentum += qp.w * mat.rho0 * (qp.X + u).cross(v);
    }
  }
  rec.total = rec.kinetic + rec.potential;
  return rec;
}

std::pair<Vec3d, Vec3d> compute_momenta(const Mesh& mesh, double rho0,
                                        const Eigen::MatrixX3d& U, const Eigen::MatrixX3d& V) {
  Vec3d lin = Vec3d::Zero(), ang = Vec3d::Zero();
  for (const Element& el : mesh.elements()) {
    const int nk = static_cast<int>(el.kin_nodes.size());
    Eigen::MatrixX3d Uloc(nk, 3), Vloc(nk, 3);
    for (int a = 0; a < nk; ++a) {
      Uloc.row(a) = U.row(el.kin_nodes[a]);
      Vloc.row(a) = V.row(el.kin_nodes[a]);
    }
    for (const QuadPoint& qp : el.qp) {
      const Vec3d v = Vloc.transpose() * qp.Nk;
      const Vec3d u = Uloc.transpose() * qp.Nk;
      lin += qp.w * rho0 * v;
      ang += qp.w * rho0 * (qp.X + u).cross(v);
    }
  }
  return {lin, ang};
}

ForceRecord compute_surface_force(const Mesh& mesh, const Material& mat,
                                  const std::vector<MaterialState>& face_states, int dir,
                                  int side, const Eigen::MatrixX3d& U, const Eigen::VectorXd& P,
                                  double t, double Ux) {
  ForceRecord rec;
  rec.t = t;
  rec.Ux = Ux;
  const Face& face = mesh.face(dir, side);
  for (std::size_t q = 0; q < face.qp.size(); ++q) {
    const FaceQuadPoint& fq = face.qp[q];
    const int nk = static_cast<int>(fq.kin_nodes.size());
    Eigen::MatrixX3d Uloc(nk, 3);
    for (int a = 0; a < nk; ++a) Uloc.row(a) = U.row(fq.kin_nodes[a]);
    Eigen::VectorXd Ploc(fq.prs_nodes.size());
    for (std::size_t c = 0; c < fq.prs_nodes.size(); ++c) Ploc[c] = P[fq.prs_nodes[c]];

    const Mat3d gradU = Uloc.transpose() * fq.Gk;
    const DeformationState def = build_deformation(gradU);
    const double p = fq.Np.dot(Ploc);
    const Mat3d S = stress_from_committed(mat, face_states[q], def) - def.J * p * def.Cinv;
    rec.force += fq.w * (def.F * S) * fq.normal;
  }
  return rec;
}

std::vector<MaterialState> make_face_history(const Mesh& mesh, const Material& mat, int dir,
                                             int side) {
  return std::vector<MaterialState>(mesh.face(dir, side).qp.size(),
                                    init_state(mat, Mat3d::Identity()));
}

void advance_face_history(const Mesh& mesh, const Material& mat, int dir, int side,
                          const Eigen::MatrixX3d& U, double dt,
                          std::vector<MaterialState>& states) {
  const Face& face = mesh.face(dir, side);
  for (std::size_t q = 0; q < face.qp.size(); ++q) {
    const FaceQuadPoint& fq = face.qp[q];
    const int nk = static_cast<int>(fq.kin_nodes.size());
    Eigen::MatrixX3d Uloc(nk, 3);
    for (int a = 0; a < nk; ++a) Uloc.row(a) = U.row(fq.kin_nodes[a]);
    const Mat3d gradU = Uloc.transpose() * fq.Gk;
    advance_state(mat, build_deformation(gradU).Ctilde, dt, states[q]);
  }
}

}  // namespace viscodyn
