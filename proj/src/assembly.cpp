#include "viscodyn/assembly.hpp"

#include <atomic>
#include <cmath>
#include <thread>

namespace viscodyn {

DofMap::DofMap(const Mesh& mesh, std::vector<FaceMotion> motions, bool pin_pressure) {
  const int nk = mesh.n_kin_nodes();
  fixed_.assign(nk, 0);
  for (auto& m : motions) {
    Prescribed p;
    p.nodes = mesh.kin_face_nodes(m.dir, m.side);
    p.g = std::move(m.g);
    p.gdot = std::move(m.gdot);
    for (int n : p.nodes) fixed_[n] = 1;
    prescribed_.push_back(std::move(p));
  }
  v_eq_.assign(3 * nk, -1);
  n_v_free_ = 0;
  for (int n = 0; n < nk; ++n)
    if (!fixed_[n])
      for (int c = 0; c < 3; ++c) v_eq_[3 * n + c] = n_v_free_++;

  const int np = mesh.n_prs_nodes();
  p_eq_.assign(np, -1);
  n_p_ = 0;
  for (int n = 0; n < np; ++n) {
    if (pin_pressure && n == 0) continue;  // remove the constant mode
    p_eq_[n] = n_p_++;
  }
}

void DofMap::apply_dirichlet(double t, Eigen::MatrixX3d& U, Eigen::MatrixX3d& V) const {
  for (const auto& p : prescribed_) {
    const Vec3d g = p.g(t);
    const Vec3d gd = p.gdot(t);
    for (int n : p.nodes) {
      U.row(n) = g.transpose();
      V.row(n) = gd.transpose();
    }
  }
}

namespace {

constexpr double kSqrt2 = 1.4142135623730951;

// Mandel 6-vector basis: pairs (00,11,22,01,02,12) with sqrt(2) off-diagonal
// weights, so M : C : N = v(M)^T Chat v(N) for minor-symmetric C.
inline Eigen::Matrix<double, 6, 6> mandel(const Tensor4d& C) {
  static const int pi[6] = {0, 1, 2, 0, 0, 1};
  static const int pj[6] = {0, 1, 2, 1, 2, 2};
  Eigen::Matrix<double, 6, 6> m;
  for (int I = 0; I < 6; ++I) {
    const double sI = I < 3 ? 1.0 : kSqrt2;
    for (int J = 0; J < 6; ++J) {
      const double sJ = J < 3 ? 1.0 : kSqrt2;
      m(I, J) = sI * sJ * C(pi[I], pj[I], pi[J], pj[J]);
    }
  }
  return m;
}

struct ElementWork {
  Eigen::MatrixX3d Rm;                 // nk x 3
  Eigen::VectorXd Rp;                  // np
  Eigen::MatrixXd Kvv;                 // 3nk x 3nk
  Eigen::MatrixXd Kvp;                 // 3nk x np
  Eigen::MatrixXd Kpv;                 // np x 3nk
  Eigen::MatrixXd W;                   // 3nk x 6
  Eigen::MatrixXd scratch;             // 3nk x 6
};

// Volumetric elasticity contribution 2 d(-J P Cinv)/dC.
inline Tensor4d volumetric_tangent(const DeformationState& def, double p) {
  return (-def.J * p) * (dyad(def.Cinv, def.Cinv) - 2.0 * symdyad(def.Cinv, def.Cinv));
}

void element_kernel(const Mesh& mesh, const Material& mat, const AssemblyOptions& opts,
                    const CollocatedState& cs, const History& history, double dt,
                    const TangentScales* scales, int e, ElementWork& wk, History* updated) {
  const Element& el = mesh.elements()[e];
  const int nk = static_cast<int>(el.kin_nodes.size());
  const int np = static_cast<int>(el.prs_nodes.size());
  const bool tangent = scales != nullptr;

  Eigen::MatrixX3d Uloc(nk, 3), Vloc(nk, 3), Vdloc(nk, 3);
  Eigen::VectorXd Ploc(np);
  for (int a = 0; a < nk; ++a) {
    Uloc.row(a) = cs.U.row(el.kin_nodes[a]);
    Vloc.row(a) = cs.V.row(el.kin_nodes[a]);
    Vdloc.row(a) = cs.Vdot.row(el.kin_nodes[a]);
  }
  for (int c = 0; c < np; ++c) Ploc[c] = cs.P[el.prs_nodes[c]];

  wk.Rm.setZero(nk, 3);
  wk.Rp.setZero(np);
  if (tangent) {
    wk.Kvv.setZero(3 * nk, 3 * nk);
    wk.Kvp.setZero(3 * nk, np);
    wk.Kpv.setZero(np, 3 * nk);
    wk.W.resize(3 * nk, 6);
  }

  for (std::size_t q = 0; q < el.qp.size(); ++q) {
    const QuadPoint& qp = el.qp[q];
    const double w = qp.w;

    const Mat3d gradU = Uloc.transpose() * qp.Gk;
    const DeformationState def = build_deformation(gradU);
    const double p = qp.Np.dot(Ploc);

    const StressTangent st = evaluate_stress(mat, history[e][q], def, dt);
    if (updated) (*updated)[e][q] = st.updated;

    const Mat3d Svol = -def.J * p * def.Cinv;
    const Mat3d S = st.Siso + Svol;
    const Mat3d FS = def.F * S;

    const Vec3d vdot = Vdloc.transpose() * qp.Nk;
    const Mat3d gradV = Vloc.transpose() * qp.Gk;
    const Mat3d Finv = def.F.inverse();
    const double trv = (gradV * Finv).trace();

    wk.Rm.noalias() += w * qp.Nk * (mat.rho0 * (vdot - opts.body_force)).transpose();
    wk.Rm.noalias() += w * qp.Gk * FS.transpose();
    wk.Rp.noalias() += (w * def.J * trv) * qp.Np;

    if (!tangent) continue;

    const Tensor4d Ctot = st.Ciso + volumetric_tangent(def, p);
    const Eigen::Matrix<double, 6, 6> Chat = mandel(Ctot);

    // W rows: Mandel vector of sym((F^T e_b) x g_a)
    for (int a = 0; a < nk; ++a) {
      const Vec3d g = qp.Gk.row(a).transpose();
      for (int b = 0; b < 3; ++b) {
        const Vec3d f = def.F.row(b).transpose();
        const int r = 3 * a + b;
        wk.W(r, 0) = f[0] * g[0];
        wk.W(r, 1) = f[1] * g[1];
        wk.W(r, 2) = f[2] * g[2];
        wk.W(r, 3) = (f[0] * g[1] + f[1] * g[0]) / kSqrt2;
        wk.W(r, 4) = (f[0] * g[2] + f[2] * g[0]) / kSqrt2;
        wk.W(r, 5) = (f[1] * g[2] + f[2] * g[1]) / kSqrt2;
      }
    }
    wk.scratch.resize(3 * nk, 6);
    wk.scratch.noalias() = wk.W * ((scales->disp * w) * Chat);
    wk.Kvv.noalias() += wk.scratch * wk.W.transpose();

    // geometric and mass terms live on component-diagonal blocks
    const Eigen::MatrixXd geo = qp.Gk * (scales->disp * w * S) * qp.Gk.transpose();
    const Eigen::MatrixXd mass =
        (scales->mass * w * mat.rho0) * (qp.Nk * qp.Nk.transpose());
    for (int a = 0; a < nk; ++a)
      for (int c = 0; c < nk; ++c) {
        const double v = geo(a, c) + mass(a, c);
        wk.Kvv(3 * a + 0, 3 * c + 0) += v;
        wk.Kvv(3 * a + 1, 3 * c + 1) += v;
        wk.Kvv(3 * a + 2, 3 * c + 2) += v;
      }

    // pressure coupling: H(a,b) = (F^{-T} g_a)_b
    const Eigen::MatrixXd H = qp.Gk * Finv;
    Eigen::VectorXd vecH(3 * nk), vecHM(3 * nk);
    const Eigen::MatrixXd HM = H * (gradV * Finv);
    for (int a = 0; a < nk; ++a)
      for (int b = 0; b < 3; ++b) {
        vecH[3 * a + b] = H(a, b);
        vecHM[3 * a + b] = HM(a, b);
      }
    wk.Kvp.noalias() += (-def.J * w * scales->pres) * vecH * qp.Np.transpose();
    wk.Kpv.noalias() += (def.J * w) * qp.Np *
                        (scales->vel * vecH + scales->disp * (trv * vecH - vecHM)).transpose();
  }
}

struct GlobalAccum {
  Eigen::VectorXd R;
  std::vector<Eigen::Triplet<double>> trip;
};

void scatter(const Mesh& mesh, const DofMap& dofs, int e, const ElementWork& wk, bool tangent,
             GlobalAccum& acc) {
  const Element& el = mesh.elements()[e];
  const int nk = static_cast<int>(el.kin_nodes.size());
  const int np = static_cast<int>(el.prs_nodes.size());
  const int off_p = dofs.n_v_free();

  std::vector<int> veq(3 * nk), peq(np);
  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < 3; ++b) veq[3 * a + b] = dofs.v_eq(el.kin_nodes[a], b);
  for (int c = 0; c < np; ++c) peq[c] = dofs.p_eq(el.prs_nodes[c]);

  for (int a = 0; a < nk; ++a)
    for (int b = 0; b < 3; ++b)
      if (veq[3 * a + b] >= 0) acc.R[veq[3 * a + b]] += wk.Rm(a, b);
  for (int c = 0; c < np; ++c)
    if (peq[c] >= 0) acc.R[off_p + peq[c]] += wk.Rp[c];

  if (!tangent) return;
  for (int r = 0; r < 3 * nk; ++r) {
    if (veq[r] < 0) continue;
    for (int c = 0; c < 3 * nk; ++c)
      if (veq[c] >= 0) acc.trip.emplace_back(veq[r], veq[c], wk.Kvv(r, c));
    for (int c = 0; c < np; ++c)
      if (peq[c] >= 0) acc.trip.emplace_back(veq[r], off_p + peq[c], wk.Kvp(r, c));
  }
  for (int r = 0; r < np; ++r) {
    if (peq[r] < 0) continue;
    for (int c = 0; c < 3 * nk; ++c)
      if (veq[c] >= 0) acc.trip.emplace_back(off_p + peq[r], veq[c], wk.Kpv(r, c));
  }
}

void add_tractions(const Mesh& mesh, const DofMap& dofs, const AssemblyOptions& opts,
                   Eigen::VectorXd& R) {
  for (const auto& [face_id, Hvec] : opts.tractions) {
    const Face& face = mesh.face(face_id / 2, face_id % 2);
    for (const FaceQuadPoint& fq : face.qp) {
      for (std::size_t a = 0; a < fq.kin_nodes.size(); ++a) {
        for (int b = 0; b < 3; ++b) {
          const int eq = dofs.v_eq(fq.kin_nodes[a], b);
          if (eq >= 0) R[eq] -= fq.w * fq.Nk[a] * Hvec[b];
        }
      }
    }
  }
}

void assemble(const Mesh& mesh, const Material& mat, const DofMap& dofs,
              const AssemblyOptions& opts, const CollocatedState& cs, const History& history,
              double dt, const TangentScales* scales, Eigen::VectorXd& R,
              std::vector<Eigen::Triplet<double>>* trip, History* updated) {
  const int ne = static_cast<int>(mesh.elements().size());
  const int nthreads = std::max(1, std::min(opts.threads, ne));
  const bool tangent = scales != nullptr;

  std::vector<GlobalAccum> acc(nthreads);
  for (auto& a : acc) a.R = Eigen::VectorXd::Zero(dofs.n_eq());

  std::atomic<bool> inverted{false};
  auto worker = [&](int tid) {
    ElementWork wk;
    const int chunk = (ne + nthreads - 1) / nthreads;
    const int lo = tid * chunk;
    const int hi = std::min(ne, lo + chunk);
    try {
      for (int e = lo; e < hi; ++e) {
        element_kernel(mesh, mat, opts, cs, history, dt, scales, e, wk, updated);
        scatter(mesh, dofs, e, wk, tangent, acc[tid]);
      }
    } catch (const InvertedElement&) {
      inverted = true;
    }
  };

  if (nthreads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
    for (auto& t : pool) t.join();
  }
  if (inverted) throw InvertedElement("assemble: element inverted at a quadrature point");

  R = std::move(acc[0].R);
  for (int t = 1; t < nthreads; ++t) R += acc[t].R;
  add_tractions(mesh, dofs, opts, R);

  if (trip) {
    std::size_t total = 0;
    for (const auto& a : acc) total += a.trip.size();
    trip->clear();
    trip->reserve(total);
    for (const auto& a : acc) trip->insert(trip->end(), a.trip.begin(), a.trip.end());
  }
}

}  // namespace

void assemble_residual(const Mesh& mesh, const Material& mat, const DofMap& dofs,
                       const AssemblyOptions& opts, const CollocatedState& cs,
                       const History& history, double dt, Eigen::VectorXd& R, History* updated) {
  assemble(mesh, mat, dofs, opts, cs, history, dt, nullptr, R, nullptr, updated);
}

void assemble_system(const Mesh& mesh, const Material& mat, const DofMap& dofs,
                     const AssemblyOptions& opts, const CollocatedState& cs,
                     const History& history, double dt, const TangentScales& scales,
                     SystemMatrices& sys, History* updated) {
  std::vector<Eigen::Triplet<double>> trip;
  assemble(mesh, mat, dofs, opts, cs, history, dt, &scales, sys.R, &trip, updated);
  sys.n_v = dofs.n_v_free();
  sys.n_p = dofs.n_p();
  sys.K.resize(dofs.n_eq(), dofs.n_eq());
  sys.K.setFromTriplets(trip.begin(), trip.end());
}

Eigen::SparseMatrix<double> velocity_mass_matrix(const Mesh& mesh, double rho,
                                                 const DofMap& dofs) {
  std::vector<Eigen::Triplet<double>> trip;
  for (const Element& el : mesh.elements()) {
    const int nk = static_cast<int>(el.kin_nodes.size());
    for (const QuadPoint& qp : el.qp) {
      for (int a = 0; a < nk; ++a)
        for (int c = 0; c < nk; ++c) {
          const double m = rho * qp.w * qp.Nk[a] * qp.Nk[c];
          for (int b = 0; b < 3; ++b) {
            const int r = dofs.v_eq(el.kin_nodes[a], b);
            const int s = dofs.v_eq(el.kin_nodes[c], b);
            if (r >= 0 && s >= 0) trip.emplace_back(r, s, m);
          }
        }
    }
  }
  Eigen::SparseMatrix<double> M(dofs.n_eq(), dofs.n_eq());
  M.setFromTriplets(trip.begin(), trip.end());
  return M;
}

Eigen::MatrixX3d project_kinematic_field(const Mesh& mesh,
                                         const std::function<Vec3d(const Vec3d&)>& field) {
  const int n = mesh.n_kin_nodes();
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::MatrixX3d rhs = Eigen::MatrixX3d::Zero(n, 3);
  for (const Element& el : mesh.elements()) {
    const int nk = static_cast<int>(el.kin_nodes.size());
    for (const QuadPoint& qp : el.qp) {
      const Vec3d f = field(qp.X);
      for (int a = 0; a < nk; ++a) {
        rhs.row(el.kin_nodes[a]) += qp.w * qp.Nk[a] * f.transpose();
        for (int c = 0; c < nk; ++c)
          trip.emplace_back(el.kin_nodes[a], el.kin_nodes[c], qp.w * qp.Nk[a] * qp.Nk[c]);
      }
    }
  }
  Eigen::SparseMatrix<double> G(n, n);
  G.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver(G);
  return solver.solve(rhs);
}

History make_history(const Mesh& mesh, const Material& mat) {
  const MaterialState proto = init_state(mat, Mat3d::Identity());
  History h(mesh.elements().size());
  for (std::size_t e = 0; e < h.size(); ++e) h[e].assign(mesh.elements()[e].qp.size(), proto);
  return h;
}

}  // namespace viscodyn
