#include "viscodyn/simulation.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace viscodyn {

namespace {

std::string join(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  return (std::filesystem::path(dir) / name).string();
}

void append_csv(const std::string& path, const std::string& header, const std::string& row) {
  const bool fresh = !std::filesystem::exists(path);
  std::ofstream out(path, std::ios::app);
  if (fresh) out << header << "\n";
  out << row << "\n";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

Simulation::Simulation(ScenarioConfig cfg, std::string out_dir)
    : cfg_(std::move(cfg)), out_dir_(std::move(out_dir)), material_(make_material(cfg_)) {
  if (!out_dir_.empty()) std::filesystem::create_directories(out_dir_);
  mesh_ = std::make_unique<Mesh>(
      build_mixed_pair(cfg_.degree, internal_elements(cfg_), make_geometry(cfg_)));

  AssemblyOptions opts;
  opts.threads = cfg_.threads;
  params_ = derive_parameters(cfg_.rho_inf);
  DofMap dofs(*mesh_, make_boundary(cfg_), cfg_.pin_pressure);
  stepper_ = std::make_unique<GenAlphaStepper>(*mesh_, material_, std::move(dofs), opts, params_);

  state_ = SolutionState::zero(mesh_->n_kin_nodes(), mesh_->n_prs_nodes());
  state_.V = initial_conditions(cfg_, *mesh_);
  stepper_->dofs().apply_dirichlet(0.0, state_.U, state_.V);
  stepper_->initialize_rates(state_);

  if (!cfg_.force_csv.empty()) force_states_ = make_face_history(*mesh_, material_, 0, 0);
  if (cfg_.snapshot_every > 0) {
    vertex_states_.assign(mesh_->n_vertices(), init_state(material_, Mat3d::Identity()));
  }
  energies_path_ = join(out_dir_, cfg_.energies_csv);
  if (!cfg_.force_csv.empty()) force_path_ = join(out_dir_, cfg_.force_csv);
}

EnergyRecord Simulation::initial_energies() const {
  return compute_energies(*mesh_, material_, stepper_->history(), state_);
}

void Simulation::write_energy_row(const EnergyRecord& rec) {
  static const std::string header =
      "t,kinetic,potential,total,dissipation_increment,px,py,pz,lx,ly,lz";
  std::string row = num(rec.t);
  row += "," + num(rec.kinetic) + "," + num(rec.potential) + "," + num(rec.total);
  row += "," + num(rec.dissipation_rate);  // converted to an increment by the caller
  for (int i = 0; i < 3; ++i) row += "," + num(rec.linear_momentum[i]);
  for (int i = 0; i < 3; ++i) row += "," + num(rec.angular_momentum[i]);
  append_csv(energies_path_, header, row);
}

void Simulation::write_force_row(const ForceRecord& rec) {
  static const std::string header = "t,Ux,Fx,Fy,Fz";
  std::string row = num(rec.t);
  row += "," + num(rec.Ux);
  for (int i = 0; i < 3; ++i) row += "," + num(rec.force[i]);
  append_csv(force_path_, header, row);
}

void Simulation::write_snapshot(int index) {
  char name[64];
  std::snprintf(name, sizeof(name), "%s_%05d.vtk", cfg_.snapshot_basename.c_str(), index);
  write_vtk_snapshot(join(out_dir_, name), *mesh_, material_, vertex_states_, state_.U, state_.V,
                     state_.P);
}

int Simulation::run() {
  if (std::filesystem::exists(energies_path_)) std::filesystem::remove(energies_path_);
  if (!force_path_.empty() && std::filesystem::exists(force_path_))
    std::filesystem::remove(force_path_);

  EnergyRecord rec = initial_energies();
  double prev_rate = rec.dissipation_rate;
  {
    EnergyRecord first = rec;
    first.dissipation_rate = 0.0;  // no increment at t = 0
    write_energy_row(first);
  }
  if (!force_path_.empty())
    write_force_row(compute_surface_force(*mesh_, material_, force_states_, 0, 0, state_.U,
                                          state_.P, 0.0, 0.0));
  if (cfg_.snapshot_every > 0) write_snapshot(0);

  const int nsteps = static_cast<int>(std::ceil(cfg_.t_end / cfg_.dt - 1e-12));
  int snapshot_index = 0;
  for (int k = 1; k <= nsteps; ++k) {
    SolutionState sn = state_;
    StepReport rep;
    try {
      rep = stepper_->step(state_, std::min(cfg_.dt, cfg_.t_end - sn.t));
    } catch (const StepFailed& err) {
      std::cerr << "step " << k << " failed at t = " << sn.t << ": " << err.what() << "\n";
      return 3;
    }

    // collocation-level fields: the committed history lives at alpha_f
    SolutionState af = state_;
    af.t = sn.t + params_.alpha_f * (state_.t - sn.t);
    af.U = sn.U + params_.alpha_f * (state_.U - sn.U);
    af.V = sn.V + params_.alpha_f * (state_.V - sn.V);
    af.P = sn.P + params_.alpha_f * (state_.P - sn.P);

    if (!force_states_.empty())
      advance_face_history(*mesh_, material_, 0, 0, af.U, rep.dt_used, force_states_);
    if (cfg_.snapshot_every > 0) {
      for (int v = 0; v < mesh_->n_vertices(); ++v) {
        Vec3d val;
        Mat3d grad;
        mesh_->eval_kinematic(mesh_->vertex_param(v), af.U, val, grad);
        advance_state(material_, build_deformation(grad).Ctilde, rep.dt_used,
                      vertex_states_[v]);
      }
    }

    if (k % cfg_.output_every == 0 || k == nsteps) {
      rec = compute_energies(*mesh_, material_, stepper_->history(), af);
      const double rate = rec.dissipation_rate;
      rec.dissipation_rate = 0.5 * (prev_rate + rate) * rep.dt_used;  // trapezoidal increment
      prev_rate = rate;
      write_energy_row(rec);
      if (!force_path_.empty()) {
        const double ux = cfg_.support_amplitude * std::sin(cfg_.support_omega * af.t);
        write_force_row(compute_surface_force(*mesh_, material_, force_states_, 0, 0, af.U, af.P,
                                              af.t, ux));
      }
    }
    if (cfg_.snapshot_every > 0 && (k % cfg_.snapshot_every == 0 || k == nsteps))
      write_snapshot(++snapshot_index);
  }
  return 0;
}

void write_vtk_snapshot(const std::string& path, const Mesh& mesh, const Material& mat,
                        const std::vector<MaterialState>& vertex_states,
                        const Eigen::MatrixX3d& U, const Eigen::MatrixX3d& V,
                        const Eigen::VectorXd& P) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write snapshot '" + path + "'");

  const auto& breaks = mesh.vertex_breaks();
  const int n1 = static_cast<int>(breaks[0].size());
  const int n2 = static_cast<int>(breaks[1].size());
  const int n3 = static_cast<int>(breaks[2].size());
  const int nv = n1 * n2 * n3;

  out << "# vtk DataFile Version 3.0\n";
  out << "viscodyn snapshot\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << nv << " double\n";
  std::vector<Vec3d> disp(nv), vel(nv);
  std::vector<double> pres(nv);
  std::vector<Mat3d> sigma(nv);
  for (int v = 0; v < nv; ++v) {
    const Vec3d xi = mesh.vertex_param(v);
    Vec3d X;
    Mat3d jac;
    mesh.geometry(xi, X, jac);
    out << X[0] << " " << X[1] << " " << X[2] << "\n";

    Vec3d u, vv;
    Mat3d gradU, gradV;
    mesh.eval_kinematic(xi, U, u, gradU);
    mesh.eval_kinematic(xi, V, vv, gradV);
    const double p = mesh.eval_pressure(xi, P);
    disp[v] = u;
    vel[v] = vv;
    pres[v] = p;
    const DeformationState def = build_deformation(gradU);
    const Mat3d S = stress_from_committed(mat, vertex_states[v], def) - def.J * p * def.Cinv;
    sigma[v] = (def.F * S * def.F.transpose()) / def.J;
  }

  const int ne1 = n1 - 1, ne2 = n2 - 1, ne3 = n3 - 1;
  const int nc = ne1 * ne2 * ne3;
  auto vid = [&](int i, int j, int k) { return i + n1 * (j + n2 * k); };
  out << "CELLS " << nc << " " << 9 * nc << "\n";
  for (int k = 0; k < ne3; ++k)
    for (int j = 0; j < ne2; ++j)
      for (int i = 0; i < ne1; ++i)
        out << "8 " << vid(i, j, k) << " " << vid(i + 1, j, k) << " " << vid(i + 1, j + 1, k)
            << " " << vid(i, j + 1, k) << " " << vid(i, j, k + 1) << " " << vid(i + 1, j, k + 1)
            << " " << vid(i + 1, j + 1, k + 1) << " " << vid(i, j + 1, k + 1) << "\n";
  out << "CELL_TYPES " << nc << "\n";
  for (int c = 0; c < nc; ++c) out << "12\n";

  out << "POINT_DATA " << nv << "\n";
  out << "VECTORS displacement double\n";
  for (int v = 0; v < nv; ++v) out << disp[v][0] << " " << disp[v][1] << " " << disp[v][2] << "\n";
  out << "VECTORS velocity double\n";
  for (int v = 0; v < nv; ++v) out << vel[v][0] << " " << vel[v][1] << " " << vel[v][2] << "\n";
  out << "SCALARS pressure double\n";
  out << "LOOKUP_TABLE default\n";
  for (int v = 0; v < nv; ++v) out << pres[v] << "\n";
  out << "TENSORS cauchy_stress double\n";
  for (int v = 0; v < nv; ++v) {
    for (int i = 0; i < 3; ++i)
      out << sigma[v](i, 0) << " " << sigma[v](i, 1) << " " << sigma[v](i, 2) << "\n";
    out << "\n";
  }
}

}  // namespace viscodyn
