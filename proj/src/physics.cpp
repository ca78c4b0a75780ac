#include "asap/physics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include <Eigen/LU>

namespace asap {

void SimConfig::validate() const {
  if (!(dt > 0.0)) throw std::invalid_argument("SimConfig.dt must be > 0");
  if (!(contact_stiffness > 0.0)) throw std::invalid_argument("SimConfig.contact_stiffness must be > 0");
  if (!(contact_damping >= 0.0)) throw std::invalid_argument("SimConfig.contact_damping must be >= 0");
  if (!(friction_coeff >= 0.0)) throw std::invalid_argument("SimConfig.friction_coeff must be >= 0");
  if (newton_iters < 1) throw std::invalid_argument("SimConfig.newton_iters must be >= 1");
  if (!(friction_slip_velocity > 0.0)) throw std::invalid_argument("SimConfig.friction_slip_velocity must be > 0");
}

namespace {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return m;
}

Quat integrate_rotation(const Quat& q, const Vec3& omega, double dt) {
  const double angle = omega.norm() * dt;
  if (angle == 0.0) return q;
  return (Quat(Eigen::AngleAxisd(angle, omega.normalized())) * q).normalized();
}

bool finite(const BodyState& s) {
  return s.position.allFinite() && s.orientation.coeffs().allFinite() &&
         s.linear_velocity.allFinite() && s.angular_velocity.allFinite();
}

}  // namespace

SimScene::SimScene(SimConfig config, bool support_plane)
    : config_(config), support_plane_(support_plane) {
  config_.validate();
}

std::size_t SimScene::add_part(PartPtr geometry, const BodyState& state) {
  if (!geometry) throw std::invalid_argument("null part geometry");
  for (const auto& b : bodies_) {
    if (b.geometry->id == geometry->id) throw std::invalid_argument("duplicate part id '" + geometry->id + "'");
  }
  Body body;
  body.state = state;
  body.state.orientation.normalize();
  body.mass = geometry->mass;
  body.inertia_body = geometry->inertia;
  const auto& pts = geometry->contact_points;
  body.local_points.resize(3, static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    body.local_points.col(static_cast<Eigen::Index>(i)) = pts[i] - geometry->center_of_mass;
  }
  body.radius = body.local_points.size() ? body.local_points.colwise().norm().maxCoeff() : 0.0;
  body.local_bounds = {geometry->bounds.min - geometry->center_of_mass,
                       geometry->bounds.max - geometry->center_of_mass};
  body.geometry = std::move(geometry);
  bodies_.push_back(std::move(body));
  offsets_ready_ = false;
  touched_valid_ = false;
  contacts_valid_ = false;
  return bodies_.size() - 1;
}

std::size_t SimScene::add_part(PartPtr geometry, const RigidTransform& mesh_pose, bool held) {
  BodyState state;
  state.orientation = mesh_pose.rotation;
  state.position = mesh_pose.apply(geometry->center_of_mass);
  state.held = held;
  return add_part(std::move(geometry), state);
}

BodyState& SimScene::mutable_state(std::size_t i) {
  touched_valid_ = false;
  contacts_valid_ = false;
  return bodies_.at(i).state;
}

std::size_t SimScene::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    if (bodies_[i].geometry->id == id) return i;
  }
  throw std::out_of_range("unknown part id '" + std::string(id) + "'");
}

RigidTransform SimScene::mesh_pose(std::size_t i) const {
  const Body& b = bodies_.at(i);
  return {b.state.orientation, b.state.position - b.state.orientation * b.geometry->center_of_mass};
}

std::vector<Vec3> SimScene::positions() const {
  std::vector<Vec3> out;
  out.reserve(bodies_.size());
  for (const auto& b : bodies_) out.push_back(b.state.position);
  return out;
}

double SimScene::contact_threshold() const {
  double cell = 0.0;
  for (const auto& b : bodies_) cell = std::max(cell, b.geometry->cell_size());
  return 2.0 * cell;
}

double SimScene::pair_offset(int a, int b) const {
  if (b < 0) return plane_offsets_[a];
  return pair_offsets_[static_cast<std::size_t>(a) * bodies_.size() + b];
}

void SimScene::gather_contacts(const std::vector<Candidate>& cand, const std::vector<double>& reach,
                               std::vector<Contact>& out, std::vector<char>& touched) const {
  const int n = static_cast<int>(bodies_.size());
  out.clear();
  touched.assign(n, 0);
  const bool have_offsets = offsets_ready_;

  auto directed = [&](int src, int dst) {
    const PartGeometry& dg = *bodies_[dst].geometry;
    if (!dg.sdf) return false;
    const SdfGrid& grid = *dg.sdf;
    const Candidate& cs = cand[src];
    const Candidate& cd = cand[dst];
    const double margin = reach[src] + reach[dst];
    const Aabb box = cd.bounds.inflated(margin);
    const Mat3 rt = cd.rotation.transpose();
    const Vec3 com = dg.center_of_mass;
    const double offset = have_offsets ? pair_offset(src, dst) : 0.0;
    bool any = false;
    const Eigen::Index m = cs.world_points.cols();
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto p = cs.world_points.col(k);
      if (p.x() < box.min.x() || p.x() > box.max.x() || p.y() < box.min.y() || p.y() > box.max.y() ||
          p.z() < box.min.z() || p.z() > box.max.z()) {
        continue;
      }
      const Vec3 local = rt * (p - cd.position) + com;
      double value = 0.0;
      Vec3 grad;
      if (!grid.sample(local, value, &grad) || value >= margin) continue;
      if (value < 0.0) any = true;
      Vec3 normal = cd.rotation * grad;
      const double len = normal.norm();
      if (len > 1e-12) {
        normal /= len;
      } else {
        normal = p - cd.position;
        normal = normal.norm() > 1e-12 ? normal.normalized() : Vec3::UnitZ();
      }
      out.push_back({src, dst, p, normal, -value, offset});
    }
    return any;
  };

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (bodies_[i].state.held && bodies_[j].state.held) continue;
      const double margin = reach[i] + reach[j];
      if (!cand[i].bounds.inflated(margin).overlaps(cand[j].bounds)) continue;
      const bool hit_ij = directed(i, j);
      const bool hit_ji = directed(j, i);
      if (hit_ij || hit_ji) touched[i] = touched[j] = 1;
    }
  }
  if (support_plane_) {
    for (int i = 0; i < n; ++i) {
      const Candidate& c = cand[i];
      if (c.bounds.min.z() >= reach[i]) continue;
      const double offset = have_offsets ? plane_offsets_[i] : 0.0;
      const Eigen::Index m = c.world_points.cols();
      for (Eigen::Index k = 0; k < m; ++k) {
        const double z = c.world_points(2, k);
        if (z < reach[i]) {
          if (z < 0.0) touched[i] = 1;
          out.push_back({i, -1, c.world_points.col(k), Vec3::UnitZ(), -z, offset});
        }
      }
    }
  }
}

std::vector<SimScene::Candidate> SimScene::candidates() const {
  std::vector<Candidate> cand(bodies_.size());
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    const Body& b = bodies_[i];
    Candidate& c = cand[i];
    c.position = b.state.position;
    c.rotation = b.state.orientation.toRotationMatrix();
    c.world_points = (c.rotation * b.local_points).colwise() + c.position;
    c.bounds = b.local_bounds.transformed({b.state.orientation, b.state.position});
  }
  return cand;
}

void SimScene::capture_offsets() {
  const std::size_t n = bodies_.size();
  offsets_ready_ = false;
  std::vector<Contact> contacts;
  std::vector<char> touched;
  gather_contacts(candidates(), std::vector<double>(n, 0.0), contacts, touched);
  pair_offsets_.assign(n * n, 0.0);
  plane_offsets_.assign(n, 0.0);
  for (const Contact& c : contacts) {
    const double cell_a = bodies_[c.a].geometry->cell_size();
    if (c.b < 0) {
      plane_offsets_[c.a] = std::max(plane_offsets_[c.a], std::min(c.depth, 2.0 * cell_a));
    } else {
      const double cap = 2.0 * std::max(cell_a, bodies_[c.b].geometry->cell_size());
      double& ab = pair_offsets_[c.a * n + c.b];
      ab = std::max(ab, std::min(c.depth, cap));
      pair_offsets_[c.b * n + c.a] = ab;
    }
  }
  offsets_ready_ = true;
  contacts_valid_ = false;
}

void SimScene::refresh_contacts() {
  // Samples within twice the distance a body can sweep in one step (current
  // speed plus one step of gravity) are kept, so contacts that close during
  // the next step are already present.
  std::vector<double> reach(bodies_.size(), 0.0);
  for (std::size_t i = 0; i < bodies_.size(); ++i) {
    const Body& b = bodies_[i];
    if (b.state.held) continue;
    const double speed = b.state.linear_velocity.norm() + config_.dt * config_.gravity.norm() +
                         b.state.angular_velocity.norm() * b.radius;
    reach[i] = 2.0 * config_.dt * speed;
  }
  gather_contacts(candidates(), reach, contacts_, touched_);
  touched_valid_ = touched_.size() == bodies_.size();
  contacts_valid_ = true;
}

void SimScene::step() {
  if (!offsets_ready_) capture_offsets();
  if (!contacts_valid_) refresh_contacts();
  const int n = static_cast<int>(bodies_.size());
  const double dt = config_.dt;

  std::vector<int> dof(n, -1);
  int nfree = 0;
  for (int i = 0; i < n; ++i) {
    if (!bodies_[i].state.held) dof[i] = 6 * nfree++;
  }
  const int ndof = 6 * nfree;

  std::vector<Mat3> inertia_world(n);
  Eigen::VectorXd u0(ndof);
  for (int i = 0; i < n; ++i) {
    const Body& b = bodies_[i];
    const Mat3 r = b.state.orientation.toRotationMatrix();
    inertia_world[i] = r * b.inertia_body * r.transpose();
    if (dof[i] >= 0) {
      u0.segment<3>(dof[i]) = b.state.linear_velocity;
      u0.segment<3>(dof[i] + 3) = b.state.angular_velocity;
    }
  }

  Eigen::VectorXd u = u0;
  Eigen::VectorXd residual(ndof);
  Eigen::MatrixXd jac(ndof, ndof);
  const double k = config_.contact_stiffness;
  const double c_n = config_.contact_damping;
  const double mu = config_.friction_coeff;
  const double eps_slip = config_.friction_slip_velocity;

  auto velocity_at = [&](int body, const Vec3& r) -> Vec3 {
    if (body < 0 || dof[body] < 0) return Vec3::Zero();
    return u.segment<3>(dof[body]) + u.segment<3>(dof[body] + 3).cross(r);
  };

  // Contact geometry is frozen at the start of the step; depth is linearized
  // along the relative normal velocity.
  double scale = 1.0;
  double last_size = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < config_.newton_iters && ndof > 0; ++iter) {
    jac.setZero();
    residual.setZero();
    for (int i = 0; i < n; ++i) {
      if (dof[i] < 0) continue;
      const Body& b = bodies_[i];
      const int d = dof[i];
      jac.block<3, 3>(d, d) = b.mass * Mat3::Identity();
      jac.block<3, 3>(d + 3, d + 3) = inertia_world[i];
      const Vec3 omega = u.segment<3>(d + 3);
      Vec3 force = b.mass * config_.gravity + b.state.external_force;
      Vec3 torque = b.state.external_torque - omega.cross(inertia_world[i] * omega);
      residual.segment<3>(d) = b.mass * (u.segment<3>(d) - u0.segment<3>(d)) - dt * force;
      residual.segment<3>(d + 3) =
          inertia_world[i] * (omega - u0.segment<3>(d + 3)) - dt * torque;
    }

    Eigen::Matrix<double, 3, 6> ga, gb;
    for (const Contact& ct : contacts_) {
      const bool a_free = dof[ct.a] >= 0;
      const bool b_free = ct.b >= 0 && dof[ct.b] >= 0;
      if (!a_free && !b_free) continue;
      const Vec3 ra = ct.point - bodies_[ct.a].state.position;
      const Vec3 rb = ct.b >= 0 ? Vec3(ct.point - bodies_[ct.b].state.position) : Vec3::Zero();
      const Vec3 vrel = velocity_at(ct.a, ra) - velocity_at(ct.b, rb);
      const Vec3& nrm = ct.normal;
      const double vn = nrm.dot(vrel);
      const double pen = ct.depth - ct.offset - dt * vn;
      if (pen <= 0.0) continue;
      const double fn = k * pen - c_n * vn;
      if (fn <= 0.0) continue;
      const Vec3 vt = vrel - vn * nrm;
      const double slip = vt.norm();
      const double ct_coef = mu * fn / std::max(slip, eps_slip);
      const Vec3 f = fn * nrm - ct_coef * vt;
      // bmat = -df/dvrel, including the friction dependence on fn and slip.
      const Mat3 nn = nrm * nrm.transpose();
      const double kn = c_n + dt * k;
      Mat3 tangential = Mat3::Identity() - nn;
      if (slip >= eps_slip) tangential -= (vt / slip) * (vt / slip).transpose();
      const Mat3 bmat =
          kn * nn - (mu * kn / std::max(slip, eps_slip)) * vt * nrm.transpose() + ct_coef * tangential;

      if (a_free) {
        ga.leftCols<3>().setIdentity();
        ga.rightCols<3>() = -skew(ra);
        residual.segment<3>(dof[ct.a]) -= dt * f;
        residual.segment<3>(dof[ct.a] + 3) -= dt * ra.cross(f);
        jac.block<6, 6>(dof[ct.a], dof[ct.a]) += dt * ga.transpose() * bmat * ga;
      }
      if (b_free) {
        gb.leftCols<3>().setIdentity();
        gb.rightCols<3>() = -skew(rb);
        residual.segment<3>(dof[ct.b]) += dt * f;
        residual.segment<3>(dof[ct.b] + 3) += dt * rb.cross(f);
        jac.block<6, 6>(dof[ct.b], dof[ct.b]) += dt * gb.transpose() * bmat * gb;
      }
      if (a_free && b_free) {
        jac.block<6, 6>(dof[ct.a], dof[ct.b]) -= dt * ga.transpose() * bmat * gb;
        jac.block<6, 6>(dof[ct.b], dof[ct.a]) -= dt * gb.transpose() * bmat * ga;
      }
    }

    const Eigen::VectorXd delta = jac.partialPivLu().solve(-residual);
    const double size = delta.lpNorm<Eigen::Infinity>();
    // Halve the step whenever the update stops shrinking; this breaks the
    // two-cycles caused by contacts switching on and off between iterations.
    if (size >= last_size) scale *= 0.5;
    last_size = size;
    u += scale * delta;
    if (!delta.allFinite() || scale * size < config_.newton_tol) break;
  }

  for (int i = 0; i < n; ++i) {
    Body& b = bodies_[i];
    if (dof[i] < 0) {
      b.state.linear_velocity.setZero();
      b.state.angular_velocity.setZero();
      continue;
    }
    b.state.linear_velocity = u.segment<3>(dof[i]);
    b.state.angular_velocity = u.segment<3>(dof[i] + 3);
    b.state.position += dt * b.state.linear_velocity;
    b.state.orientation = integrate_rotation(b.state.orientation, b.state.angular_velocity, dt);
    if (!finite(b.state)) throw SimulationDiverged(b.geometry->id);
  }
  refresh_contacts();
  record_depths(contacts_);
  ++steps_;
}

void SimScene::record_depths(const std::vector<Contact>& contacts) {
  max_depth_.assign(bodies_.size(), 0.0);
  for (const Contact& c : contacts) {
    if (c.depth <= 0.0) continue;
    max_depth_[c.a] = std::max(max_depth_[c.a], c.depth);
    if (c.b >= 0) max_depth_[c.b] = std::max(max_depth_[c.b], c.depth);
  }
}

bool SimScene::is_disconnected(std::size_t i) const {
  if (i >= bodies_.size()) throw std::out_of_range("part index out of range");
  if (touched_valid_ && touched_[i]) return false;
  const double threshold = contact_threshold();
  const Body& b = bodies_[i];
  const RigidTransform pose_i = mesh_pose(i);
  if (support_plane_) {
    const Mat3 r = b.state.orientation.toRotationMatrix();
    const double min_z = ((r * b.local_points).row(2).array() + b.state.position.z()).minCoeff();
    if (min_z <= threshold) return false;
  }
  for (std::size_t j = 0; j < bodies_.size(); ++j) {
    if (j == i) continue;
    const PartGeometry& gi = *b.geometry;
    const PartGeometry& gj = *bodies_[j].geometry;
    if (!gi.sdf || !gj.sdf) continue;
    if (min_separation(gi, pose_i, gj, mesh_pose(j), 2.0 * threshold) <= threshold) return false;
  }
  return true;
}

Trajectory run(SimScene& scene, int n_steps) {
  Trajectory traj;
  if (scene.size() == 0) return traj;
  traj.reserve(static_cast<std::size_t>(std::max(n_steps, 0)));
  for (int s = 0; s < n_steps; ++s) {
    scene.step();
    traj.push_back(scene.positions());
  }
  return traj;
}

SimScene step(SimScene scene) {
  scene.step();
  return scene;
}

void write_snapshot_jsonl(std::ostream& out, const SimScene& scene, int step_index) {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < scene.size(); ++i) {
    const BodyState& s = scene.state(i);
    out << "{\"step\":" << step_index << ",\"part_id\":\"" << scene.part(i).id << "\",\"position\":["
        << s.position.x() << ',' << s.position.y() << ',' << s.position.z() << "],\"quaternion\":["
        << s.orientation.w() << ',' << s.orientation.x() << ',' << s.orientation.y() << ','
        << s.orientation.z() << "]}\n";
  }
}

}  // namespace asap
