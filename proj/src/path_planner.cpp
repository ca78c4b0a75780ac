#include "asap/path_planner.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <set>
#include <tuple>

namespace asap {

const std::vector<Vec3>& search_directions() {
  static const std::vector<Vec3> dirs = [] {
    std::vector<Vec3> out = {Vec3::UnitZ(), -Vec3::UnitZ(), Vec3::UnitX(), -Vec3::UnitX(),
                             Vec3::UnitY(),  -Vec3::UnitY()};
    for (int x = -1; x <= 1; ++x) {
      for (int y = -1; y <= 1; ++y) {
        for (int z = -1; z <= 1; ++z) {
          const int nz = (x != 0) + (y != 0) + (z != 0);
          if (nz >= 2) out.push_back(Vec3(x, y, z).normalized());
        }
      }
    }
    return out;
  }();
  return dirs;
}

namespace {

Aabb rest_bounds(const std::vector<PlacedPart>& rest) {
  Aabb box;
  for (const auto& p : rest) box.extend(p.geometry->bounds.transformed(p.pose));
  return box;
}

bool disassembled(const Aabb& rest_box, const Aabb& mover_box, double clearance) {
  if (rest_box.empty()) return true;
  return mover_box.distance_to(rest_box) >= clearance;
}

double plane_penetration(const PartGeometry& mover, const RigidTransform& pose) {
  const Aabb box = mover.bounds.transformed(pose);
  if (box.min.z() >= 0.0) return 0.0;
  const Mat3 r = pose.rotation.toRotationMatrix();
  double depth = 0.0;
  for (const Vec3& p : mover.contact_points) {
    depth = std::max(depth, -(r.row(2).dot(p) + pose.translation.z()));
  }
  return depth;
}

double max_step_cell(const std::vector<PlacedPart>& rest, const PartGeometry& mover) {
  double cell = mover.cell_size();
  for (const auto& p : rest) cell = std::max(cell, p.geometry->cell_size());
  return cell;
}

RigidTransform interpolate(const RigidTransform& a, const RigidTransform& b, double t) {
  return {a.rotation.slerp(t, b.rotation).normalized(), (1.0 - t) * a.translation + t * b.translation};
}

}  // namespace

bool is_disassembled(const std::vector<PlacedPart>& rest, const PlacedPart& mover) {
  const Aabb box = mover.geometry->bounds.transformed(mover.pose);
  return disassembled(rest_bounds(rest), box, mover.geometry->bounds.diagonal());
}

double pose_penetration(const std::vector<PlacedPart>& rest, const PartGeometry& mover,
                        const RigidTransform& pose, bool support_plane) {
  double depth = support_plane ? plane_penetration(mover, pose) : 0.0;
  for (const auto& r : rest) depth = std::max(depth, max_penetration(mover, pose, *r.geometry, r.pose));
  return depth;
}

double motion_max_penetration(const std::vector<PlacedPart>& rest, const PartGeometry& mover,
                              const std::vector<RigidTransform>& waypoints, double spacing,
                              bool support_plane) {
  double depth = 0.0;
  if (waypoints.empty()) return depth;
  const double radius = 0.5 * mover.bounds.diagonal();
  depth = pose_penetration(rest, mover, waypoints.front(), support_plane);
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const RigidTransform& a = waypoints[i - 1];
    const RigidTransform& b = waypoints[i];
    const double travel = (b.translation - a.translation).norm() + radius * a.rotation.angularDistance(b.rotation);
    const int subdiv = std::max(1, static_cast<int>(std::ceil(travel / spacing)));
    for (int s = 1; s <= subdiv; ++s) {
      const RigidTransform pose = s == subdiv ? b : interpolate(a, b, static_cast<double>(s) / subdiv);
      depth = std::max(depth, pose_penetration(rest, mover, pose, support_plane));
    }
  }
  return depth;
}

MotionPlan reverse_to_assembly(const MotionPlan& plan) {
  MotionPlan out = plan;
  std::reverse(out.waypoints.begin(), out.waypoints.end());
  const std::size_t k = plan.force_sequence.size();
  for (std::size_t i = 0; i < k; ++i) out.force_sequence[i] = -plan.force_sequence[k - 1 - i];
  return out;
}

std::optional<MotionPlan> check_assemblable(const std::vector<PlacedPart>& rest, const PlacedPart& mover,
                                            const Quat& frame, const PathConfig& config,
                                            std::string* diagnostic) {
  const PartGeometry& g = *mover.geometry;
  const double cell = max_step_cell(rest, g);
  const double allowed = 2.0 * cell;
  // Accepted paths keep half a sample spacing of slack so any resampling of
  // the same motion stays within `allowed`.
  const double accept = allowed - 0.5 * cell;
  const double clearance = g.bounds.diagonal();
  const Aabb rest_box = rest_bounds(rest);
  const double force = config.force_scale * g.mass * config.sim.gravity.norm();
  auto report = [&](const std::string& why) {
    if (diagnostic) *diagnostic = why;
  };

  MotionPlan plan;
  plan.part_id = g.id;
  if (disassembled(rest_box, g.bounds.transformed(mover.pose), clearance)) {
    plan.waypoints = {mover.pose};
    return plan;
  }

  if (config.straight_line_shortcut) {
    const double h = 0.5 * cell;
    for (int a = 0; a < 6; ++a) {
      const Vec3 dir = frame * search_directions()[a];
      bool clear = true;
      RigidTransform pose = mover.pose;
      for (int s = 1;; ++s) {
        pose.translation = mover.pose.translation + (s * h) * dir;
        const Aabb box = g.bounds.transformed(pose);
        if (box.overlaps(rest_box.inflated(cell)) || (config.support_plane && box.min.z() < 0.0)) {
          if (pose_penetration(rest, g, pose, config.support_plane) > accept) {
            clear = false;
            break;
          }
        }
        if (disassembled(rest_box, box, clearance)) break;
      }
      if (clear) {
        plan.waypoints = {mover.pose, pose};
        plan.force_sequence = {force * dir};
        return plan;
      }
    }
  }

  SimConfig sim = config.sim;
  sim.gravity = Vec3::Zero();

  struct Node {
    Vec3 position;
    Quat orientation;
    int parent = -1;
    std::vector<RigidTransform> waypoints;
    std::vector<Vec3> forces;
  };
  std::vector<Node> nodes;
  const Vec3 start_com = mover.pose.apply(g.center_of_mass);
  nodes.push_back({start_com, mover.pose.rotation, -1, {}, {}});
  using Entry = std::tuple<double, int>;  // (distance, -index)
  std::priority_queue<Entry> open;
  open.push({0.0, 0});
  std::set<std::array<long long, 7>> visited;
  auto discretize = [&](const Vec3& p, Quat q) {
    if (q.w() < 0.0) q.coeffs() = -q.coeffs();
    std::array<long long, 7> key;
    for (int a = 0; a < 3; ++a) key[a] = std::llround(p[a] / cell);
    for (int a = 0; a < 4; ++a) key[3 + a] = std::llround(q.coeffs()[a] * 20.0);
    return key;
  };
  visited.insert(discretize(start_com, mover.pose.rotation));

  auto build = [&](int leaf) {
    std::vector<int> chain;
    for (int n = leaf; n >= 0; n = nodes[n].parent) chain.push_back(n);
    std::reverse(chain.begin(), chain.end());
    MotionPlan out;
    out.part_id = g.id;
    out.waypoints.push_back(mover.pose);
    for (int n : chain) {
      out.waypoints.insert(out.waypoints.end(), nodes[n].waypoints.begin(), nodes[n].waypoints.end());
      out.force_sequence.insert(out.force_sequence.end(), nodes[n].forces.begin(), nodes[n].forces.end());
    }
    return out;
  };

  int used = 0;
  bool out_of_budget = false;
  std::string last_problem;
  while (!open.empty() && !out_of_budget) {
    const int current = -std::get<1>(open.top()) ;
    open.pop();
    const Vec3 base_pos = nodes[current].position;
    const Quat base_rot = nodes[current].orientation;
    for (const Vec3& local_dir : search_directions()) {
      if (used + config.steps_per_expansion > config.budget) {
        out_of_budget = true;
        break;
      }
      const Vec3 dir = frame * local_dir;
      SimScene scene(sim, config.support_plane);
      for (const auto& r : rest) scene.add_part(r.geometry, r.pose, true);
      BodyState state;
      state.position = base_pos;
      state.orientation = base_rot;
      state.external_force = force * dir;
      const std::size_t idx = scene.add_part(mover.geometry, state);
      Node child;
      child.parent = current;
      bool pruned = false;
      bool done = false;
      for (int s = 0; s < config.steps_per_expansion; ++s) {
        try {
          scene.step();
        } catch (const SimulationDiverged& e) {
          last_problem = e.what();
          pruned = true;
          ++used;
          break;
        }
        ++used;
        const RigidTransform pose = scene.mesh_pose(idx);
        child.waypoints.push_back(pose);
        child.forces.push_back(force * dir);
        if (scene.max_contact_depth(idx) > allowed) {
          pruned = true;
          break;
        }
        if (disassembled(rest_box, g.bounds.transformed(pose), clearance)) {
          done = true;
          break;
        }
      }
      if (pruned) continue;
      child.position = scene.state(idx).position;
      child.orientation = scene.state(idx).orientation;
      nodes.push_back(std::move(child));
      const int id = static_cast<int>(nodes.size()) - 1;
      if (done) {
        MotionPlan found = build(id);
        if (motion_max_penetration(rest, g, found.waypoints, 0.5 * cell, config.support_plane) <= accept) {
          found.budget_used = used;
          return found;
        }
        last_problem = "candidate path failed the interpolated collision check";
        continue;
      }
      if (!visited.insert(discretize(nodes[id].position, nodes[id].orientation)).second) continue;
      open.push({(nodes[id].position - start_com).norm(), -id});
    }
  }
  if (out_of_budget) {
    report("path budget of " + std::to_string(config.budget) + " steps exhausted");
  } else {
    report(last_problem.empty() ? "no collision-free direction left to expand" : last_problem);
  }
  return std::nullopt;
}

}  // namespace asap
