#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "asap/part.hpp"

namespace asap {

struct SimConfig {
  double dt = 0.01;
  Vec3 gravity = Vec3(0.0, 0.0, -9.81);
  double contact_stiffness = 1e5;  // N/m per contact sample
  double contact_damping = 1e3;    // N·s/m per contact sample
  double friction_coeff = 0.5;
  int newton_iters = 10;
  double newton_tol = 1e-8;
  /// Slip speed below which friction acts as viscous regularized sticking.
  double friction_slip_velocity = 1e-3;

  void validate() const;
};

struct BodyState {
  Vec3 position = Vec3::Zero();  // center of mass, world
  Quat orientation = Quat::Identity();
  Vec3 linear_velocity = Vec3::Zero();
  Vec3 angular_velocity = Vec3::Zero();
  bool held = false;
  Vec3 external_force = Vec3::Zero();
  Vec3 external_torque = Vec3::Zero();
};

class SimulationDiverged : public std::runtime_error {
 public:
  explicit SimulationDiverged(std::string part)
      : std::runtime_error("simulation diverged at part '" + part + "'"), part_id(std::move(part)) {}
  std::string part_id;
};

/// Penalty-contact rigid bodies on an optional z = 0 support plane,
/// integrated with linearly implicit Euler (Newton on velocities with the
/// contact geometry of the step's initial state).
///
/// Contact samples of each body are tested against the other bodies' SDFs
/// and the plane. Normal force is k·(depth − offset) − c·v_n per sample,
/// where the per-pair offset is the overlap present when the scene is first
/// stepped, capped at 2·cell_size; friction opposes slip and is capped by
/// μ·F_n. Held bodies are not integrated.
class SimScene {
 public:
  explicit SimScene(SimConfig config = {}, bool support_plane = true);

  std::size_t add_part(PartPtr geometry, const BodyState& state);
  /// Places the body so its mesh frame sits at `mesh_pose`.
  std::size_t add_part(PartPtr geometry, const RigidTransform& mesh_pose, bool held = false);

  std::size_t size() const { return bodies_.size(); }
  const PartGeometry& part(std::size_t i) const { return *bodies_[i].geometry; }
  const BodyState& state(std::size_t i) const { return bodies_[i].state; }
  BodyState& mutable_state(std::size_t i);
  std::size_t index_of(std::string_view id) const;  // throws std::out_of_range
  RigidTransform mesh_pose(std::size_t i) const;
  std::vector<Vec3> positions() const;
  const SimConfig& config() const { return config_; }
  bool support_plane() const { return support_plane_; }
  int steps_taken() const { return steps_; }

  /// Two times the largest SDF cell size in the scene.
  double contact_threshold() const;

  void step();

  /// True iff the part is farther than contact_threshold() from every other
  /// part and from the support plane.
  bool is_disconnected(std::size_t i) const;
  bool is_disconnected(std::string_view id) const { return is_disconnected(index_of(id)); }

  /// Deepest contact involving the body after the most recent step (0 before
  /// any step).
  double max_contact_depth(std::size_t i) const {
    return i < max_depth_.size() ? max_depth_[i] : 0.0;
  }

 private:
  struct Body {
    PartPtr geometry;
    BodyState state;
    Eigen::Matrix3Xd local_points;  // contact samples relative to the COM
    Aabb local_bounds;              // mesh bounds relative to the COM
    Mat3 inertia_body;
    double mass = 0.0;
    double radius = 0.0;  // farthest contact sample from the COM
  };
  struct Contact {
    int a = -1;  // receives +normal
    int b = -1;  // -1 for the plane
    Vec3 point;
    Vec3 normal;
    double depth = 0.0;
    double offset = 0.0;
  };
  struct Candidate {
    Vec3 position;
    Mat3 rotation;
    Aabb bounds;
    Eigen::Matrix3Xd world_points;
  };

  void capture_offsets();
  std::vector<Candidate> candidates() const;
  /// Samples closer than reach[a] + reach[b] (or reach[a] to the plane);
  /// depth is negative for samples still outside. `touched` marks real overlap.
  void gather_contacts(const std::vector<Candidate>& cand, const std::vector<double>& reach,
                       std::vector<Contact>& out, std::vector<char>& touched) const;
  void refresh_contacts();
  void record_depths(const std::vector<Contact>& contacts);
  double pair_offset(int a, int b) const;

  SimConfig config_;
  bool support_plane_ = true;
  std::vector<Body> bodies_;
  std::vector<double> pair_offsets_;  // symmetric n×n
  std::vector<double> plane_offsets_;
  bool offsets_ready_ = false;
  std::vector<Contact> contacts_;  // at the current state
  bool contacts_valid_ = false;
  std::vector<char> touched_;
  bool touched_valid_ = false;
  std::vector<double> max_depth_;
  int steps_ = 0;
};

using Trajectory = std::vector<std::vector<Vec3>>;  // [step][part] COM positions

/// Steps n times recording positions after each step. Throws
/// SimulationDiverged on non-finite state.
Trajectory run(SimScene& scene, int n_steps);

/// Functional form: returns the scene advanced by one step.
SimScene step(SimScene scene);

/// One JSON object per part: {"step", "part_id", "position", "quaternion"}.
void write_snapshot_jsonl(std::ostream& out, const SimScene& scene, int step_index);

}  // namespace asap
