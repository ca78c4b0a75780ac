#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asap/assembly.hpp"
#include "asap/physics.hpp"

namespace asap {

struct MotionPlan {
  std::string part_id;
  std::vector<RigidTransform> waypoints;  // mover mesh-frame poses in the world
  std::vector<Vec3> force_sequence;       // one per segment
  int budget_used = 0;                    // simulation steps
};

struct PathConfig {
  int budget = 2000;            // simulation steps
  double force_scale = 10.0;    // force magnitude in units of the mover's weight
  int steps_per_expansion = 10;
  bool straight_line_shortcut = true;
  bool support_plane = true;
  SimConfig sim;
};

/// Disassembly motion search for `mover` out of `rest` (both already in world
/// poses). `frame` rotates the search directions (usually the stable pose).
/// Returns nullopt when no disassembled state is reached within budget;
/// `diagnostic` receives the reason.
std::optional<MotionPlan> check_assemblable(const std::vector<PlacedPart>& rest, const PlacedPart& mover,
                                            const Quat& frame, const PathConfig& config = {},
                                            std::string* diagnostic = nullptr);

/// Waypoints reversed; forces negated and paired with the reversed segments.
MotionPlan reverse_to_assembly(const MotionPlan& plan);

/// True when the mover's bounds are at least one mover diagonal away from the
/// union bounds of the rest.
bool is_disassembled(const std::vector<PlacedPart>& rest, const PlacedPart& mover);

/// Deepest penetration of the mover into the rest or the plane, over the
/// waypoints and linear interpolations between them at `spacing`.
double motion_max_penetration(const std::vector<PlacedPart>& rest, const PartGeometry& mover,
                              const std::vector<RigidTransform>& waypoints, double spacing,
                              bool support_plane = true);

/// Mover penetration against every rest part and the plane at one pose.
double pose_penetration(const std::vector<PlacedPart>& rest, const PartGeometry& mover,
                        const RigidTransform& pose, bool support_plane);

/// The 26 unit directions to the neighbors of a cube cell, axes first.
const std::vector<Vec3>& search_directions();

}  // namespace asap
