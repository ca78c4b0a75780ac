#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "asap/path_planner.hpp"
#include "asap/stability.hpp"
#include "asap/stable_pose.hpp"

namespace asap {

/// One feasible removal in disassembly order.
struct DisassemblyStep {
  int part = -1;
  StablePose pose;     // pose of the node the part is removed from
  MotionPlan motion;   // disassembly direction
  HoldPlan hold;       // holds for the remainder
};

struct PlanStep {
  std::string part_id;
  RigidTransform pose;                  // assembled frame -> world for the partial assembly
  std::vector<std::string> held_parts;  // held while this part is added
  MotionPlan assembly_motion;           // reversed disassembly motion; empty for the base part
};

/// Assembly-order steps; step 0 places the base part.
struct SequencePlan {
  std::string assembly_id;
  std::string method;
  std::vector<PlanStep> steps;
  int evaluations = 0;
  double wall_time_s = 0.0;

  std::vector<std::string> order() const;  // assembly order of part ids
};

/// Reverses a complete disassembly path (n−1 removals) into assembly steps.
SequencePlan build_sequence_plan(const Assembly& assembly, const std::vector<DisassemblyStep>& removals);

nlohmann::json plan_to_json(const SequencePlan& plan);
SequencePlan plan_from_json(const nlohmann::json& j);
void save_plan(const std::filesystem::path& path, const SequencePlan& plan);
SequencePlan load_plan(const std::filesystem::path& path);

nlohmann::json transform_to_json(const RigidTransform& tf);
RigidTransform transform_from_json(const nlohmann::json& j);

}  // namespace asap
