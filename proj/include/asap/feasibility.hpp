#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "asap/assembly.hpp"
#include "asap/path_planner.hpp"
#include "asap/stability.hpp"
#include "asap/stable_pose.hpp"

namespace asap {

struct FeasibilitySettings {
  int max_held = 2;      // M
  int pose_k = kDefaultPoseCount;
  int sim_steps = 200;   // N for stability checks
  double distance_threshold = 0.0;  // <= 0: 0.01 × assembly bounding-box diagonal
  bool reuse_poses = true;
  bool upright_only = false;  // restrict to poses keeping the assembled orientation
  SimConfig sim;
  PathConfig path;
};

/// Shared evaluation counter; one unit per (part, pose) attempt.
class EvaluationBudget {
 public:
  explicit EvaluationBudget(int limit) : limit_(limit) {}
  bool exhausted() const { return used_ >= limit_; }
  void consume() { ++used_; }
  int used() const { return used_; }
  int limit() const { return limit_; }

 private:
  int limit_;
  int used_ = 0;
};

/// Memoized pure feasibility results for one assembly and one settings
/// profile (M is part of the stability key). Thread-safe.
class FeasibilityCache {
 public:
  struct PathResult {
    std::optional<MotionPlan> plan;
    std::string diagnostic;
  };

  std::optional<PathResult> find_path(const std::string& key) const;
  void store_path(const std::string& key, PathResult value);
  std::optional<HoldPlan> find_hold(const std::string& key) const;
  void store_hold(const std::string& key, HoldPlan value);

  std::size_t hits() const { return hits_; }

 private:
  mutable std::mutex mutex_;
  std::unordered_map<std::string, PathResult> paths_;
  std::unordered_map<std::string, HoldPlan> holds_;
  mutable std::size_t hits_ = 0;
};

struct AttemptResult {
  std::optional<MotionPlan> motion;  // disassembly direction
  HoldPlan hold;
  bool stability_checked = false;
  std::string diagnostic;

  bool feasible() const { return motion.has_value() && hold.stable; }
};

/// Runs CheckAssemblable and CheckStable for single-part removals.
class FeasibilityChecker {
 public:
  FeasibilityChecker(const Assembly& assembly, FeasibilitySettings settings,
                     std::shared_ptr<FeasibilityCache> cache = nullptr);

  const Assembly& assembly() const { return assembly_; }
  const FeasibilitySettings& settings() const { return settings_; }
  double distance_threshold() const { return d_th_; }

  /// SelectPose candidates for `node` (reuse rule applied when enabled).
  std::vector<StablePose> poses(const PartSet& node, const std::optional<StablePose>& parent) const;

  /// Remove `part` from `node` posed at `pose`: path check, then (only when
  /// a path exists) greedy stability of the remainder at the same placement.
  AttemptResult attempt(const PartSet& node, int part, const StablePose& pose) const;

  /// Path check alone, for an arbitrary placement of `node`.
  FeasibilityCache::PathResult path(const PartSet& node, int part, const RigidTransform& placement,
                                    bool support_plane) const;

  /// Greedy stability of `subset` at `placement` with up to `max_held` holds.
  HoldPlan stability(const PartSet& subset, const RigidTransform& placement, int max_held) const;

  StabilityQuery stability_query(const PartSet& subset, const RigidTransform& placement,
                                 int max_held) const;

 private:
  const Assembly& assembly_;
  FeasibilitySettings settings_;
  std::shared_ptr<FeasibilityCache> cache_;
  double d_th_;
};

}  // namespace asap
