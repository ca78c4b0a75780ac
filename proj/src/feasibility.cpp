#include "asap/feasibility.hpp"

#include <cstring>

namespace asap {

namespace {

template <typename T>
void append(std::string& key, const T& v) {
  key.append(reinterpret_cast<const char*>(&v), sizeof(T));
}

std::string transform_key(const PartSet& set, int part, const RigidTransform& tf, int extra) {
  std::string key;
  key.reserve(96);
  for (auto w : set.words()) append(key, w);
  append(key, part);
  append(key, extra);
  for (int a = 0; a < 4; ++a) append(key, tf.rotation.coeffs()[a]);
  for (int a = 0; a < 3; ++a) append(key, tf.translation[a]);
  return key;
}

}  // namespace

std::optional<FeasibilityCache::PathResult> FeasibilityCache::find_path(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = paths_.find(key);
  if (it == paths_.end()) return std::nullopt;
  ++hits_;
  return it->second;
}

void FeasibilityCache::store_path(const std::string& key, PathResult value) {
  std::lock_guard lock(mutex_);
  paths_.emplace(key, std::move(value));
}

std::optional<HoldPlan> FeasibilityCache::find_hold(const std::string& key) const {
  std::lock_guard lock(mutex_);
  auto it = holds_.find(key);
  if (it == holds_.end()) return std::nullopt;
  ++hits_;
  return it->second;
}

void FeasibilityCache::store_hold(const std::string& key, HoldPlan value) {
  std::lock_guard lock(mutex_);
  holds_.emplace(key, std::move(value));
}

FeasibilityChecker::FeasibilityChecker(const Assembly& assembly, FeasibilitySettings settings,
                                       std::shared_ptr<FeasibilityCache> cache)
    : assembly_(assembly), settings_(std::move(settings)), cache_(std::move(cache)) {
  if (!cache_) cache_ = std::make_shared<FeasibilityCache>();
  d_th_ = settings_.distance_threshold > 0.0 ? settings_.distance_threshold : 0.01 * assembly_.diagonal();
}

std::vector<StablePose> FeasibilityChecker::poses(const PartSet& node,
                                                  const std::optional<StablePose>& parent) const {
  if (settings_.upright_only) {
    auto out = upright_poses(assembly_, node);
    if (static_cast<int>(out.size()) > settings_.pose_k) out.resize(settings_.pose_k);
    return out;
  }
  if (settings_.reuse_poses) return pose_candidates(assembly_, node, parent, settings_.pose_k);
  return enumerate_stable_poses(assembly_, node, settings_.pose_k);
}

FeasibilityCache::PathResult FeasibilityChecker::path(const PartSet& node, int part,
                                                      const RigidTransform& placement,
                                                      bool support_plane) const {
  const std::string key = transform_key(node, part, placement, support_plane ? 1 : 0);
  if (auto hit = cache_->find_path(key)) return *hit;
  const PartSet rest_set = node.without(part);
  const std::vector<PlacedPart> rest = place(assembly_, rest_set, placement);
  const PlacedPart mover{assembly_.parts[part].geometry, placement * assembly_.parts[part].assembled};
  PathConfig cfg = settings_.path;
  cfg.sim = settings_.sim;
  cfg.support_plane = support_plane;
  FeasibilityCache::PathResult result;
  result.plan = check_assemblable(rest, mover, placement.rotation, cfg, &result.diagnostic);
  cache_->store_path(key, result);
  return result;
}

StabilityQuery FeasibilityChecker::stability_query(const PartSet& subset, const RigidTransform& placement,
                                                   int max_held) const {
  StabilityQuery q;
  q.parts = place(assembly_, subset, placement);
  q.max_held = max_held;
  q.max_steps = settings_.sim_steps;
  q.distance_threshold = d_th_;
  q.sim = settings_.sim;
  return q;
}

HoldPlan FeasibilityChecker::stability(const PartSet& subset, const RigidTransform& placement,
                                       int max_held) const {
  const std::string key = transform_key(subset, -1, placement, max_held);
  if (auto hit = cache_->find_hold(key)) return *hit;
  HoldPlan plan = check_stable_greedy(stability_query(subset, placement, max_held));
  cache_->store_hold(key, plan);
  return plan;
}

AttemptResult FeasibilityChecker::attempt(const PartSet& node, int part, const StablePose& pose) const {
  AttemptResult result;
  auto path_result = path(node, part, pose.transform, true);
  result.motion = std::move(path_result.plan);
  result.diagnostic = std::move(path_result.diagnostic);
  if (!result.motion) return result;
  result.stability_checked = true;
  result.hold = stability(node.without(part), pose.transform, settings_.max_held);
  if (!result.hold.stable) result.diagnostic = "unstable with up to " + std::to_string(settings_.max_held) + " holds";
  return result;
}

}  // namespace asap
