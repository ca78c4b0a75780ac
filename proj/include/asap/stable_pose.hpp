#pragma once

#include <optional>
#include <vector>

#include "asap/assembly.hpp"
#include "asap/convex_hull.hpp"
#include "asap/physics.hpp"

namespace asap {

/// Resting placement of a subassembly: `transform` maps the assembled frame to
/// the world, the resting facet faces −z, and the lowest point sits at z = 0.
struct StablePose {
  RigidTransform transform;
  double quality = 0.0;  // COM projection to facet boundary distance, m
  int facet_index = -1;
  double facet_area = 0.0;
  Vec3 facet_normal = Vec3::Zero();  // assembled frame, outward
};

inline constexpr int kDefaultPoseCount = 5;
inline constexpr double kFacetAngleTol = 1e-6;
inline constexpr double kComMargin = 1e-9;

/// Stable poses of arbitrary points with a given center of mass, best first.
/// Throws DegenerateHull for coplanar input.
std::vector<StablePose> stable_poses(const std::vector<Vec3>& points, const Vec3& com);

/// Top-k stable poses of `subset` (k >= 1).
std::vector<StablePose> enumerate_stable_poses(const Assembly& assembly, const PartSet& subset,
                                               int k = kDefaultPoseCount);

/// Pose whose rotation is `rotation` with a fresh translation putting the
/// subset's COM above the origin and its lowest point at z = 0.
RigidTransform place_with_rotation(const Assembly& assembly, const PartSet& subset,
                                   const Quat& rotation);

/// Plain ranking with the parent's pose moved to the front when it is still
/// stable for `subset` (same world orientation; translation recomputed).
std::vector<StablePose> pose_candidates(const Assembly& assembly, const PartSet& subset,
                                        const std::optional<StablePose>& parent,
                                        int k = kDefaultPoseCount);

/// Only poses that keep the assembled orientation (resting facet facing −z
/// in the assembled frame).
std::vector<StablePose> upright_poses(const Assembly& assembly, const PartSet& subset);

/// Simulates `subset` at `pose` as one rigid body on the plane (no holds)
/// and reports whether the COM stays within `distance_threshold`.
bool rigid_proxy_stays(const Assembly& assembly, const PartSet& subset, const StablePose& pose,
                       int steps, double distance_threshold, const SimConfig& sim = {});

}  // namespace asap
