#pragma once

#include <memory>
#include <string>
#include <vector>

#include "asap/geometry.hpp"
#include "asap/sdf.hpp"

namespace asap {

inline constexpr std::size_t kSurfaceSampleCount = 1000;
inline constexpr std::size_t kContactLatticeTarget = 800;

/// One rigid part in its own mesh frame. Immutable once built.
struct PartGeometry {
  std::string id;
  TriMesh mesh;
  std::shared_ptr<const SdfGrid> sdf;
  double density = 0.0;
  double volume = 0.0;
  double mass = 0.0;
  Vec3 center_of_mass = Vec3::Zero();
  Mat3 inertia = Mat3::Zero();  // about the COM
  std::vector<Vec3> surface_points;
  /// Lattice surface points including the vertices; used for contact sampling.
  std::vector<Vec3> contact_points;
  Aabb bounds;

  double cell_size() const { return sdf ? sdf->cell_size : 0.0; }
};

using PartPtr = std::shared_ptr<const PartGeometry>;

/// Builds mass properties, surface samples and the SDF (cell_size <= 0 picks
/// default_cell_size). Throws MeshError for non-watertight meshes.
PartPtr make_part(std::string id, TriMesh mesh, double density, double cell_size = 0.0);

/// One rigid body made of several parts placed in a common frame. The result
/// has no SDF, so it only collides with the support plane.
PartPtr make_compound(std::string id, const std::vector<std::pair<PartPtr, RigidTransform>>& members);

/// Contact record; `normal` is the unit direction that pushes `a` out of `b`.
struct ContactRecord {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::Zero();
  double depth = 0.0;
};

/// Every contact sample of a that is inside b, and every sample of b inside a.
/// Poses place each mesh frame in the world.
std::vector<ContactRecord> penetration_query(const PartGeometry& a, const RigidTransform& pose_a,
                                             const PartGeometry& b, const RigidTransform& pose_b);

/// Largest depth over penetration_query, 0 when disjoint.
double max_penetration(const PartGeometry& a, const RigidTransform& pose_a, const PartGeometry& b,
                       const RigidTransform& pose_b);

/// Approximate minimum SDF separation between the two parts (negative when
/// penetrating). Returns `cutoff` early when the bounds are farther apart.
double min_separation(const PartGeometry& a, const RigidTransform& pose_a, const PartGeometry& b,
                      const RigidTransform& pose_b, double cutoff);

}  // namespace asap
