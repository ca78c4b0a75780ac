#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>

namespace asap {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Quat = Eigen::Quaterniond;

/// Rigid transform x -> R x + t.
struct RigidTransform {
  Quat rotation = Quat::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }
  static RigidTransform from_translation(const Vec3& t) { return {Quat::Identity(), t}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 apply_vector(const Vec3& v) const { return rotation * v; }
  RigidTransform inverse() const {
    const Quat inv = rotation.conjugate();
    return {inv, -(inv * translation)};
  }
  /// (*this) ∘ other: apply other first.
  RigidTransform operator*(const RigidTransform& other) const {
    return {(rotation * other.rotation).normalized(), rotation * other.translation + translation};
  }
};

struct Aabb {
  Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

  bool empty() const { return (min.array() > max.array()).any(); }
  void extend(const Vec3& p) {
    min = min.cwiseMin(p);
    max = max.cwiseMax(p);
  }
  void extend(const Aabb& other) {
    if (other.empty()) return;
    min = min.cwiseMin(other.min);
    max = max.cwiseMax(other.max);
  }
  Vec3 center() const { return 0.5 * (min + max); }
  Vec3 extent() const { return max - min; }
  double diagonal() const { return empty() ? 0.0 : extent().norm(); }
  Aabb inflated(double margin) const {
    return {min - Vec3::Constant(margin), max + Vec3::Constant(margin)};
  }
  bool overlaps(const Aabb& o) const {
    return (min.array() <= o.max.array()).all() && (o.min.array() <= max.array()).all();
  }
  bool contains(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  /// Separating distance along the worst axis gap; 0 when overlapping.
  double distance_to(const Aabb& o) const;
  Aabb transformed(const RigidTransform& tf) const;
};

class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Triangle soup with shared vertices. Units are meters.
struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
  bool watertight = false;

  Aabb bounds() const;
  double surface_area() const;
  double triangle_area(std::size_t t) const;
};

struct EdgeDiagnostics {
  bool watertight = false;
  std::vector<std::pair<int, int>> boundary_edges;       // used by one triangle
  std::vector<std::pair<int, int>> non_manifold_edges;   // used by more than two
  std::vector<std::pair<int, int>> inconsistent_edges;   // shared but same direction twice
};

/// Edge-use analysis; watertight iff every undirected edge appears exactly
/// twice with opposite orientation.
EdgeDiagnostics analyze_edges(const TriMesh& mesh);

/// Validates indices, drops triangles with area <= 1e-12 m², computes the
/// watertight flag. Throws MeshError on bad indices, non-manifold edges, or
/// when nothing survives.
void validate_mesh(TriMesh& mesh);

TriMesh transformed(const TriMesh& mesh, const RigidTransform& tf);

struct MassProperties {
  double volume = 0.0;
  Vec3 center_of_mass = Vec3::Zero();
  Mat3 inertia = Mat3::Zero();  // about the COM, mesh axes, scaled by density
};

/// Divergence-theorem integrals over signed tetrahedra. Requires watertight.
MassProperties mass_properties(const TriMesh& mesh, double density);

/// Signed volume as a plain sum of origin tetrahedra.
double signed_volume(const TriMesh& mesh);

/// Area-uniform surface samples; deterministic for a given seed.
std::vector<Vec3> sample_surface(const TriMesh& mesh, std::size_t count, std::uint64_t seed);

/// Barycentric lattice points on every triangle, including vertices, with
/// roughly `spacing` between neighbors. Exact duplicates on shared edges are
/// merged. Symmetric faces give lattices centered on the face centroid.
std::vector<Vec3> lattice_surface_points(const TriMesh& mesh, double spacing);

/// Lattice spacing that yields about `target` points on a mesh of this area.
double lattice_spacing(const TriMesh& mesh, std::size_t target);

/// Closest point on triangle (a, b, c) to p. `feature` reports the region:
/// 0 = face interior, 1..3 = edge (ab, bc, ca), 4..6 = vertex (a, b, c).
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c,
                               int* feature = nullptr);

/// Rotation taking unit vector `from` onto unit vector `to`.
Quat rotation_between(const Vec3& from, const Vec3& to);

/// FNV-1a over the raw bytes of vertices and triangles.
std::uint64_t mesh_hash(const TriMesh& mesh);

}  // namespace asap
