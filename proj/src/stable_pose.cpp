#include "asap/stable_pose.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace asap {

namespace {

double lowest_z(const std::vector<Vec3>& points, const Quat& r) {
  double z = std::numeric_limits<double>::infinity();
  const Mat3 m = r.toRotationMatrix();
  for (const auto& p : points) z = std::min(z, m.row(2).dot(p));
  return z;
}

RigidTransform placement(const std::vector<Vec3>& points, const Vec3& com, const Quat& r) {
  const Vec3 c = r * com;
  return {r, Vec3(-c.x(), -c.y(), -lowest_z(points, r))};
}

// Distance from the COM projection to the nearest polygon edge; negative when
// outside.
double facet_quality(const HullFacet& facet, const Vec3& com) {
  const Vec3 proj = com - (facet.normal.dot(com) - facet.offset) * facet.normal;
  double q = std::numeric_limits<double>::infinity();
  const std::size_t m = facet.polygon.size();
  if (m < 3) return -1.0;
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3& a = facet.polygon[i];
    const Vec3& b = facet.polygon[(i + 1) % m];
    const Vec3 inward = facet.normal.cross(b - a).normalized();
    q = std::min(q, inward.dot(proj - a));
  }
  return q;
}

bool better(const StablePose& a, const StablePose& b) {
  const double tol = 1e-9;
  if (std::abs(a.quality - b.quality) > tol) return a.quality > b.quality;
  if (std::abs(a.facet_area - b.facet_area) > tol * std::max(1.0, a.facet_area)) {
    return a.facet_area > b.facet_area;
  }
  return a.facet_index < b.facet_index;
}

struct Ranked {
  std::vector<StablePose> poses;
  std::vector<HullFacet> facets;
};

Ranked rank(const std::vector<Vec3>& points, const Vec3& com) {
  Ranked out;
  const ConvexHull hull = convex_hull(points);
  out.facets = merge_facets(hull, kFacetAngleTol);
  for (int f = 0; f < static_cast<int>(out.facets.size()); ++f) {
    const HullFacet& facet = out.facets[f];
    const double q = facet_quality(facet, com);
    if (!(q > kComMargin)) continue;
    StablePose pose;
    pose.quality = q;
    pose.facet_index = f;
    pose.facet_area = facet.area;
    pose.facet_normal = facet.normal;
    pose.transform = placement(hull.points, com, rotation_between(facet.normal, -Vec3::UnitZ()));
    out.poses.push_back(pose);
  }
  std::stable_sort(out.poses.begin(), out.poses.end(), better);
  return out;
}

}  // namespace

std::vector<StablePose> stable_poses(const std::vector<Vec3>& points, const Vec3& com) {
  return rank(points, com).poses;
}

std::vector<StablePose> enumerate_stable_poses(const Assembly& assembly, const PartSet& subset, int k) {
  if (subset.empty()) throw std::invalid_argument("pose enumeration needs a non-empty subassembly");
  if (k < 1) throw std::invalid_argument("pose count k must be >= 1");
  auto poses = stable_poses(assembled_vertices(assembly, subset), combined_center_of_mass(assembly, subset));
  if (static_cast<int>(poses.size()) > k) poses.resize(k);
  return poses;
}

RigidTransform place_with_rotation(const Assembly& assembly, const PartSet& subset, const Quat& rotation) {
  return placement(assembled_vertices(assembly, subset), combined_center_of_mass(assembly, subset),
                   rotation);
}

std::vector<StablePose> pose_candidates(const Assembly& assembly, const PartSet& subset,
                                        const std::optional<StablePose>& parent, int k) {
  if (subset.empty()) throw std::invalid_argument("pose enumeration needs a non-empty subassembly");
  if (k < 1) throw std::invalid_argument("pose count k must be >= 1");
  const std::vector<Vec3> points = assembled_vertices(assembly, subset);
  const Vec3 com = combined_center_of_mass(assembly, subset);
  Ranked ranked = rank(points, com);
  std::vector<StablePose> poses = ranked.poses;
  if (parent) {
    const Quat r = parent->transform.rotation;
    const Vec3 down = r.conjugate() * (-Vec3::UnitZ());
    const double cos_tol = std::cos(kFacetAngleTol);
    auto it = std::find_if(poses.begin(), poses.end(),
                           [&](const StablePose& p) { return p.facet_normal.dot(down) >= cos_tol; });
    if (it != poses.end()) {
      StablePose reused = *it;
      reused.transform = placement(points, com, r);
      poses.erase(it);
      poses.insert(poses.begin(), reused);
    }
  }
  if (static_cast<int>(poses.size()) > k) poses.resize(k);
  return poses;
}

std::vector<StablePose> upright_poses(const Assembly& assembly, const PartSet& subset) {
  const std::vector<Vec3> points = assembled_vertices(assembly, subset);
  const Vec3 com = combined_center_of_mass(assembly, subset);
  std::vector<StablePose> out;
  const double cos_tol = std::cos(kFacetAngleTol);
  for (StablePose p : rank(points, com).poses) {
    if (p.facet_normal.dot(-Vec3::UnitZ()) < cos_tol) continue;
    p.transform = placement(points, com, Quat::Identity());
    out.push_back(p);
  }
  return out;
}

bool rigid_proxy_stays(const Assembly& assembly, const PartSet& subset, const StablePose& pose,
                       int steps, double distance_threshold, const SimConfig& sim) {
  std::vector<std::pair<PartPtr, RigidTransform>> members;
  for (int i : subset.indices()) members.push_back({assembly.parts[i].geometry, assembly.parts[i].assembled});
  PartPtr proxy = make_compound("rigid-proxy", members);
  SimScene scene(sim, true);
  scene.add_part(proxy, pose.transform, false);
  const Vec3 start = scene.state(0).position;
  for (int s = 0; s < steps; ++s) {
    scene.step();
    if ((scene.state(0).position - start).norm() > distance_threshold) return false;
  }
  return true;
}

}  // namespace asap
