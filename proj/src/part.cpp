#include "asap/part.hpp"

#include <algorithm>
#include <cmath>

namespace asap {

PartPtr make_part(std::string id, TriMesh mesh, double density, double cell_size) {
  if (!mesh.watertight) throw MeshError("part '" + id + "' mesh is not watertight");
  if (!(density > 0.0)) throw std::invalid_argument("part '" + id + "' density must be positive");
  auto part = std::make_shared<PartGeometry>();
  part->id = std::move(id);
  const MassProperties props = mass_properties(mesh, density);
  part->density = density;
  part->volume = props.volume;
  part->mass = props.volume * density;
  part->center_of_mass = props.center_of_mass;
  part->inertia = props.inertia;
  part->bounds = mesh.bounds();
  part->surface_points = sample_surface(mesh, kSurfaceSampleCount, mesh_hash(mesh));
  part->contact_points = lattice_surface_points(mesh, lattice_spacing(mesh, kContactLatticeTarget));
  if (cell_size <= 0.0) cell_size = default_cell_size(mesh);
  part->sdf = cached_sdf(mesh, cell_size);
  part->mesh = std::move(mesh);
  return part;
}

PartPtr make_compound(std::string id, const std::vector<std::pair<PartPtr, RigidTransform>>& members) {
  if (members.empty()) throw std::invalid_argument("compound body needs at least one member");
  auto body = std::make_shared<PartGeometry>();
  body->id = std::move(id);
  Vec3 weighted = Vec3::Zero();
  for (const auto& [part, tf] : members) {
    body->mass += part->mass;
    body->volume += part->volume;
    weighted += part->mass * tf.apply(part->center_of_mass);
  }
  body->center_of_mass = weighted / body->mass;
  body->density = body->mass / body->volume;
  for (const auto& [part, tf] : members) {
    const Mat3 r = tf.rotation.toRotationMatrix();
    const Vec3 d = tf.apply(part->center_of_mass) - body->center_of_mass;
    body->inertia += r * part->inertia * r.transpose() +
                     part->mass * (d.squaredNorm() * Mat3::Identity() - d * d.transpose());
    const int base = static_cast<int>(body->mesh.vertices.size());
    for (const Vec3& v : part->mesh.vertices) body->mesh.vertices.push_back(tf.apply(v));
    for (const auto& t : part->mesh.triangles) body->mesh.triangles.push_back({t[0] + base, t[1] + base, t[2] + base});
    for (const Vec3& p : part->contact_points) body->contact_points.push_back(tf.apply(p));
    for (const Vec3& p : part->surface_points) body->surface_points.push_back(tf.apply(p));
  }
  body->mesh.watertight = true;
  body->bounds = body->mesh.bounds();
  return body;
}

namespace {

// Appends records for samples of `src` that lie inside `dst`. `flip` negates
// normals so they always push the query's first part out of its second.
void collect(const PartGeometry& src, const RigidTransform& pose_src, const PartGeometry& dst,
             const RigidTransform& pose_dst, bool flip, std::vector<ContactRecord>& out) {
  const RigidTransform to_dst = pose_dst.inverse() * pose_src;
  const Mat3 rot = to_dst.rotation.toRotationMatrix();
  const Mat3 dst_rot = pose_dst.rotation.toRotationMatrix();
  const SdfGrid& grid = *dst.sdf;
  const Vec3 dst_com_world = pose_dst.apply(dst.center_of_mass);
  const Vec3 src_com_world = pose_src.apply(src.center_of_mass);
  for (const Vec3& p : src.contact_points) {
    const Vec3 local = rot * p + to_dst.translation;
    double value = 0.0;
    Vec3 grad;
    if (!grid.sample(local, value, &grad) || value >= 0.0) continue;
    ContactRecord rec;
    rec.point = pose_src.apply(p);
    rec.depth = -value;
    Vec3 n = dst_rot * grad;
    const double len = n.norm();
    if (len > 1e-12) {
      n /= len;
    } else {
      // degenerate gradient: push away from the other part's COM
      n = rec.point - dst_com_world;
      if (n.norm() < 1e-12) n = rec.point - src_com_world;
      n = n.norm() > 1e-12 ? n.normalized() : Vec3::UnitZ();
    }
    rec.normal = flip ? -n : n;
    out.push_back(rec);
  }
}

double min_over(const PartGeometry& src, const RigidTransform& pose_src, const PartGeometry& dst,
                const RigidTransform& pose_dst, double best) {
  const RigidTransform to_dst = pose_dst.inverse() * pose_src;
  const Mat3 rot = to_dst.rotation.toRotationMatrix();
  const Aabb reach = dst.sdf->bounds().inflated(best);
  for (const Vec3& p : src.contact_points) {
    const Vec3 local = rot * p + to_dst.translation;
    if (!reach.contains(local)) continue;
    best = std::min(best, dst.sdf->value(local));
  }
  return best;
}

}  // namespace

std::vector<ContactRecord> penetration_query(const PartGeometry& a, const RigidTransform& pose_a,
                                             const PartGeometry& b, const RigidTransform& pose_b) {
  std::vector<ContactRecord> out;
  if (!a.sdf || !b.sdf) return out;
  const Aabb wa = a.bounds.transformed(pose_a);
  const Aabb wb = b.bounds.transformed(pose_b);
  if (!wa.overlaps(wb)) return out;
  collect(a, pose_a, b, pose_b, false, out);
  collect(b, pose_b, a, pose_a, true, out);
  return out;
}

double max_penetration(const PartGeometry& a, const RigidTransform& pose_a, const PartGeometry& b,
                       const RigidTransform& pose_b) {
  double depth = 0.0;
  for (const auto& rec : penetration_query(a, pose_a, b, pose_b)) depth = std::max(depth, rec.depth);
  return depth;
}

double min_separation(const PartGeometry& a, const RigidTransform& pose_a, const PartGeometry& b,
                      const RigidTransform& pose_b, double cutoff) {
  const Aabb wa = a.bounds.transformed(pose_a);
  const Aabb wb = b.bounds.transformed(pose_b);
  if (wa.distance_to(wb) > cutoff) return cutoff;
  double best = min_over(a, pose_a, b, pose_b, cutoff);
  best = min_over(b, pose_b, a, pose_a, best);
  return best;
}

}  // namespace asap
