#include "asap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <sstream>

namespace asap {

double Aabb::distance_to(const Aabb& o) const {
  Vec3 gap = (o.min - max).cwiseMax(min - o.max).cwiseMax(Vec3::Zero());
  return gap.norm();
}

Aabb Aabb::transformed(const RigidTransform& tf) const {
  Aabb out;
  if (empty()) return out;
  for (int i = 0; i < 8; ++i) {
    Vec3 corner((i & 1) ? max.x() : min.x(), (i & 2) ? max.y() : min.y(),
                (i & 4) ? max.z() : min.z());
    out.extend(tf.apply(corner));
  }
  return out;
}

Aabb TriMesh::bounds() const {
  Aabb box;
  for (const auto& v : vertices) box.extend(v);
  return box;
}

double TriMesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles[t];
  const Vec3& a = vertices[tri[0]];
  return 0.5 * (vertices[tri[1]] - a).cross(vertices[tri[2]] - a).norm();
}

double TriMesh::surface_area() const {
  double area = 0.0;
  for (std::size_t t = 0; t < triangles.size(); ++t) area += triangle_area(t);
  return area;
}

EdgeDiagnostics analyze_edges(const TriMesh& mesh) {
  // directed count per undirected key: (forward uses, backward uses)
  std::map<std::pair<int, int>, std::pair<int, int>> uses;
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      int a = tri[e];
      int b = tri[(e + 1) % 3];
      if (a < b) {
        uses[{a, b}].first++;
      } else {
        uses[{b, a}].second++;
      }
    }
  }
  EdgeDiagnostics diag;
  for (const auto& [edge, count] : uses) {
    int total = count.first + count.second;
    if (total == 1) {
      diag.boundary_edges.push_back(edge);
    } else if (total > 2) {
      diag.non_manifold_edges.push_back(edge);
    } else if (count.first != 1 || count.second != 1) {
      diag.inconsistent_edges.push_back(edge);
    }
  }
  diag.watertight = !mesh.triangles.empty() && diag.boundary_edges.empty() &&
                    diag.non_manifold_edges.empty() && diag.inconsistent_edges.empty();
  return diag;
}

void validate_mesh(TriMesh& mesh) {
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<std::array<int, 3>> kept;
  kept.reserve(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int idx : tri) {
      if (idx < 0 || idx >= n) {
        throw MeshError("triangle " + std::to_string(t) + " references vertex " +
                        std::to_string(idx) + " out of range [0, " + std::to_string(n) + ")");
      }
    }
    if (mesh.triangle_area(t) > 1e-12) kept.push_back(tri);
  }
  if (kept.empty()) throw MeshError("mesh has no non-degenerate triangles");
  mesh.triangles = std::move(kept);

  EdgeDiagnostics diag = analyze_edges(mesh);
  if (!diag.non_manifold_edges.empty()) {
    std::ostringstream msg;
    msg << "non-manifold edges:";
    for (const auto& [a, b] : diag.non_manifold_edges) msg << " (" << a << "," << b << ")";
    throw MeshError(msg.str());
  }
  mesh.watertight = diag.watertight;
}

TriMesh transformed(const TriMesh& mesh, const RigidTransform& tf) {
  TriMesh out = mesh;
  for (auto& v : out.vertices) v = tf.apply(v);
  return out;
}

double signed_volume(const TriMesh& mesh) {
  double vol = 0.0;
  for (const auto& tri : mesh.triangles) {
    vol += mesh.vertices[tri[0]].dot(mesh.vertices[tri[1]].cross(mesh.vertices[tri[2]])) / 6.0;
  }
  return vol;
}

MassProperties mass_properties(const TriMesh& mesh, double density) {
  if (!mesh.watertight) throw MeshError("mass properties require a watertight mesh");
  // Integrate about a reference point inside the bounds to limit cancellation.
  const Vec3 ref = mesh.bounds().center();
  Mat3 canonical;
  canonical << 2, 1, 1, 1, 2, 1, 1, 1, 2;
  canonical /= 120.0;

  double volume = 0.0;
  Vec3 first = Vec3::Zero();
  Mat3 second = Mat3::Zero();
  for (const auto& tri : mesh.triangles) {
    Mat3 a;
    a.col(0) = mesh.vertices[tri[0]] - ref;
    a.col(1) = mesh.vertices[tri[1]] - ref;
    a.col(2) = mesh.vertices[tri[2]] - ref;
    const double det = a.determinant();
    volume += det / 6.0;
    first += det / 24.0 * (a.col(0) + a.col(1) + a.col(2));
    second += det * (a * canonical * a.transpose());
  }
  if (!(volume > 0.0)) throw MeshError("mesh encloses non-positive volume (inverted winding?)");

  MassProperties props;
  props.volume = volume;
  const Vec3 com_rel = first / volume;
  props.center_of_mass = com_rel + ref;
  const Mat3 cov = (second - volume * com_rel * com_rel.transpose()) * density;
  props.inertia = cov.trace() * Mat3::Identity() - cov;
  return props;
}

std::vector<Vec3> sample_surface(const TriMesh& mesh, std::size_t count, std::uint64_t seed) {
  std::vector<double> cumulative(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    total += mesh.triangle_area(t);
    cumulative[t] = total;
  }
  std::vector<Vec3> points;
  points.reserve(count);
  if (total <= 0.0) return points;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < count; ++i) {
    const double pick = unit(rng) * total;
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), pick);
    std::size_t t = std::min<std::size_t>(it - cumulative.begin(), mesh.triangles.size() - 1);
    double r1 = std::sqrt(unit(rng));
    double r2 = unit(rng);
    const auto& tri = mesh.triangles[t];
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    points.push_back((1.0 - r1) * a + r1 * (1.0 - r2) * b + r1 * r2 * c);
  }
  return points;
}

std::vector<Vec3> lattice_surface_points(const TriMesh& mesh, double spacing) {
  if (!(spacing > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  std::vector<Vec3> points;
  std::set<std::array<long long, 3>> seen;
  auto add = [&](const Vec3& p) {
    const std::array<long long, 3> key{std::llround(p.x() * 1e9), std::llround(p.y() * 1e9), std::llround(p.z() * 1e9)};
    if (seen.insert(key).second) points.push_back(p);
  };
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    std::array<double, 3> edges{(b - a).norm(), (c - b).norm(), (a - c).norm()};
    std::sort(edges.begin(), edges.end());
    const int m = std::max(1, static_cast<int>(std::lround(edges[1] / spacing)));
    for (int i = 0; i <= m; ++i)
      for (int j = 0; i + j <= m; ++j) add(a + (static_cast<double>(i) / m) * (b - a) + (static_cast<double>(j) / m) * (c - a));
  }
  return points;
}

double lattice_spacing(const TriMesh& mesh, std::size_t target) {
  double area = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) area += mesh.triangle_area(t);
  return std::sqrt(area / static_cast<double>(std::max<std::size_t>(target, 1)));
}

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c,
                               int* feature) {
  // Ericson, Real-Time Collision Detection, 5.1.5
  auto set = [&](int f) {
    if (feature) *feature = f;
  };
  const Vec3 ab = b - a;
  const Vec3 ac = c - a;
  const Vec3 ap = p - a;
  const double d1 = ab.dot(ap);
  const double d2 = ac.dot(ap);
  if (d1 <= 0.0 && d2 <= 0.0) {
    set(4);
    return a;
  }
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp);
  const double d4 = ac.dot(bp);
  if (d3 >= 0.0 && d4 <= d3) {
    set(5);
    return b;
  }
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) {
    set(1);
    return a + (d1 / (d1 - d3)) * ab;
  }
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp);
  const double d6 = ac.dot(cp);
  if (d6 >= 0.0 && d5 <= d6) {
    set(6);
    return c;
  }
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) {
    set(3);
    return a + (d2 / (d2 - d6)) * ac;
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    set(2);
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  const double denom = 1.0 / (va + vb + vc);
  set(0);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

Quat rotation_between(const Vec3& from, const Vec3& to) {
  Quat q = Quat::FromTwoVectors(from, to);
  return q.normalized();
}

std::uint64_t mesh_hash(const TriMesh& mesh) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](const void* data, std::size_t bytes) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < bytes; ++i) {
      h ^= p[i];
      h *= 1099511628211ULL;
    }
  };
  for (const auto& v : mesh.vertices) mix(v.data(), sizeof(double) * 3);
  for (const auto& t : mesh.triangles) mix(t.data(), sizeof(int) * 3);
  return h;
}

}  // namespace asap
