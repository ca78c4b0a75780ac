#include "asap/convex_hull.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace asap {

namespace {

struct Face {
  std::array<int, 3> v;
  Vec3 n;
  double d;
  bool alive = true;
};

Face make_face(const std::vector<Vec3>& p, int a, int b, int c) {
  Face f;
  f.v = {a, b, c};
  f.n = (p[b] - p[a]).cross(p[c] - p[a]);
  const double len = f.n.norm();
  if (len > 0.0) f.n /= len;
  f.d = f.n.dot(p[a]);
  return f;
}

std::vector<Vec3> unique_points(const std::vector<Vec3>& input) {
  std::vector<Vec3> pts = input;
  auto less = [](const Vec3& a, const Vec3& b) {
    return std::lexicographical_compare(a.data(), a.data() + 3, b.data(), b.data() + 3);
  };
  std::sort(pts.begin(), pts.end(), less);
  pts.erase(std::unique(pts.begin(), pts.end(), [](const Vec3& a, const Vec3& b) { return a == b; }),
            pts.end());
  return pts;
}

}  // namespace

ConvexHull convex_hull(const std::vector<Vec3>& input) {
  const std::vector<Vec3> pts = unique_points(input);
  if (pts.size() < 4) throw DegenerateHull("convex hull needs at least 4 distinct points");
  Aabb box;
  for (const auto& p : pts) box.extend(p);
  const double scale = std::max(box.diagonal(), 1e-300);
  const double eps = 1e-10 * scale;

  // initial tetrahedron from extreme points
  int i0 = 0;
  for (int i = 1; i < static_cast<int>(pts.size()); ++i) {
    if (pts[i].x() < pts[i0].x()) i0 = i;
  }
  int i1 = -1;
  double best = 0.0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const double d = (pts[i] - pts[i0]).norm();
    if (d > best) best = d, i1 = i;
  }
  if (i1 < 0 || best <= eps) throw DegenerateHull("all points coincide");
  const Vec3 axis = (pts[i1] - pts[i0]).normalized();
  int i2 = -1;
  best = 0.0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const double d = (pts[i] - pts[i0]).cross(axis).norm();
    if (d > best) best = d, i2 = i;
  }
  if (i2 < 0 || best <= eps) throw DegenerateHull("points are collinear");
  const Vec3 pn = (pts[i1] - pts[i0]).cross(pts[i2] - pts[i0]).normalized();
  int i3 = -1;
  best = 0.0;
  for (int i = 0; i < static_cast<int>(pts.size()); ++i) {
    const double d = std::abs((pts[i] - pts[i0]).dot(pn));
    if (d > best) best = d, i3 = i;
  }
  if (i3 < 0 || best <= eps) throw DegenerateHull("points are coplanar");

  const Vec3 interior = 0.25 * (pts[i0] + pts[i1] + pts[i2] + pts[i3]);
  std::vector<Face> faces;
  auto add_oriented = [&](int a, int b, int c) {
    Face f = make_face(pts, a, b, c);
    if (f.n.dot(interior) - f.d > 0.0) f = make_face(pts, a, c, b);
    faces.push_back(f);
  };
  add_oriented(i0, i1, i2);
  add_oriented(i0, i1, i3);
  add_oriented(i0, i2, i3);
  add_oriented(i1, i2, i3);

  std::vector<int> visible;
  std::set<std::pair<int, int>> edges;
  for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    visible.clear();
    for (int f = 0; f < static_cast<int>(faces.size()); ++f) {
      if (faces[f].alive && faces[f].n.dot(pts[p]) - faces[f].d > eps) visible.push_back(f);
    }
    if (visible.empty()) continue;
    edges.clear();
    for (int f : visible) {
      const auto& v = faces[f].v;
      for (int e = 0; e < 3; ++e) edges.insert({v[e], v[(e + 1) % 3]});
      faces[f].alive = false;
    }
    for (const auto& [a, b] : edges) {
      if (edges.count({b, a})) continue;
      faces.push_back(make_face(pts, a, b, p));
    }
  }

  ConvexHull hull;
  std::map<int, int> remap;
  for (const Face& f : faces) {
    if (!f.alive) continue;
    std::array<int, 3> tri;
    for (int e = 0; e < 3; ++e) {
      auto [it, inserted] = remap.emplace(f.v[e], static_cast<int>(hull.points.size()));
      if (inserted) hull.points.push_back(pts[f.v[e]]);
      tri[e] = it->second;
    }
    hull.triangles.push_back(tri);
    hull.normals.push_back(f.n);
  }
  return hull;
}

std::vector<HullFacet> merge_facets(const ConvexHull& hull, double angle_tol) {
  const double cos_tol = std::cos(angle_tol);
  std::vector<HullFacet> facets;
  std::vector<std::vector<int>> members;
  for (int t = 0; t < static_cast<int>(hull.triangles.size()); ++t) {
    const Vec3& n = hull.normals[t];
    int found = -1;
    for (int f = 0; f < static_cast<int>(facets.size()); ++f) {
      if (facets[f].normal.dot(n) >= cos_tol) {
        found = f;
        break;
      }
    }
    if (found < 0) {
      found = static_cast<int>(facets.size());
      facets.push_back({n, 0.0, {}, 0.0});
      members.emplace_back();
    }
    members[found].push_back(t);
  }

  for (std::size_t f = 0; f < facets.size(); ++f) {
    HullFacet& facet = facets[f];
    Vec3 n = Vec3::Zero();
    double area_sum = 0.0;
    for (int t : members[f]) {
      const auto& tri = hull.triangles[t];
      const Vec3 c = (hull.points[tri[1]] - hull.points[tri[0]]).cross(hull.points[tri[2]] - hull.points[tri[0]]);
      n += c;
      area_sum += c.norm();
    }
    facet.normal = n.norm() > 0.0 ? Vec3(n.normalized()) : facet.normal;
    const Vec3 u = facet.normal.unitOrthogonal();
    const Vec3 w = facet.normal.cross(u);

    std::vector<Vec3> verts;
    double offset = 0.0;
    for (int t : members[f]) {
      for (int v : hull.triangles[t]) verts.push_back(hull.points[v]);
    }
    for (const auto& v : verts) offset += facet.normal.dot(v);
    facet.offset = offset / static_cast<double>(verts.size());

    // 2D monotone chain in the (u, w) basis
    std::vector<std::pair<Eigen::Vector2d, Vec3>> pts2;
    for (const auto& v : verts) pts2.push_back({{u.dot(v), w.dot(v)}, v});
    std::sort(pts2.begin(), pts2.end(), [](const auto& a, const auto& b) {
      return a.first.x() < b.first.x() || (a.first.x() == b.first.x() && a.first.y() < b.first.y());
    });
    auto cross2 = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
      return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
    };
    std::vector<std::pair<Eigen::Vector2d, Vec3>> chain(2 * pts2.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts2.size(); ++i) {
      while (k >= 2 && cross2(chain[k - 2].first, chain[k - 1].first, pts2[i].first) <= 0.0) --k;
      chain[k++] = pts2[i];
    }
    for (std::size_t i = pts2.size() - 1, t = k + 1; i > 0; --i) {
      while (k >= t && cross2(chain[k - 2].first, chain[k - 1].first, pts2[i - 1].first) <= 0.0) --k;
      chain[k++] = pts2[i - 1];
    }
    chain.resize(k > 1 ? k - 1 : k);
    for (const auto& c : chain) facet.polygon.push_back(c.second);
    facet.area = 0.5 * area_sum;
  }
  return facets;
}

}  // namespace asap
