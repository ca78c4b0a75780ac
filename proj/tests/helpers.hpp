#pragma once

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "asap/assembly.hpp"
#include "asap/generator.hpp"
#include "asap/part.hpp"

namespace asap::test {

struct BoxSpec {
  std::string id;
  Vec3 size = Vec3::Ones();
  Vec3 center = Vec3::Zero();
  double density = 1000.0;
};

/// Parts meshed around their own origin and placed by translation.
inline Assembly boxes(const std::string& id, const std::vector<BoxSpec>& specs) {
  Assembly a;
  a.id = id;
  for (const auto& s : specs) {
    a.parts.push_back({make_part(s.id, box_mesh(s.size), s.density), RigidTransform::from_translation(s.center)});
  }
  return a;
}

/// Unit cubes stacked from z = 0 upward, ids "cube-0" (bottom) upward.
inline Assembly cube_stack(int n) {
  std::vector<BoxSpec> specs;
  for (int i = 0; i < n; ++i) specs.push_back({"cube-" + std::to_string(i), Vec3::Ones(), Vec3(0, 0, 0.5 + i)});
  return boxes("stack-" + std::to_string(n), specs);
}

/// Icosphere of the given radius, subdivided `levels` times.
inline TriMesh icosphere(double radius, int levels) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  TriMesh m;
  m.vertices = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  m.triangles = {{0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                 {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
                 {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (auto& v : m.vertices) v.normalize();
  for (int l = 0; l < levels; ++l) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto [it, inserted] = mid.try_emplace({key.first, key.second}, static_cast<int>(m.vertices.size()));
      if (inserted) m.vertices.push_back((m.vertices[a] + m.vertices[b]).normalized());
      return it->second;
    };
    std::vector<std::array<int, 3>> next;
    for (const auto& f : m.triangles) {
      const int ab = midpoint(f[0], f[1]), bc = midpoint(f[1], f[2]), ca = midpoint(f[2], f[0]);
      next.push_back({f[0], ab, ca});
      next.push_back({f[1], bc, ab});
      next.push_back({f[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    m.triangles = std::move(next);
  }
  for (auto& v : m.vertices) v *= radius;
  validate_mesh(m);
  return m;
}

}  // namespace asap::test
