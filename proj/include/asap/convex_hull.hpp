#pragma once

#include <array>
#include <stdexcept>
#include <vector>

#include "asap/geometry.hpp"

namespace asap {

class DegenerateHull : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Triangulated convex hull with outward-facing, counter-clockwise triangles.
struct ConvexHull {
  std::vector<Vec3> points;                  // hull vertices
  std::vector<std::array<int, 3>> triangles;
  std::vector<Vec3> normals;                 // unit outward per triangle
};

/// Incremental hull. Throws DegenerateHull when the input is coplanar.
ConvexHull convex_hull(const std::vector<Vec3>& input);

/// Planar hull facet: triangles whose normals agree within `angle_tol` rad.
struct HullFacet {
  Vec3 normal;
  double offset = 0.0;               // normal · x = offset on the facet plane
  std::vector<Vec3> polygon;         // convex, counter-clockwise around normal
  double area = 0.0;
};

std::vector<HullFacet> merge_facets(const ConvexHull& hull, double angle_tol = 1e-6);

}  // namespace asap
