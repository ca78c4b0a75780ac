#pragma once

#include <algorithm>
#include <array>
#include <filesystem>
#include <memory>
#include <vector>

#include "asap/geometry.hpp"

namespace asap {

/// Dense signed distance samples on a regular grid, negative inside.
/// Node (i, j, k) sits at origin + cell_size * (i, j, k); storage is row-major
/// with k fastest.
struct SdfGrid {
  Vec3 origin = Vec3::Zero();
  double cell_size = 0.0;
  std::array<int, 3> dims{0, 0, 0};
  std::vector<float> values;

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dims[1] + j) * dims[2] + k;
  }
  float at(int i, int j, int k) const { return values[index(i, j, k)]; }
  Vec3 node(int i, int j, int k) const { return origin + cell_size * Vec3(i, j, k); }
  Aabb bounds() const;

  /// Trilinear value and analytic gradient. Returns false (outputs untouched)
  /// when p lies outside the grid.
  bool sample(const Vec3& p, double& value, Vec3* gradient = nullptr) const {
    const double inv = 1.0 / cell_size;
    const double ux = (p.x() - origin.x()) * inv;
    const double uy = (p.y() - origin.y()) * inv;
    const double uz = (p.z() - origin.z()) * inv;
    if (!(ux >= 0.0 && uy >= 0.0 && uz >= 0.0)) return false;
    int i = static_cast<int>(ux);
    int j = static_cast<int>(uy);
    int k = static_cast<int>(uz);
    if (i >= dims[0] - 1 || j >= dims[1] - 1 || k >= dims[2] - 1) {
      // the far boundary face itself is still inside
      if (i > dims[0] - 1 || j > dims[1] - 1 || k > dims[2] - 1) return false;
      i = std::min(i, dims[0] - 2);
      j = std::min(j, dims[1] - 2);
      k = std::min(k, dims[2] - 2);
    }
    const double fx = ux - i, fy = uy - j, fz = uz - k;
    const std::size_t sk = 1, sj = dims[2], si = static_cast<std::size_t>(dims[1]) * dims[2];
    const std::size_t base = index(i, j, k);
    const double c000 = values[base], c001 = values[base + sk];
    const double c010 = values[base + sj], c011 = values[base + sj + sk];
    const double c100 = values[base + si], c101 = values[base + si + sk];
    const double c110 = values[base + si + sj], c111 = values[base + si + sj + sk];
    const double c00 = c000 + (c001 - c000) * fz;
    const double c01 = c010 + (c011 - c010) * fz;
    const double c10 = c100 + (c101 - c100) * fz;
    const double c11 = c110 + (c111 - c110) * fz;
    const double c0 = c00 + (c01 - c00) * fy;
    const double c1 = c10 + (c11 - c10) * fy;
    value = c0 + (c1 - c0) * fx;
    if (gradient) {
      const double gx = c1 - c0;
      const double gy = (c01 - c00) * (1.0 - fx) + (c11 - c10) * fx;
      const double dz00 = c001 - c000, dz01 = c011 - c010, dz10 = c101 - c100, dz11 = c111 - c110;
      const double gz = (dz00 * (1.0 - fy) + dz01 * fy) * (1.0 - fx) + (dz10 * (1.0 - fy) + dz11 * fy) * fx;
      *gradient = Vec3(gx, gy, gz) * inv;
    }
    return true;
  }

  /// Value anywhere: outside the grid, the value at the clamped point plus the
  /// distance to it (an upper bound on the true distance).
  double value(const Vec3& p) const;
};

/// Bounding-box diagonal / 64 clamped to [1e-3, 1e-2] m.
double default_cell_size(const TriMesh& mesh);

/// Exact point-triangle distances over a BVH, sign from angle-weighted
/// pseudo-normals. The grid pads the mesh bounds by `padding_cells` (>= 2).
SdfGrid build_sdf(const TriMesh& mesh, double cell_size, int padding_cells = 3);

/// Process-wide memo keyed by mesh content and cell size.
std::shared_ptr<const SdfGrid> cached_sdf(const TriMesh& mesh, double cell_size);

/// Binary sidecar: "ASDF", u32 version, origin 3×f64, cell f64, dims 3×u32,
/// then row-major f32 values. Little-endian.
void save_sdf(const std::filesystem::path& path, const SdfGrid& grid);
SdfGrid load_sdf(const std::filesystem::path& path);

}  // namespace asap
