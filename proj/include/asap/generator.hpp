#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "asap/manifest.hpp"

namespace asap {

/// Closed surface of a union of unit voxels scaled by `voxel` and shifted
/// by `origin`. Shared corners are welded; voxels must not meet only along
/// an edge or a corner.
TriMesh voxel_mesh(const std::set<std::array<int, 3>>& voxels, double voxel, const Vec3& origin = Vec3::Zero());

/// Axis-aligned box centered at the origin.
TriMesh box_mesh(const Vec3& size);

enum class Family { stack, wall, peg_board, ring, random_lego };

Family family_from_string(const std::string& name);
std::string to_string(Family f);
const std::vector<Family>& all_families();

/// A procedurally built assembly: manifest plus its meshes (parallel to
/// manifest.parts). Mesh paths in the manifest are
/// `<assembly id>/<part id>.obj`.
struct GeneratedAssembly {
  AssemblyManifest manifest;
  std::vector<TriMesh> meshes;
};

/// Deterministic for (family, n_parts, seed). Throws std::invalid_argument for
/// unsupported sizes.
GeneratedAssembly generate_assembly(Family family, int n_parts, std::uint64_t seed);

/// Writes meshes and `<dir>/<id>.json`; returns the manifest path.
std::filesystem::path write_generated(const GeneratedAssembly& g, const std::filesystem::path& dir);

/// Builds parts directly from the in-memory meshes.
Assembly to_assembly(const GeneratedAssembly& g, double cell_size = 0.0);

}  // namespace asap
