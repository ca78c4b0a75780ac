#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "asap/assembly.hpp"

namespace asap {

inline constexpr double kDefaultDensity = 1000.0;  // kg/m³

struct ManifestPart {
  std::string id;
  std::filesystem::path mesh_path;  // as written, relative to the manifest
  double density = kDefaultDensity;
  RigidTransform assembled;
};

struct AssemblyManifest {
  std::string id;
  std::vector<ManifestPart> parts;
  nlohmann::json metadata = nlohmann::json::object();
  std::filesystem::path base_dir;  // directory of the manifest file

  std::filesystem::path resolve(const ManifestPart& p) const { return base_dir / p.mesh_path; }
  void validate() const;  // unique ids, >= 2 parts
};

nlohmann::json manifest_to_json(const AssemblyManifest& m);
AssemblyManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
AssemblyManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const AssemblyManifest& m);

/// Loads every mesh and builds parts (cell_size <= 0 picks the default).
Assembly load_assembly(const AssemblyManifest& m, double cell_size = 0.0);

}  // namespace asap
