#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asap/assembly.hpp"

namespace asap {

/// Parts of the full assembly whose surfaces come within `threshold` of each
/// other in the assembled frame. Pairs (i, j) with i < j.
std::vector<std::pair<int, int>> assembly_adjacency(const Assembly& assembly, double threshold);

/// One node of the disassembly tree in the label / scoring wire format.
struct NodeSnapshot {
  std::string assembly_id;
  std::string node_key;
  std::vector<std::string> parts;
  std::vector<int> part_indices;                    // manifest order indices
  std::vector<std::pair<int, int>> adjacency;       // local indices into `parts`
  std::vector<double> volume;
  std::vector<double> distance_to_center;
  std::vector<int> degree;
  std::string pointcloud_ref;                       // sidecar file name
  std::optional<std::string> next_part;
  std::string split;                                // "train" or "test"
};

/// Builds a snapshot; `full_adjacency` comes from assembly_adjacency.
NodeSnapshot make_snapshot(const Assembly& assembly, const PartSet& node,
                           const std::vector<std::pair<int, int>>& full_adjacency,
                           const std::string& pointcloud_ref = {});

nlohmann::json snapshot_to_json(const NodeSnapshot& s);
NodeSnapshot snapshot_from_json(const nlohmann::json& j);

/// FNV-1a of the id, modulo 10; bucket 0 is held out.
std::string split_for(const std::string& assembly_id);

/// Raw little-endian float32 [n_parts][1000][3] surface samples in the
/// assembled frame, manifest order.
void write_pointcloud_sidecar(const std::filesystem::path& path, const Assembly& assembly);
std::vector<std::vector<Vec3>> read_pointcloud_sidecar(const std::filesystem::path& path,
                                                       std::size_t n_parts);

}  // namespace asap
