#include "asap/node_snapshot.hpp"

#include <fstream>
#include <map>

namespace asap {

std::vector<std::pair<int, int>> assembly_adjacency(const Assembly& assembly, double threshold) {
  std::vector<std::pair<int, int>> out;
  const int n = static_cast<int>(assembly.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& a = assembly.parts[i];
      const auto& b = assembly.parts[j];
      if (min_separation(*a.geometry, a.assembled, *b.geometry, b.assembled, 2.0 * threshold) <= threshold) {
        out.push_back({i, j});
      }
    }
  }
  return out;
}

NodeSnapshot make_snapshot(const Assembly& assembly, const PartSet& node,
                           const std::vector<std::pair<int, int>>& full_adjacency,
                           const std::string& pointcloud_ref) {
  NodeSnapshot s;
  s.assembly_id = assembly.id;
  s.node_key = node.key(assembly);
  s.part_indices = node.indices();
  std::map<int, int> local;
  for (int i : s.part_indices) {
    local[i] = static_cast<int>(s.parts.size());
    s.parts.push_back(assembly.part_id(i));
  }
  const Vec3 center = subset_bounds(assembly, node).center();
  s.degree.assign(s.parts.size(), 0);
  for (int i : s.part_indices) {
    const auto& p = assembly.parts[i];
    s.volume.push_back(p.geometry->volume);
    s.distance_to_center.push_back((p.assembled.apply(p.geometry->center_of_mass) - center).norm());
  }
  for (const auto& [a, b] : full_adjacency) {
    if (!node.contains(a) || !node.contains(b)) continue;
    s.adjacency.push_back({local[a], local[b]});
    ++s.degree[local[a]];
    ++s.degree[local[b]];
  }
  s.pointcloud_ref = pointcloud_ref;
  s.split = split_for(assembly.id);
  return s;
}

nlohmann::json snapshot_to_json(const NodeSnapshot& s) {
  nlohmann::json adj = nlohmann::json::array();
  for (const auto& [a, b] : s.adjacency) adj.push_back({a, b});
  nlohmann::json j = {
      {"assembly_id", s.assembly_id},
      {"node_key", s.node_key},
      {"parts", s.parts},
      {"adjacency", adj},
      {"features", {{"volume", s.volume}, {"distance_to_center", s.distance_to_center}, {"degree", s.degree}}},
      {"pointcloud_ref", s.pointcloud_ref},
      {"pointcloud_index", s.part_indices},
      {"split", s.split},
  };
  j["next_part"] = s.next_part ? nlohmann::json(*s.next_part) : nlohmann::json(nullptr);
  return j;
}

NodeSnapshot snapshot_from_json(const nlohmann::json& j) {
  NodeSnapshot s;
  s.assembly_id = j.at("assembly_id").get<std::string>();
  s.node_key = j.value("node_key", std::string{});
  s.parts = j.at("parts").get<std::vector<std::string>>();
  for (const auto& e : j.value("adjacency", nlohmann::json::array())) {
    s.adjacency.push_back({e.at(0).get<int>(), e.at(1).get<int>()});
  }
  if (j.contains("features")) {
    const auto& f = j.at("features");
    s.volume = f.value("volume", std::vector<double>{});
    s.distance_to_center = f.value("distance_to_center", std::vector<double>{});
    s.degree = f.value("degree", std::vector<int>{});
  }
  s.pointcloud_ref = j.value("pointcloud_ref", std::string{});
  s.part_indices = j.value("pointcloud_index", std::vector<int>{});
  s.split = j.value("split", std::string{});
  if (j.contains("next_part") && !j.at("next_part").is_null()) s.next_part = j.at("next_part").get<std::string>();
  return s;
}

std::string split_for(const std::string& assembly_id) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : assembly_id) h = (h ^ c) * 1099511628211ULL;
  return h % 10 == 0 ? "test" : "train";
}

void write_pointcloud_sidecar(const std::filesystem::path& path, const Assembly& assembly) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& p : assembly.parts) {
    if (p.geometry->surface_points.size() != kSurfaceSampleCount) {
      throw std::logic_error("part '" + p.geometry->id + "' lacks surface samples");
    }
    for (const Vec3& v : p.geometry->surface_points) {
      const Vec3 w = p.assembled.apply(v);
      const float xyz[3] = {static_cast<float>(w.x()), static_cast<float>(w.y()), static_cast<float>(w.z())};
      out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
    }
  }
}

std::vector<std::vector<Vec3>> read_pointcloud_sidecar(const std::filesystem::path& path,
                                                       std::size_t n_parts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::vector<std::vector<Vec3>> out(n_parts);
  for (auto& cloud : out) {
    cloud.resize(kSurfaceSampleCount);
    for (auto& v : cloud) {
      float xyz[3];
      in.read(reinterpret_cast<char*>(xyz), sizeof(xyz));
      if (!in) throw std::runtime_error("truncated point-cloud sidecar " + path.string());
      v = Vec3(xyz[0], xyz[1], xyz[2]);
    }
  }
  return out;
}

}  // namespace asap
