#include "asap/manifest.hpp"

#include <fstream>
#include <iomanip>
#include <set>

#include "asap/mesh_io.hpp"
#include "asap/sequence_plan.hpp"

namespace asap {

void AssemblyManifest::validate() const {
  if (parts.size() < 2) throw std::invalid_argument("manifest '" + id + "' needs at least two parts");
  std::set<std::string> seen;
  for (const auto& p : parts) {
    if (!seen.insert(p.id).second) throw std::invalid_argument("duplicate part id '" + p.id + "'");
    if (!(p.density > 0.0)) throw std::invalid_argument("part '" + p.id + "' density must be positive");
  }
}

nlohmann::json manifest_to_json(const AssemblyManifest& m) {
  nlohmann::json parts = nlohmann::json::array();
  for (const auto& p : m.parts) {
    parts.push_back({{"id", p.id},
                     {"mesh", p.mesh_path.generic_string()},
                     {"density", p.density},
                     {"transform", transform_to_json(p.assembled)}});
  }
  return {{"id", m.id}, {"parts", parts}, {"metadata", m.metadata}};
}

AssemblyManifest manifest_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir) {
  AssemblyManifest m;
  m.id = j.at("id").get<std::string>();
  m.base_dir = base_dir;
  for (const auto& p : j.at("parts")) {
    ManifestPart part;
    part.id = p.at("id").get<std::string>();
    part.mesh_path = p.at("mesh").get<std::string>();
    part.density = p.value("density", kDefaultDensity);
    if (p.contains("transform")) part.assembled = transform_from_json(p.at("transform"));
    m.parts.push_back(std::move(part));
  }
  if (j.contains("metadata")) m.metadata = j.at("metadata");
  m.validate();
  return m;
}

AssemblyManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open manifest " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
  return manifest_from_json(j, path.parent_path());
}

void save_manifest(const std::filesystem::path& path, const AssemblyManifest& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << std::setw(2) << manifest_to_json(m) << "\n";
}

Assembly load_assembly(const AssemblyManifest& m, double cell_size) {
  m.validate();
  Assembly a;
  a.id = m.id;
  for (const auto& p : m.parts) {
    TriMesh mesh = load_mesh(m.resolve(p));
    a.parts.push_back({make_part(p.id, std::move(mesh), p.density, cell_size), p.assembled});
  }
  return a;
}

}  // namespace asap
