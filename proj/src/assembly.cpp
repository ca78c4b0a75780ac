#include "asap/assembly.hpp"

#include <algorithm>
#include <stdexcept>

namespace asap {

std::size_t Assembly::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i].geometry->id == id) return i;
  }
  throw std::out_of_range("assembly '" + this->id + "' has no part '" + id + "'");
}

Aabb Assembly::bounds() const { return subset_bounds(*this, PartSet::full(parts.size())); }

double Assembly::max_cell_size() const {
  double cell = 0.0;
  for (const auto& p : parts) cell = std::max(cell, p.geometry->cell_size());
  return cell;
}

PartSet PartSet::full(std::size_t n) {
  if (n > static_cast<std::size_t>(kCapacity)) throw std::invalid_argument("too many parts");
  PartSet s;
  for (std::size_t i = 0; i < n; ++i) s = s.with(static_cast<int>(i));
  return s;
}

PartSet PartSet::of(std::initializer_list<int> indices) {
  PartSet s;
  for (int i : indices) s = s.with(i);
  return s;
}

std::vector<int> PartSet::indices() const {
  std::vector<int> out;
  for (int w = 0; w < 4; ++w) {
    std::uint64_t bits = words_[w];
    while (bits) {
      const int b = std::countr_zero(bits);
      out.push_back(w * 64 + b);
      bits &= bits - 1;
    }
  }
  return out;
}

std::string PartSet::key(const Assembly& assembly) const {
  std::vector<std::string> ids;
  for (int i : indices()) ids.push_back(assembly.part_id(i));
  std::sort(ids.begin(), ids.end());
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += ids[i];
  }
  return out;
}

std::vector<PlacedPart> place(const Assembly& assembly, const PartSet& subset,
                              const RigidTransform& placement) {
  std::vector<PlacedPart> out;
  for (int i : subset.indices()) {
    out.push_back({assembly.parts[i].geometry, placement * assembly.parts[i].assembled});
  }
  return out;
}

std::vector<Vec3> assembled_vertices(const Assembly& assembly, const PartSet& subset) {
  std::vector<Vec3> out;
  for (int i : subset.indices()) {
    const auto& p = assembly.parts[i];
    for (const Vec3& v : p.geometry->mesh.vertices) out.push_back(p.assembled.apply(v));
  }
  return out;
}

Vec3 combined_center_of_mass(const Assembly& assembly, const PartSet& subset) {
  Vec3 sum = Vec3::Zero();
  double mass = 0.0;
  for (int i : subset.indices()) {
    const auto& p = assembly.parts[i];
    sum += p.geometry->mass * p.assembled.apply(p.geometry->center_of_mass);
    mass += p.geometry->mass;
  }
  return mass > 0.0 ? Vec3(sum / mass) : Vec3::Zero();
}

Aabb subset_bounds(const Assembly& assembly, const PartSet& subset) {
  Aabb box;
  for (int i : subset.indices()) {
    const auto& p = assembly.parts[i];
    box.extend(p.geometry->bounds.transformed(p.assembled));
  }
  return box;
}

}  // namespace asap
