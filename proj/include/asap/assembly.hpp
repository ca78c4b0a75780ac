#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "asap/part.hpp"

namespace asap {

struct AssemblyPart {
  PartPtr geometry;
  RigidTransform assembled;  // mesh frame -> assembled frame
};

/// Parts in a shared assembled frame. Part order is the canonical index order.
struct Assembly {
  std::string id;
  std::vector<AssemblyPart> parts;

  std::size_t size() const { return parts.size(); }
  const std::string& part_id(std::size_t i) const { return parts[i].geometry->id; }
  std::size_t index_of(const std::string& id) const;  // throws std::out_of_range
  Aabb bounds() const;
  double diagonal() const { return bounds().diagonal(); }
  double max_cell_size() const;
};

/// Subset of assembly part indices (up to 256 parts).
class PartSet {
 public:
  static constexpr int kCapacity = 256;

  PartSet() = default;
  static PartSet full(std::size_t n);
  static PartSet of(std::initializer_list<int> indices);

  bool contains(int i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  PartSet with(int i) const {
    PartSet s = *this;
    s.words_[i >> 6] |= std::uint64_t{1} << (i & 63);
    return s;
  }
  PartSet without(int i) const {
    PartSet s = *this;
    s.words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    return s;
  }
  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }
  bool empty() const { return count() == 0; }
  std::vector<int> indices() const;

  /// Sorted part ids joined with ','.
  std::string key(const Assembly& assembly) const;

  const std::array<std::uint64_t, 4>& words() const { return words_; }
  friend bool operator==(const PartSet&, const PartSet&) = default;
  friend auto operator<=>(const PartSet&, const PartSet&) = default;

 private:
  std::array<std::uint64_t, 4> words_{};
};

struct PartSetHash {
  std::size_t operator()(const PartSet& s) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto w : s.words()) h = (h ^ w) * 1099511628211ULL;
    return static_cast<std::size_t>(h);
  }
};

/// A part positioned in the world.
struct PlacedPart {
  PartPtr geometry;
  RigidTransform pose;  // mesh frame -> world
};

/// Parts of `subset` placed by `placement` (assembled frame -> world).
std::vector<PlacedPart> place(const Assembly& assembly, const PartSet& subset,
                              const RigidTransform& placement);

/// All mesh vertices of `subset` in the assembled frame.
std::vector<Vec3> assembled_vertices(const Assembly& assembly, const PartSet& subset);

/// Combined center of mass of `subset` in the assembled frame.
Vec3 combined_center_of_mass(const Assembly& assembly, const PartSet& subset);

/// Bounding box of `subset` in the assembled frame.
Aabb subset_bounds(const Assembly& assembly, const PartSet& subset);

}  // namespace asap
