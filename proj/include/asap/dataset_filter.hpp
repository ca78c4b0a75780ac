#pragma once

#include <optional>
#include <string>
#include <vector>

#include "asap/feasibility.hpp"
#include "asap/generator.hpp"
#include "asap/manifest.hpp"

namespace asap {

struct FilterOptions {
  double intersection_factor = 5.0;  // threshold = factor × cell size of the pair
  int pose_k = kDefaultPoseCount;
  int max_held = 2;
  int sim_steps = 200;
  SimConfig sim;
};

struct FilterResult {
  bool accepted = false;
  std::string reason;                     // empty when accepted
  std::vector<std::string> removed_parts;  // intersecting parts that were dropped
  std::optional<Assembly> assembly;       // surviving parts when accepted
};

/// Loads the manifest meshes; any non-watertight mesh rejects. Load failures
/// throw.
FilterResult filter_assembly(const AssemblyManifest& manifest, const FilterOptions& options = {});
FilterResult filter_assembly(const GeneratedAssembly& generated, const FilterOptions& options = {});

/// Intersection removal (higher index goes), then the stability pre-screen:
/// some top-k pose of the whole assembly must be stable with up to M holds.
FilterResult filter_assembly(Assembly assembly, const FilterOptions& options = {});

/// `count` filter-accepted generated assemblies cycling through the families,
/// sizes spread over [min_parts, max_parts]. Deterministic in `seed`.
std::vector<Assembly> generated_suite(int count, int min_parts, int max_parts, std::uint64_t seed,
                                      const std::vector<Family>& families = all_families(),
                                      const FilterOptions& options = {});

}  // namespace asap
