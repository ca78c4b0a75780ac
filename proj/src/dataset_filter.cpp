#include "asap/dataset_filter.hpp"

#include "asap/mesh_io.hpp"

namespace asap {

namespace {

FilterResult rejected(std::string reason, std::vector<std::string> removed = {}) {
  FilterResult r;
  r.reason = std::move(reason);
  r.removed_parts = std::move(removed);
  return r;
}

}  // namespace

FilterResult filter_assembly(const AssemblyManifest& manifest, const FilterOptions& options) {
  manifest.validate();
  Assembly a;
  a.id = manifest.id;
  for (const auto& p : manifest.parts) {
    TriMesh mesh = load_mesh(manifest.resolve(p));
    if (!mesh.watertight) return rejected("non-watertight: part '" + p.id + "'");
    a.parts.push_back({make_part(p.id, std::move(mesh), p.density), p.assembled});
  }
  return filter_assembly(std::move(a), options);
}

FilterResult filter_assembly(const GeneratedAssembly& generated, const FilterOptions& options) {
  for (std::size_t i = 0; i < generated.meshes.size(); ++i) {
    if (!generated.meshes[i].watertight) {
      return rejected("non-watertight: part '" + generated.manifest.parts[i].id + "'");
    }
  }
  return filter_assembly(to_assembly(generated), options);
}

FilterResult filter_assembly(Assembly assembly, const FilterOptions& options) {
  for (const auto& p : assembly.parts) {
    if (!p.geometry->mesh.watertight) return rejected("non-watertight: part '" + p.geometry->id + "'");
  }
  const std::size_t n = assembly.size();
  std::vector<char> removed(n, 0);
  std::vector<std::string> removed_ids;
  for (std::size_t i = 0; i < n; ++i) {
    if (removed[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (removed[j]) continue;
      const auto& a = assembly.parts[i];
      const auto& b = assembly.parts[j];
      const double threshold =
          options.intersection_factor * std::max(a.geometry->cell_size(), b.geometry->cell_size());
      if (max_penetration(*a.geometry, a.assembled, *b.geometry, b.assembled) > threshold) {
        removed[j] = 1;
        removed_ids.push_back(b.geometry->id);
      }
    }
  }
  Assembly kept;
  kept.id = assembly.id;
  for (std::size_t i = 0; i < n; ++i) {
    if (!removed[i]) kept.parts.push_back(assembly.parts[i]);
  }
  if (kept.size() < 2) return rejected("fewer than two parts after intersection removal", removed_ids);

  FeasibilitySettings settings;
  settings.max_held = options.max_held;
  settings.pose_k = options.pose_k;
  settings.sim_steps = options.sim_steps;
  settings.sim = options.sim;
  const FeasibilityChecker checker(kept, settings);
  const PartSet all = PartSet::full(kept.size());
  std::vector<StablePose> poses;
  try {
    poses = enumerate_stable_poses(kept, all, options.pose_k);
  } catch (const DegenerateHull&) {
    return rejected("degenerate convex hull", removed_ids);
  }
  bool stable = false;
  for (const StablePose& pose : poses) {
    if (checker.stability(all, pose.transform, options.max_held).stable) {
      stable = true;
      break;
    }
  }
  if (!stable) return rejected("unstable under all top-k poses", removed_ids);

  FilterResult r;
  r.accepted = true;
  r.removed_parts = std::move(removed_ids);
  r.assembly = std::move(kept);
  return r;
}

std::vector<Assembly> generated_suite(int count, int min_parts, int max_parts, std::uint64_t seed,
                                      const std::vector<Family>& families, const FilterOptions& options) {
  if (count < 1 || min_parts < 2 || max_parts < min_parts || families.empty()) {
    throw std::invalid_argument("invalid suite request");
  }
  std::vector<Assembly> out;
  const int span = max_parts - min_parts;
  int attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (attempts > 50 * count) throw std::runtime_error("suite generation rejected too many assemblies");
    // Sizes rise evenly over the slots; families cycle, so each family
    // covers the whole size range.
    const int slot = static_cast<int>(out.size());
    const Family family = families[slot % families.size()];
    const int n = count == 1 ? min_parts : min_parts + (slot * span * 2 + count - 1) / (2 * (count - 1));
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempts++);
    GeneratedAssembly g;
    try {
      g = generate_assembly(family, n, s);
    } catch (const std::invalid_argument&) {
      continue;
    }
    FilterResult r = filter_assembly(g, options);
    if (r.accepted && r.removed_parts.empty()) out.push_back(std::move(*r.assembly));
  }
  return out;
}

}  // namespace asap
