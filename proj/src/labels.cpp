#include "asap/labels.hpp"

#include <fstream>
#include <iostream>
#include <set>

#include "asap/node_snapshot.hpp"

namespace asap {

std::vector<nlohmann::json> label_records(const Assembly& assembly, const PlanResult& result,
                                          const std::string& pointcloud_ref) {
  const auto adjacency = assembly_adjacency(assembly, 2.0 * assembly.max_cell_size());
  std::vector<nlohmann::json> out;
  for (const TreeEdge& e : result.tree.edges()) {
    if (!e.valid) continue;
    NodeSnapshot s = make_snapshot(assembly, e.parent, adjacency, pointcloud_ref);
    s.next_part = assembly.part_id(e.part);
    nlohmann::json j = snapshot_to_json(s);
    std::set<std::string> infeasible;
    for (const TreeEdge& other : result.tree.edges()) {
      if (other.parent == e.parent && !other.valid) infeasible.insert(assembly.part_id(other.part));
    }
    j["infeasible_parts"] = infeasible;
    out.push_back(std::move(j));
  }
  return out;
}

LabelStats generate_labels(const std::vector<const Assembly*>& assemblies, const LabelOptions& options,
                           const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  std::ofstream out(out_dir / "labels.jsonl");
  if (!out) throw std::runtime_error("cannot write " + (out_dir / "labels.jsonl").string());
  LabelStats stats;
  PlannerOptions planner;
  planner.node_selection = NodeSelection::beam;
  planner.beam_width = options.beam_width;
  planner.budget = options.budget;
  planner.feasibility = options.feasibility;
  for (const Assembly* a : assemblies) {
    ++stats.assemblies;
    try {
      const PlanResult result = plan_sequence(*a, planner);
      if (result.success()) ++stats.planned;
      const std::string sidecar = a->id + ".pc.bin";
      const auto records = label_records(*a, result, sidecar);
      if (records.empty()) continue;
      write_pointcloud_sidecar(out_dir / sidecar, *a);
      for (const auto& r : records) out << r.dump() << "\n";
      stats.records += static_cast<int>(records.size());
    } catch (const std::exception& e) {
      ++stats.failed;
      std::clog << "labels: skipping " << a->id << ": " << e.what() << "\n";
    }
  }
  return stats;
}

}  // namespace asap
