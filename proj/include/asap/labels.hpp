#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "asap/sequence_planner.hpp"

namespace asap {

struct LabelOptions {
  int budget = 100;   // per assembly
  int beam_width = 1;
  FeasibilitySettings feasibility;
};

struct LabelStats {
  int assemblies = 0;
  int planned = 0;  // runs that reached a complete sequence
  int failed = 0;   // runs that threw; skipped
  int records = 0;
};

/// One record per valid edge of the tree: the parent node's snapshot with
/// `next_part` set to the removed part. `infeasible_parts` lists the parts
/// whose removal from that node was tried and failed.
std::vector<nlohmann::json> label_records(const Assembly& assembly, const PlanResult& result,
                                          const std::string& pointcloud_ref);

/// Beam-search planning per assembly; writes `<out>/labels.jsonl` and one
/// `<out>/<assembly id>.pc.bin` point-cloud sidecar per assembly.
LabelStats generate_labels(const std::vector<const Assembly*>& assemblies, const LabelOptions& options,
                           const std::filesystem::path& out_dir);

}  // namespace asap
