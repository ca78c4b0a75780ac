#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "asap/disassembly_tree.hpp"
#include "asap/feasibility.hpp"
#include "asap/part_priority.hpp"
#include "asap/sequence_plan.hpp"

namespace asap {

enum class NodeSelection { dfs, beam };
enum class FailureCause { none, tree_exhausted, budget_exhausted, timeout };

std::string to_string(FailureCause cause);

struct PlannerOptions {
  NodeSelection node_selection = NodeSelection::dfs;
  int beam_width = 1;  // initial width for beam selection
  PriorityKind part_selection = PriorityKind::heuristic;
  ScoreSource* scores = nullptr;  // learned part selection
  int budget = 400;               // evaluations (part-pose attempts)
  double timeout_s = 0.0;         // <= 0: none
  FeasibilitySettings feasibility;
};

struct PlanResult {
  std::optional<SequencePlan> plan;
  FailureCause cause = FailureCause::none;
  int evaluations = 0;
  double wall_time_s = 0.0;
  DisassemblyTree tree;
  std::vector<DisassemblyStep> removals;  // disassembly path when successful

  bool success() const { return plan.has_value(); }
};

/// Disassembly tree search with physics feasibility checks.
PlanResult plan_sequence(const Assembly& assembly, const PlannerOptions& options,
                         std::shared_ptr<FeasibilityCache> cache = nullptr);

/// Deepest valid expandable node, most recent first; nullopt when none.
std::optional<PartSet> select_node_dfs(const DisassemblyTree& tree);

/// Beam selection; `width` grows by one when every admitted node is
/// exhausted but pruned nodes remain. nullopt when nothing is expandable.
std::optional<PartSet> select_node_beam(const DisassemblyTree& tree, int& width);

}  // namespace asap
