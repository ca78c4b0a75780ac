#include "asap/sequence_planner.hpp"

#include <algorithm>
#include <chrono>
#include <map>

namespace asap {

std::string to_string(FailureCause cause) {
  switch (cause) {
    case FailureCause::none: return "none";
    case FailureCause::tree_exhausted: return "tree-exhausted";
    case FailureCause::budget_exhausted: return "budget-exhausted";
    case FailureCause::timeout: return "timeout";
  }
  return "unknown";
}

std::optional<PartSet> select_node_dfs(const DisassemblyTree& tree) {
  const TreeNode* best = nullptr;
  for (const TreeNode& n : tree.nodes()) {
    if (!tree.expandable(n)) continue;
    if (!best || n.depth > best->depth || (n.depth == best->depth && n.order > best->order)) best = &n;
  }
  if (!best) return std::nullopt;
  return best->key;
}

std::optional<PartSet> select_node_beam(const DisassemblyTree& tree, int& width) {
  std::map<int, std::vector<const TreeNode*>> levels;
  bool any_expandable = false;
  for (const TreeNode& n : tree.nodes()) {
    if (!n.valid) continue;
    levels[n.depth].push_back(&n);
    any_expandable = any_expandable || tree.expandable(n);
  }
  if (!any_expandable) return std::nullopt;
  for (auto& [depth, nodes] : levels) {
    std::stable_sort(nodes.begin(), nodes.end(), [](const TreeNode* a, const TreeNode* b) {
      if (a->failed_edges != b->failed_edges) return a->failed_edges < b->failed_edges;
      return a->order < b->order;
    });
  }
  width = std::max(width, 1);
  while (true) {
    for (const auto& [depth, nodes] : levels) {
      auto next = levels.find(depth + 1);
      const std::size_t next_count = next == levels.end() ? 0 : next->second.size();
      if (next_count >= static_cast<std::size_t>(width)) continue;
      const std::size_t limit = std::min(nodes.size(), static_cast<std::size_t>(width));
      for (std::size_t i = 0; i < limit; ++i) {
        if (tree.expandable(*nodes[i])) return nodes[i]->key;
      }
    }
    ++width;
  }
}

PlanResult plan_sequence(const Assembly& assembly, const PlannerOptions& options,
                         std::shared_ptr<FeasibilityCache> cache) {
  if (assembly.size() < 2) throw std::invalid_argument("planning needs at least two parts");
  if (options.budget < 1) throw std::invalid_argument("evaluation budget must be >= 1");
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  const PartSet root = PartSet::full(assembly.size());
  PlanResult result{std::nullopt, FailureCause::none, 0, 0.0, DisassemblyTree(root), {}};
  DisassemblyTree& tree = result.tree;
  const FeasibilityChecker checker(assembly, options.feasibility, std::move(cache));
  EvaluationBudget budget(options.budget);
  int width = options.beam_width;

  std::vector<std::pair<int, int>> adjacency;
  if (options.part_selection == PriorityKind::learned) {
    adjacency = assembly_adjacency(assembly, 2.0 * assembly.max_cell_size());
  }

  auto finish = [&](FailureCause cause) {
    result.cause = cause;
    result.evaluations = budget.used();
    result.wall_time_s = elapsed();
    return std::move(result);
  };
  auto timed_out = [&] { return options.timeout_s > 0.0 && elapsed() > options.timeout_s; };

  while (true) {
    if (budget.exhausted()) return finish(FailureCause::budget_exhausted);
    if (timed_out()) return finish(FailureCause::timeout);
    const std::optional<PartSet> selected =
        options.node_selection == NodeSelection::dfs ? select_node_dfs(tree) : select_node_beam(tree, width);
    if (!selected) return finish(FailureCause::tree_exhausted);
    const PartSet node = *selected;

    const PartPriority priority = options.part_selection == PriorityKind::learned
                                      ? part_priority_learned(assembly, node, options.scores, adjacency)
                                      : part_priority_heuristic(assembly, node);
    for (int part : priority.order) {
      const PartSet child = node.without(part);
      if (tree.has_edge(node, child)) continue;

      std::optional<StablePose> parent_pose;
      if (const int pe = tree.node(node).parent_edge; pe >= 0) parent_pose = tree.edge(pe).pose;
      std::vector<StablePose> poses;
      try {
        poses = checker.poses(node, parent_pose);
      } catch (const DegenerateHull&) {
      }

      TreeEdge edge;
      edge.parent = node;
      edge.child = child;
      edge.part = part;
      bool interrupted = false;
      for (const StablePose& pose : poses) {
        if (budget.exhausted() || timed_out()) {
          interrupted = true;
          break;
        }
        budget.consume();
        ++edge.attempts;
        AttemptResult attempt = checker.attempt(node, part, pose);
        if (attempt.feasible()) {
          edge.valid = true;
          edge.pose = pose;
          edge.motion = std::move(*attempt.motion);
          edge.hold = std::move(attempt.hold);
          break;
        }
      }
      if (interrupted && !edge.valid) {
        return finish(budget.exhausted() ? FailureCause::budget_exhausted : FailureCause::timeout);
      }
      if (!edge.valid) {
        tree.add_node(child, false);
        tree.add_edge(std::move(edge));
      } else {
        tree.add_edge(std::move(edge));
        if (child.count() == 1) {
          for (const TreeEdge* e : tree.find_path(child)) {
            result.removals.push_back({e->part, e->pose, e->motion, e->hold});
          }
          SequencePlan plan = build_sequence_plan(assembly, result.removals);
          plan.method = options.part_selection == PriorityKind::learned ? "asap-learned" : "asap-heuristic";
          plan.evaluations = budget.used();
          plan.wall_time_s = elapsed();
          result.plan = std::move(plan);
          return finish(FailureCause::none);
        }
      }
      break;
    }
  }
}

}  // namespace asap
