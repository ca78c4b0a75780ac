#pragma once

#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "asap/assembly.hpp"
#include "asap/path_planner.hpp"
#include "asap/stability.hpp"
#include "asap/stable_pose.hpp"

namespace asap {

struct TreeEdge {
  PartSet parent;
  PartSet child;
  int part = -1;  // removed part index
  bool valid = false;
  StablePose pose;
  MotionPlan motion;  // disassembly direction
  HoldPlan hold;      // holds for the child at `pose`
  int attempts = 0;   // pose attempts spent on this edge
};

struct TreeNode {
  PartSet key;
  bool valid = false;
  int depth = 0;           // parts removed from the root
  int order = 0;           // insertion index
  int edge_count = 0;      // outgoing edges, valid or not
  int failed_edges = 0;
  int parent_edge = -1;    // edge that first reached this node validly
};

/// Subset DAG over canonical part sets with valid and invalid node/edge bookkeeping.
class DisassemblyTree {
 public:
  explicit DisassemblyTree(PartSet root);

  const PartSet& root() const { return root_; }
  bool has_node(const PartSet& key) const { return index_.count(key) > 0; }
  bool has_edge(const PartSet& parent, const PartSet& child) const {
    return edge_index_.count({parent, child}) > 0;
  }
  /// Adds the node or, when `valid`, upgrades an existing invalid one.
  TreeNode& add_node(const PartSet& key, bool valid);
  int add_edge(TreeEdge edge);

  TreeNode& node(const PartSet& key) { return nodes_.at(index_.at(key)); }
  const TreeNode& node(const PartSet& key) const { return nodes_.at(index_.at(key)); }
  const TreeEdge& edge(int i) const { return edges_.at(i); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const std::vector<TreeEdge>& edges() const { return edges_; }

  /// Node can still try a removal: valid, at least two parts, and some part
  /// without an outgoing edge.
  bool expandable(const TreeNode& n) const {
    return n.valid && n.key.count() >= 2 && n.edge_count < n.key.count();
  }

  /// Valid edges from the root to `leaf` following first-reaching edges.
  std::vector<const TreeEdge*> find_path(const PartSet& leaf) const;

 private:
  PartSet root_;
  std::vector<TreeNode> nodes_;
  std::unordered_map<PartSet, int, PartSetHash> index_;
  std::vector<TreeEdge> edges_;
  std::map<std::pair<PartSet, PartSet>, int> edge_index_;
};

}  // namespace asap
