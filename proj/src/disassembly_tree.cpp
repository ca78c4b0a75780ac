#include "asap/disassembly_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace asap {

DisassemblyTree::DisassemblyTree(PartSet root) : root_(root) { add_node(root, true); }

TreeNode& DisassemblyTree::add_node(const PartSet& key, bool valid) {
  auto it = index_.find(key);
  if (it != index_.end()) {
    TreeNode& n = nodes_[it->second];
    if (valid) n.valid = true;
    return n;
  }
  TreeNode n;
  n.key = key;
  n.valid = valid;
  n.depth = root_.count() - key.count();
  n.order = static_cast<int>(nodes_.size());
  index_.emplace(key, n.order);
  nodes_.push_back(n);
  return nodes_.back();
}

int DisassemblyTree::add_edge(TreeEdge edge) {
  if (edge.parent.without(edge.part) != edge.child || !edge.parent.contains(edge.part)) {
    throw std::invalid_argument("tree edge must remove exactly one part");
  }
  if (has_edge(edge.parent, edge.child)) throw std::logic_error("duplicate tree edge");
  TreeNode& parent = node(edge.parent);
  ++parent.edge_count;
  if (!edge.valid) ++parent.failed_edges;
  const int id = static_cast<int>(edges_.size());
  edge_index_.emplace(std::pair{edge.parent, edge.child}, id);
  if (edge.valid) {
    TreeNode& child = add_node(edge.child, true);
    if (child.parent_edge < 0) child.parent_edge = id;
  }
  edges_.push_back(std::move(edge));
  return id;
}

std::vector<const TreeEdge*> DisassemblyTree::find_path(const PartSet& leaf) const {
  std::vector<const TreeEdge*> path;
  PartSet cur = leaf;
  while (cur != root_) {
    const TreeNode& n = node(cur);
    if (n.parent_edge < 0) throw std::logic_error("node is not validly reachable from the root");
    const TreeEdge& e = edges_[n.parent_edge];
    path.push_back(&e);
    cur = e.parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace asap
