#include "asap/part_priority.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace asap {

namespace {

constexpr double kTieTol = 1e-9;

}  // namespace

PartPriority part_priority_heuristic(const Assembly& assembly, const PartSet& node) {
  PartPriority out;
  out.source = PriorityKind::heuristic;
  const Vec3 center = subset_bounds(assembly, node).center();
  std::vector<int> idx = node.indices();
  std::vector<double> score(assembly.size(), 0.0);
  for (int i : idx) {
    const auto& p = assembly.parts[i];
    score[i] = (p.assembled.apply(p.geometry->center_of_mass) - center).norm();
    out.scores[p.geometry->id] = score[i];
  }
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (std::abs(score[a] - score[b]) > kTieTol) return score[a] > score[b];
    const double va = assembly.parts[a].geometry->volume, vb = assembly.parts[b].geometry->volume;
    if (std::abs(va - vb) > kTieTol * std::max(va, vb)) return va < vb;
    return assembly.part_id(a) < assembly.part_id(b);
  });
  out.order = idx;
  return out;
}

PartPriority part_priority_learned(const Assembly& assembly, const PartSet& node, ScoreSource* source,
                                   const std::vector<std::pair<int, int>>& adjacency) {
  PartPriority fallback = part_priority_heuristic(assembly, node);
  if (!source) {
    std::clog << "warning: no score source; using heuristic part order\n";
    return fallback;
  }
  ScoreMap scores;
  try {
    const NodeSnapshot snapshot = make_snapshot(assembly, node, adjacency);
    scores = parse_score_response(nlohmann::json(source->scores(snapshot)), snapshot.parts);
  } catch (const std::exception& e) {
    std::clog << "warning: learned scores unavailable (" << e.what() << "); using heuristic part order\n";
    return fallback;
  }
  std::vector<int> rank(assembly.size(), 0);
  for (std::size_t r = 0; r < fallback.order.size(); ++r) rank[fallback.order[r]] = static_cast<int>(r);
  PartPriority out;
  out.source = PriorityKind::learned;
  out.scores = scores;
  out.order = fallback.order;
  std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
    const double sa = scores.at(assembly.part_id(a)), sb = scores.at(assembly.part_id(b));
    if (std::abs(sa - sb) > 1e-12) return sa > sb;
    return rank[a] < rank[b];
  });
  return out;
}

}  // namespace asap
