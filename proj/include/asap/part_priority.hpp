#pragma once

#include <map>
#include <string>
#include <vector>

#include "asap/assembly.hpp"
#include "asap/score_source.hpp"

namespace asap {

enum class PriorityKind { heuristic, learned };

struct PartPriority {
  std::map<std::string, double> scores;  // higher = disassemble sooner
  std::vector<int> order;                // part indices, first = try first
  PriorityKind source = PriorityKind::heuristic;
};

/// Outside-in: |COM(p) − bbox center(node)|, ties by volume ascending then id.
PartPriority part_priority_heuristic(const Assembly& assembly, const PartSet& node);

/// External probabilities; ties fall back to the heuristic order. Any
/// ScoreError (or a null source) yields the heuristic ordering and a warning
/// on std::clog.
PartPriority part_priority_learned(const Assembly& assembly, const PartSet& node, ScoreSource* source,
                                   const std::vector<std::pair<int, int>>& adjacency);

}  // namespace asap
