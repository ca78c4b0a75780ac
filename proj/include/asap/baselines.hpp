#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "asap/feasibility.hpp"
#include "asap/sequence_planner.hpp"

namespace asap {

struct BaselineOptions {
  int budget = 400;
  std::uint64_t seed = 0;
  double timeout_s = 0.0;
  int stall_limit = 2000;  // consecutive candidates without a new evaluation
  FeasibilitySettings feasibility;
};

struct GaParams {
  int population = 20;
  int tournament = 3;
  double crossover_rate = 0.9;
  double mutation_rate = 0.2;
  int elites = 2;
};

/// Per-run state shared by the baselines: evaluation counter and the
/// (node, part) result memo, so each unique pose attempt is paid once.
class SequenceEvaluator {
 public:
  SequenceEvaluator(const Assembly& assembly, const BaselineOptions& options,
                    std::shared_ptr<FeasibilityCache> cache);

  struct StepOutcome {
    bool feasible = false;
    DisassemblyStep step;
  };
  struct Evaluation {
    int fitness = 0;            // leading feasible removals
    bool exhausted = false;     // budget or time ran out mid-evaluation
    std::vector<DisassemblyStep> steps;
    bool complete(std::size_t n) const { return fitness + 1 == static_cast<int>(n); }
  };

  /// Walks a disassembly order; each step is feasible iff some plain top-k
  /// pose admits a motion and a stable hold plan.
  Evaluation evaluate(const std::vector<int>& order);

  /// Memoized removal check (nullopt when the budget ran out first).
  std::optional<StepOutcome> step(const PartSet& node, int part);

  /// Gravity-free, plane-free path check in the assembled frame (one evaluation).
  std::optional<bool> free_path(const PartSet& node, int part);

  const FeasibilityChecker& checker() const { return checker_; }
  EvaluationBudget& budget() { return budget_; }
  bool timed_out() const;
  double elapsed() const;
  int fresh_evaluations() const { return fresh_; }

 private:
  const Assembly& assembly_;
  BaselineOptions options_;
  FeasibilityChecker checker_;
  EvaluationBudget budget_;
  std::map<std::pair<PartSet, int>, StepOutcome> memo_;
  std::map<std::pair<PartSet, int>, bool> free_memo_;
  int fresh_ = 0;
  std::chrono::steady_clock::time_point start_;
};

struct BaselineResult {
  std::optional<SequencePlan> plan;
  FailureCause cause = FailureCause::none;
  int evaluations = 0;
  double wall_time_s = 0.0;
  int best_fitness = 0;
  std::vector<int> best_fitness_per_generation;  // genetic search only
  bool success() const { return plan.has_value(); }
};

/// Fitness of one order with a fresh budget and cache.
SequenceEvaluator::Evaluation evaluate_sequence(const Assembly& assembly, const std::vector<int>& order,
                                                const BaselineOptions& options);

BaselineResult random_permutation_search(const Assembly& assembly, const BaselineOptions& options,
                                         std::shared_ptr<FeasibilityCache> cache = nullptr);

BaselineResult genetic_search(const Assembly& assembly, const BaselineOptions& options,
                              const GaParams& params = {}, std::shared_ptr<FeasibilityCache> cache = nullptr,
                              const std::vector<std::vector<int>>& initial_population = {});

BaselineResult gravity_free_search(const Assembly& assembly, const BaselineOptions& options,
                                   std::shared_ptr<FeasibilityCache> cache = nullptr);

/// Order crossover (OX1) of two permutations with cut points [a, b).
std::vector<int> order_crossover(const std::vector<int>& p1, const std::vector<int>& p2, std::size_t a,
                                 std::size_t b);

}  // namespace asap
