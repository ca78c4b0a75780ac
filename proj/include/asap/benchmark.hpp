#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "asap/assembly.hpp"
#include "asap/feasibility.hpp"
#include "asap/score_source.hpp"
#include "asap/sequence_plan.hpp"

namespace asap {

struct BenchmarkConfig {
  std::vector<std::string> methods{"asap-heuristic", "random-permutation", "genetic", "gravity-free"};
  std::vector<int> budgets{50, 400};
  std::vector<int> max_held{2, 3, 4};  // M values
  int pose_k = kDefaultPoseCount;
  std::uint64_t seed = 0;
  double timeout_s = 600.0;  // per run
  int threads = 1;
  std::string scores_file;    // learned scores, for asap-learned
  std::string score_command;  // scoring subprocess, for asap-learned

  void validate() const;
};

BenchmarkConfig benchmark_config_from_json(const nlohmann::json& j);
BenchmarkConfig load_benchmark_config(const std::filesystem::path& path);

/// Method names accepted by run_method and the benchmark.
const std::vector<std::string>& known_methods();

struct BenchmarkRow {
  std::string method;
  std::string assembly_id;
  int n_parts = 0;
  int budget = 0;
  int max_held = 0;
  bool success = false;
  int evaluations_used = 0;
  double wall_time_s = 0.0;
  std::string failure_cause;  // "none" on success
  std::string replay_ok;      // "true", "false", or "na" without a plan
};

struct MethodRun {
  std::optional<SequencePlan> plan;
  std::string cause;
  int evaluations = 0;
  double wall_time_s = 0.0;
};

/// One planning run of `method`. `scores` is only used by asap-learned.
MethodRun run_method(const std::string& method, const Assembly& assembly, int budget,
                     const FeasibilitySettings& settings, std::uint64_t seed, double timeout_s,
                     std::shared_ptr<FeasibilityCache> cache, ScoreSource* scores = nullptr);

/// Cross product method × budget × M × assembly; one row per run in that
/// nesting order (assembly outermost). Failures and exceptions become rows.
std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& config,
                                        const std::vector<const Assembly*>& assemblies);

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows);
std::vector<BenchmarkRow> read_benchmark_csv(std::istream& in);

/// Success rate (%) per method and (budget, M) column.
std::string success_table(const std::vector<BenchmarkRow>& rows);

/// Median wall time per method for ≤5, 6–10 and >10 parts (successful runs).
std::string runtime_medians(const std::vector<BenchmarkRow>& rows);

/// Success rate in [0, 1] for one (method, budget, M) cell; -1 when empty.
double success_rate(const std::vector<BenchmarkRow>& rows, const std::string& method, int budget, int max_held);

}  // namespace asap
