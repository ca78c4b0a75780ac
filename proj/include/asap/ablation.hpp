#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "asap/generator.hpp"
#include "asap/stability.hpp"

namespace asap {

struct AblationOptions {
  int cases = 200;  // (subassembly, pose) pairs; each is checked under every M
  int min_parts = 4;
  int max_parts = 10;
  std::vector<int> max_held{2, 3};
  std::uint64_t seed = 0;
  int sim_steps = 200;
  int pose_k = 5;
  std::vector<Family> families = all_families();
  /// Cases of this size and M run the oracle over every hold set so the
  /// speed-up compares against the full ΣC(n,k) cost.
  int speedup_parts = 8;
  int speedup_held = 2;
};

struct AblationRow {
  std::string assembly_id;
  int pose_id = 0;
  std::string removed_part;
  int n_parts = 0;  // parts of the simulated subassembly
  int max_held = 0;
  bool greedy_result = false;
  bool oracle_result = false;
  int greedy_sims = 0;
  int oracle_sims = 0;
  double greedy_time_s = 0.0;
  double oracle_time_s = 0.0;
  bool exhaustive = false;
  bool agreement() const { return greedy_result == oracle_result; }
};

struct AblationSummary {
  int total = 0, tp = 0, tn = 0, fn = 0, fp = 0;
  double accuracy = 0.0;
  int speedup_rows = 0;
  double speedup_sims = 0.0;  // Σ oracle sims / Σ greedy sims on exhaustive rows
  double speedup_time = 0.0;
};

/// Random cases: a generated assembly G with n+1 parts, one of its top-k
/// poses, and G minus one random part simulated at that pose.
std::vector<AblationRow> run_stability_ablation(const AblationOptions& options);

AblationSummary summarize_ablation(const std::vector<AblationRow>& rows, int only_max_held = -1);

void write_ablation_csv(std::ostream& out, const std::vector<AblationRow>& rows);
std::string ablation_table(const std::vector<AblationRow>& rows);

}  // namespace asap
