#include "asap/ablation.hpp"

#include <chrono>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "asap/stable_pose.hpp"

namespace asap {

std::vector<AblationRow> run_stability_ablation(const AblationOptions& options) {
  if (options.cases < 1 || options.min_parts < 2 || options.max_parts < options.min_parts) {
    throw std::invalid_argument("invalid ablation options");
  }
  if (static_cast<std::size_t>(options.max_parts) > kOracleMaxParts) {
    throw std::invalid_argument("ablation subassemblies are limited to 12 parts");
  }
  if (options.families.empty()) throw std::invalid_argument("ablation needs at least one family");
  using clock = std::chrono::steady_clock;
  auto seconds = [](clock::time_point a, clock::time_point b) { return std::chrono::duration<double>(b - a).count(); };

  std::mt19937_64 rng(options.seed);
  std::vector<AblationRow> rows;
  int made = 0, attempts = 0;
  while (made < options.cases) {
    if (++attempts > 20 * options.cases) throw std::runtime_error("ablation could not generate enough cases");
    const Family family = options.families[std::uniform_int_distribution<std::size_t>(0, options.families.size() - 1)(rng)];
    const int n = std::uniform_int_distribution<int>(options.min_parts, options.max_parts)(rng);
    const std::uint64_t seed = rng();
    Assembly assembly;
    std::vector<StablePose> poses;
    try {
      assembly = to_assembly(generate_assembly(family, n + 1, seed));
      poses = enumerate_stable_poses(assembly, PartSet::full(assembly.size()), options.pose_k);
    } catch (const std::invalid_argument&) {
      continue;
    } catch (const DegenerateHull&) {
      continue;
    }
    if (poses.empty()) continue;
    const int pose_id = std::uniform_int_distribution<int>(0, static_cast<int>(poses.size()) - 1)(rng);
    const int removed = std::uniform_int_distribution<int>(0, static_cast<int>(assembly.size()) - 1)(rng);
    const PartSet subset = PartSet::full(assembly.size()).without(removed);
    ++made;
    for (int m : options.max_held) {
      StabilityQuery q;
      q.parts = place(assembly, subset, poses[pose_id].transform);
      q.max_held = m;
      q.max_steps = options.sim_steps;
      q.distance_threshold = 0.01 * assembly.diagonal();
      AblationRow row;
      row.assembly_id = assembly.id;
      row.pose_id = pose_id;
      row.removed_part = assembly.part_id(removed);
      row.n_parts = n;
      row.max_held = m;
      row.exhaustive = n == options.speedup_parts && m == options.speedup_held;
      auto t0 = clock::now();
      const HoldPlan greedy = check_stable_greedy(q);
      auto t1 = clock::now();
      const HoldPlan oracle = check_stable_combinatorial(q, row.exhaustive);
      auto t2 = clock::now();
      row.greedy_result = greedy.stable;
      row.oracle_result = oracle.stable;
      row.greedy_sims = greedy.simulations;
      row.oracle_sims = oracle.simulations;
      row.greedy_time_s = seconds(t0, t1);
      row.oracle_time_s = seconds(t1, t2);
      rows.push_back(row);
    }
  }
  return rows;
}

AblationSummary summarize_ablation(const std::vector<AblationRow>& rows, int only_max_held) {
  AblationSummary s;
  double greedy_sims = 0, oracle_sims = 0, greedy_time = 0, oracle_time = 0;
  for (const auto& r : rows) {
    if (only_max_held >= 0 && r.max_held != only_max_held) continue;
    ++s.total;
    if (r.greedy_result && r.oracle_result) ++s.tp;
    if (!r.greedy_result && !r.oracle_result) ++s.tn;
    if (!r.greedy_result && r.oracle_result) ++s.fn;
    if (r.greedy_result && !r.oracle_result) ++s.fp;
    if (r.exhaustive) {
      ++s.speedup_rows;
      greedy_sims += r.greedy_sims;
      oracle_sims += r.oracle_sims;
      greedy_time += r.greedy_time_s;
      oracle_time += r.oracle_time_s;
    }
  }
  s.accuracy = s.total ? static_cast<double>(s.tp + s.tn) / s.total : 0.0;
  s.speedup_sims = greedy_sims > 0 ? oracle_sims / greedy_sims : 0.0;
  s.speedup_time = greedy_time > 0 ? oracle_time / greedy_time : 0.0;
  return s;
}

void write_ablation_csv(std::ostream& out, const std::vector<AblationRow>& rows) {
  out << "assembly_id,pose_id,removed_part,n_parts,M,greedy_result,oracle_result,greedy_sims,oracle_sims,"
         "greedy_time_s,oracle_time_s,exhaustive,agreement\n";
  auto b = [](bool v) { return v ? "stable" : "unstable"; };
  for (const auto& r : rows) {
    out << r.assembly_id << ',' << r.pose_id << ',' << r.removed_part << ',' << r.n_parts << ',' << r.max_held << ','
        << b(r.greedy_result) << ',' << b(r.oracle_result) << ',' << r.greedy_sims << ',' << r.oracle_sims << ','
        << std::fixed << std::setprecision(4) << r.greedy_time_s << ',' << r.oracle_time_s << std::defaultfloat << ','
        << (r.exhaustive ? "true" : "false") << ',' << (r.agreement() ? "true" : "false") << '\n';
  }
}

std::string ablation_table(const std::vector<AblationRow>& rows) {
  std::set<int> ms;
  for (const auto& r : rows) ms.insert(r.max_held);
  std::ostringstream os;
  os << "| Parts to hold | Cases | TP (%) | TN (%) | FN (%) | FP (%) | Acc. (%) | Speed up (sims) | Speed up (time) |\n"
     << "|---|---|---|---|---|---|---|---|---|\n";
  auto pct = [](int k, int n) { return n ? 100.0 * k / n : 0.0; };
  for (int m : ms) {
    const AblationSummary s = summarize_ablation(rows, m);
    os << "| " << m << " | " << s.total << std::fixed << std::setprecision(1) << " | " << pct(s.tp, s.total) << " | "
       << pct(s.tn, s.total) << " | " << pct(s.fn, s.total) << " | " << pct(s.fp, s.total) << " | "
       << 100.0 * s.accuracy << " | ";
    if (s.speedup_rows) {
      os << std::setprecision(2) << s.speedup_sims << "x | " << s.speedup_time << "x |\n";
    } else {
      os << "- | - |\n";
    }
  }
  return os.str();
}

}  // namespace asap
