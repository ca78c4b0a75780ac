#include "asap/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "asap/baselines.hpp"
#include "asap/replay.hpp"
#include "asap/sequence_planner.hpp"

namespace asap {

const std::vector<std::string>& known_methods() {
  static const std::vector<std::string> methods{"asap-heuristic", "asap-learned", "random-permutation",
                                                "genetic", "gravity-free"};
  return methods;
}

void BenchmarkConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("benchmark needs at least one method");
  for (const auto& m : methods) {
    if (std::find(known_methods().begin(), known_methods().end(), m) == known_methods().end()) {
      throw std::invalid_argument("unknown method '" + m + "'");
    }
    if (m == "asap-learned" && scores_file.empty() && score_command.empty()) {
      throw std::invalid_argument("asap-learned needs scores_file or score_command");
    }
  }
  if (budgets.empty() || max_held.empty()) throw std::invalid_argument("budgets and max_held must be non-empty");
  for (int b : budgets) {
    if (b < 1) throw std::invalid_argument("budgets must be positive");
  }
  for (int m : max_held) {
    if (m < 0) throw std::invalid_argument("max_held values must be non-negative");
  }
  if (pose_k < 1) throw std::invalid_argument("pose_k must be positive");
  if (!(timeout_s > 0.0)) throw std::invalid_argument("timeout_s must be positive");
  if (threads < 1) throw std::invalid_argument("threads must be positive");
}

BenchmarkConfig benchmark_config_from_json(const nlohmann::json& j) {
  BenchmarkConfig c;
  c.methods = j.value("methods", c.methods);
  c.budgets = j.value("budgets", c.budgets);
  c.max_held = j.value("max_held", c.max_held);
  c.pose_k = j.value("pose_k", c.pose_k);
  c.seed = j.value("seed", c.seed);
  c.timeout_s = j.value("timeout_s", c.timeout_s);
  c.threads = j.value("threads", c.threads);
  c.scores_file = j.value("scores_file", c.scores_file);
  c.score_command = j.value("score_command", c.score_command);
  c.validate();
  return c;
}

BenchmarkConfig load_benchmark_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open benchmark config " + path.string());
  try {
    return benchmark_config_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

MethodRun run_method(const std::string& method, const Assembly& assembly, int budget,
                     const FeasibilitySettings& settings, std::uint64_t seed, double timeout_s,
                     std::shared_ptr<FeasibilityCache> cache, ScoreSource* scores) {
  MethodRun run;
  if (method == "asap-heuristic" || method == "asap-learned") {
    PlannerOptions o;
    o.budget = budget;
    o.timeout_s = timeout_s;
    o.feasibility = settings;
    if (method == "asap-learned") {
      o.part_selection = PriorityKind::learned;
      o.scores = scores;
    }
    PlanResult r = plan_sequence(assembly, o, std::move(cache));
    run.plan = std::move(r.plan);
    run.cause = to_string(r.cause);
    run.evaluations = r.evaluations;
    run.wall_time_s = r.wall_time_s;
    return run;
  }
  BaselineOptions o;
  o.budget = budget;
  o.seed = seed;
  o.timeout_s = timeout_s;
  o.feasibility = settings;
  BaselineResult r;
  if (method == "random-permutation") {
    r = random_permutation_search(assembly, o, std::move(cache));
  } else if (method == "genetic") {
    r = genetic_search(assembly, o, {}, std::move(cache));
  } else if (method == "gravity-free") {
    r = gravity_free_search(assembly, o, std::move(cache));
  } else {
    throw std::invalid_argument("unknown method '" + method + "'");
  }
  run.plan = std::move(r.plan);
  run.cause = to_string(r.cause);
  run.evaluations = r.evaluations;
  run.wall_time_s = r.wall_time_s;
  return run;
}

namespace {

std::unique_ptr<ScoreSource> make_source(const BenchmarkConfig& c) {
  if (!c.score_command.empty()) return std::make_unique<SubprocessScoreSource>(c.score_command);
  if (!c.scores_file.empty()) return std::make_unique<ScoresFileSource>(c.scores_file);
  return nullptr;
}

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

std::vector<BenchmarkRow> run_assembly(const BenchmarkConfig& config, const Assembly& assembly) {
  std::vector<BenchmarkRow> rows;
  auto cache = std::make_shared<FeasibilityCache>();
  std::unique_ptr<ScoreSource> source;
  for (const auto& method : config.methods) {
    if (method == "asap-learned" && !source) source = make_source(config);
    for (int budget : config.budgets) {
      for (int m : config.max_held) {
        BenchmarkRow row;
        row.method = method;
        row.assembly_id = assembly.id;
        row.n_parts = static_cast<int>(assembly.size());
        row.budget = budget;
        row.max_held = m;
        row.replay_ok = "na";
        FeasibilitySettings settings;
        settings.max_held = m;
        settings.pose_k = config.pose_k;
        try {
          MethodRun run = run_method(method, assembly, budget, settings, config.seed, config.timeout_s, cache,
                                     source.get());
          row.success = run.plan.has_value();
          row.evaluations_used = run.evaluations;
          row.wall_time_s = run.wall_time_s;
          row.failure_cause = run.cause;
          if (run.plan) {
            const ReplayReport report = replay_plan(assembly, *run.plan, settings);
            row.replay_ok = report.ok ? "true" : "false";
            if (!report.ok) {
              for (const auto& p : report.problems) std::clog << "replay " << assembly.id << " " << method << ": " << p << "\n";
            }
          }
        } catch (const std::exception& e) {
          row.success = false;
          row.failure_cause = csv_safe(std::string("error: ") + e.what());
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace

std::vector<BenchmarkRow> run_benchmark(const BenchmarkConfig& config,
                                        const std::vector<const Assembly*>& assemblies) {
  config.validate();
  std::vector<std::vector<BenchmarkRow>> per_assembly(assemblies.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < assemblies.size(); i = next++) {
      per_assembly[i] = run_assembly(config, *assemblies[i]);
    }
  };
  const int n_threads = std::min<int>(config.threads, static_cast<int>(std::max<std::size_t>(1, assemblies.size())));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  std::vector<BenchmarkRow> rows;
  for (auto& r : per_assembly) rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkRow>& rows) {
  out << "method,assembly_id,n_parts,budget,M,success,evaluations_used,wall_time_s,failure_cause,replay_ok\n";
  for (const auto& r : rows) {
    out << r.method << ',' << r.assembly_id << ',' << r.n_parts << ',' << r.budget << ',' << r.max_held << ','
        << (r.success ? "true" : "false") << ',' << r.evaluations_used << ',' << std::fixed << std::setprecision(3)
        << r.wall_time_s << std::defaultfloat << ',' << r.failure_cause << ',' << r.replay_ok << '\n';
  }
}

std::vector<BenchmarkRow> read_benchmark_csv(std::istream& in) {
  std::vector<BenchmarkRow> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 10) throw std::runtime_error("malformed benchmark row: " + line);
    BenchmarkRow r;
    r.method = f[0];
    r.assembly_id = f[1];
    r.n_parts = std::stoi(f[2]);
    r.budget = std::stoi(f[3]);
    r.max_held = std::stoi(f[4]);
    r.success = f[5] == "true";
    r.evaluations_used = std::stoi(f[6]);
    r.wall_time_s = std::stod(f[7]);
    r.failure_cause = f[8];
    r.replay_ok = f[9];
    rows.push_back(r);
  }
  return rows;
}

double success_rate(const std::vector<BenchmarkRow>& rows, const std::string& method, int budget, int max_held) {
  int total = 0, ok = 0;
  for (const auto& r : rows) {
    if (r.method != method || r.budget != budget || r.max_held != max_held) continue;
    ++total;
    ok += r.success ? 1 : 0;
  }
  return total ? static_cast<double>(ok) / total : -1.0;
}

std::string success_table(const std::vector<BenchmarkRow>& rows) {
  std::vector<std::string> methods;
  std::vector<std::pair<int, int>> columns;
  for (const auto& r : rows) {
    if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) methods.push_back(r.method);
    const std::pair<int, int> c{r.budget, r.max_held};
    if (std::find(columns.begin(), columns.end(), c) == columns.end()) columns.push_back(c);
  }
  std::sort(columns.begin(), columns.end());
  std::ostringstream os;
  os << "| Method |";
  for (const auto& [b, m] : columns) os << " Budget " << b << ", " << m << " held |";
  os << "\n|---|";
  for (std::size_t i = 0; i < columns.size(); ++i) os << "---|";
  os << "\n";
  for (const auto& method : methods) {
    os << "| " << method << " |";
    for (const auto& [b, m] : columns) {
      const double rate = success_rate(rows, method, b, m);
      os << ' ' << std::fixed << std::setprecision(2) << (rate < 0 ? 0.0 : 100.0 * rate) << " |";
    }
    os << "\n";
  }
  return os.str();
}

std::string runtime_medians(const std::vector<BenchmarkRow>& rows) {
  auto bucket = [](int n) { return n <= 5 ? 0 : n <= 10 ? 1 : 2; };
  const char* names[3] = {"<=5 parts", "6-10 parts", ">10 parts"};
  std::map<std::string, std::array<std::vector<double>, 3>> times;
  std::vector<std::string> methods;
  for (const auto& r : rows) {
    if (!times.count(r.method)) methods.push_back(r.method);
    auto& t = times[r.method];
    if (r.success) t[bucket(r.n_parts)].push_back(r.wall_time_s);
  }
  std::ostringstream os;
  os << "| Method | " << names[0] << " | " << names[1] << " | " << names[2] << " |\n|---|---|---|---|\n";
  for (const auto& m : methods) {
    os << "| " << m << " |";
    for (auto& v : times[m]) {
      if (v.empty()) {
        os << " - |";
        continue;
      }
      std::sort(v.begin(), v.end());
      const std::size_t k = v.size();
      const double med = k % 2 ? v[k / 2] : 0.5 * (v[k / 2 - 1] + v[k / 2]);
      os << ' ' << std::fixed << std::setprecision(2) << med << "s (n=" << k << ") |";
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace asap
