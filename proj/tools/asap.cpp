// Command-line front end: plan, bench, ablate-stability, gen, labels, replay.

#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "asap/ablation.hpp"
#include "asap/benchmark.hpp"
#include "asap/dataset_filter.hpp"
#include "asap/labels.hpp"
#include "asap/manifest.hpp"
#include "asap/replay.hpp"
#include "asap/sequence_planner.hpp"

namespace {

using namespace asap;

struct PlanArgs {
  std::string manifest;
  std::string method = "asap-heuristic";
  std::string node_selection = "dfs";
  int budget = 400;
  int max_held = 2;
  int pose_k = kDefaultPoseCount;
  std::uint64_t seed = 0;
  double timeout_s = 600.0;
  bool upright = false;
  std::string scores_file;
  std::string score_command;
  std::string out;
};

struct SuiteArgs {
  std::vector<std::string> manifests;
  int suite = 0;
  int min_parts = 4;
  int max_parts = 12;
  std::uint64_t suite_seed = 1;
};

std::vector<Assembly> load_inputs(const SuiteArgs& a) {
  std::vector<Assembly> out;
  for (const auto& m : a.manifests) {
    FilterResult r = filter_assembly(load_manifest(m));
    if (!r.accepted) {
      std::clog << "skipping " << m << ": " << r.reason << "\n";
      continue;
    }
    out.push_back(std::move(*r.assembly));
  }
  if (a.suite > 0) {
    auto suite = generated_suite(a.suite, a.min_parts, a.max_parts, a.suite_seed);
    for (auto& s : suite) out.push_back(std::move(s));
  }
  if (out.empty()) throw std::runtime_error("no assemblies given (use --manifest or --suite)");
  return out;
}

void add_suite_options(CLI::App* cmd, SuiteArgs& a) {
  cmd->add_option("--manifest", a.manifests, "Assembly manifest JSON files");
  cmd->add_option("--suite", a.suite, "Number of generated, filter-accepted assemblies to add");
  cmd->add_option("--min-parts", a.min_parts, "Smallest generated assembly");
  cmd->add_option("--max-parts", a.max_parts, "Largest generated assembly");
  cmd->add_option("--suite-seed", a.suite_seed, "Seed of the generated suite");
}

std::vector<const Assembly*> pointers(const std::vector<Assembly>& v) {
  std::vector<const Assembly*> out;
  for (const auto& a : v) out.push_back(&a);
  return out;
}

int cmd_plan(const PlanArgs& a) {
  const Assembly assembly = load_assembly(load_manifest(a.manifest));
  FeasibilitySettings settings;
  settings.max_held = a.max_held;
  settings.pose_k = a.pose_k;
  settings.upright_only = a.upright;
  std::unique_ptr<ScoreSource> scores;
  if (!a.score_command.empty()) scores = std::make_unique<SubprocessScoreSource>(a.score_command);
  else if (!a.scores_file.empty()) scores = std::make_unique<ScoresFileSource>(a.scores_file);

  std::optional<SequencePlan> plan;
  std::string cause;
  int evaluations = 0;
  if (a.method == "asap-heuristic" || a.method == "asap-learned") {
    PlannerOptions o;
    o.node_selection = a.node_selection == "beam" ? NodeSelection::beam : NodeSelection::dfs;
    o.part_selection = a.method == "asap-learned" ? PriorityKind::learned : PriorityKind::heuristic;
    o.scores = scores.get();
    o.budget = a.budget;
    o.timeout_s = a.timeout_s;
    o.feasibility = settings;
    PlanResult r = plan_sequence(assembly, o);
    plan = std::move(r.plan);
    cause = to_string(r.cause);
    evaluations = r.evaluations;
  } else {
    MethodRun r = run_method(a.method, assembly, a.budget, settings, a.seed, a.timeout_s, nullptr, scores.get());
    plan = std::move(r.plan);
    cause = r.cause;
    evaluations = r.evaluations;
  }
  if (!plan) {
    std::cout << "no sequence found: " << cause << " after " << evaluations << " evaluations\n";
    return 2;
  }
  std::cout << "sequence (" << evaluations << " evaluations):";
  for (const auto& id : plan->order()) std::cout << ' ' << id;
  std::cout << "\n";
  if (!a.out.empty()) {
    save_plan(a.out, *plan);
    std::cout << "wrote " << a.out << "\n";
  } else {
    std::cout << plan_to_json(*plan).dump(2) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Physics-based assembly sequence planning"};
  app.require_subcommand(1);

  PlanArgs plan_args;
  auto* plan = app.add_subcommand("plan", "Plan one assembly and write a SequencePlan JSON");
  plan->add_option("manifest", plan_args.manifest, "Assembly manifest JSON")->required()->check(CLI::ExistingFile);
  plan->add_option("--method", plan_args.method, "Planning method")->check(CLI::IsMember(known_methods()));
  plan->add_option("--node-selection", plan_args.node_selection, "dfs or beam")->check(CLI::IsMember({"dfs", "beam"}));
  plan->add_option("--budget", plan_args.budget, "Evaluation budget")->check(CLI::PositiveNumber);
  plan->add_option("--max-held", plan_args.max_held, "Parts that may be held (M)")->check(CLI::NonNegativeNumber);
  plan->add_option("--pose-k", plan_args.pose_k, "Stable pose candidates")->check(CLI::PositiveNumber);
  plan->add_option("--seed", plan_args.seed, "Seed for the randomized baselines");
  plan->add_option("--timeout", plan_args.timeout_s, "Timeout in seconds");
  plan->add_flag("--upright", plan_args.upright, "Keep the assembled orientation");
  plan->add_option("--scores-file", plan_args.scores_file, "Learned scores JSONL");
  plan->add_option("--score-command", plan_args.score_command, "Scoring subprocess command");
  plan->add_option("-o,--out", plan_args.out, "Output plan JSON");

  std::string bench_config, bench_out = "bench_out";
  SuiteArgs bench_inputs;
  auto* bench = app.add_subcommand("bench", "Run the method comparison and write CSVs");
  bench->add_option("--config", bench_config, "BenchmarkConfig JSON")->check(CLI::ExistingFile);
  add_suite_options(bench, bench_inputs);
  bench->add_option("-o,--out-dir", bench_out, "Output directory");

  AblationOptions ablation;
  std::string ablation_out = "ablation.csv";
  auto* ablate = app.add_subcommand("ablate-stability", "Greedy vs combinatorial stability check");
  ablate->add_option("--cases", ablation.cases, "Number of (subassembly, pose) cases")->check(CLI::PositiveNumber);
  ablate->add_option("--seed", ablation.seed, "Case sampling seed");
  ablate->add_option("--min-parts", ablation.min_parts, "Smallest subassembly");
  ablate->add_option("--max-parts", ablation.max_parts, "Largest subassembly");
  ablate->add_option("--max-held", ablation.max_held, "M values")->expected(1, -1);
  ablate->add_option("-o,--out", ablation_out, "Output CSV");

  std::string family = "stack", gen_out = ".";
  int gen_parts = 4;
  std::uint64_t gen_seed = 0;
  bool gen_filter = false;
  std::vector<std::string> family_names;
  for (Family f : all_families()) family_names.push_back(to_string(f));
  auto* gen = app.add_subcommand("gen", "Generate a procedural assembly (OBJ meshes and a manifest)");
  gen->add_option("--family", family, "Assembly family")->check(CLI::IsMember(family_names));
  gen->add_option("-n,--parts", gen_parts, "Number of parts")->check(CLI::Range(2, 256));
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("-o,--out-dir", gen_out, "Output directory");
  gen->add_flag("--filter", gen_filter, "Run the dataset filter and report the verdict");

  SuiteArgs label_inputs;
  LabelOptions label_options;
  std::string labels_out = "labels";
  auto* labels = app.add_subcommand("labels", "Export next-part labels from beam-search planning");
  add_suite_options(labels, label_inputs);
  labels->add_option("--budget", label_options.budget, "Evaluation budget per assembly")->check(CLI::PositiveNumber);
  labels->add_option("--max-held", label_options.feasibility.max_held, "Parts that may be held (M)");
  labels->add_option("-o,--out-dir", labels_out, "Output directory");

  std::string replay_manifest, replay_plan_path;
  int replay_held = 2;
  auto* replay = app.add_subcommand("replay", "Independently validate a SequencePlan JSON");
  replay->add_option("manifest", replay_manifest, "Assembly manifest JSON")->required()->check(CLI::ExistingFile);
  replay->add_option("plan", replay_plan_path, "SequencePlan JSON")->required()->check(CLI::ExistingFile);
  replay->add_option("--max-held", replay_held, "Hold limit M to enforce");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) return cmd_plan(plan_args);
    if (*bench) {
      BenchmarkConfig config = bench_config.empty() ? BenchmarkConfig{} : load_benchmark_config(bench_config);
      if (bench_inputs.manifests.empty() && bench_inputs.suite == 0) bench_inputs.suite = 20;
      const auto assemblies = load_inputs(bench_inputs);
      const auto rows = run_benchmark(config, pointers(assemblies));
      std::filesystem::create_directories(bench_out);
      std::ofstream csv(std::filesystem::path(bench_out) / "results.csv");
      write_benchmark_csv(csv, rows);
      const std::string summary = "## Success rate (%)\n\n" + success_table(rows) +
                                  "\n## Median runtime of successful runs\n\n" + runtime_medians(rows);
      std::ofstream(std::filesystem::path(bench_out) / "summary.md") << summary;
      std::cout << summary;
      return 0;
    }
    if (*ablate) {
      const auto rows = run_stability_ablation(ablation);
      std::ofstream csv(ablation_out);
      write_ablation_csv(csv, rows);
      std::cout << ablation_table(rows);
      return 0;
    }
    if (*gen) {
      const GeneratedAssembly g = generate_assembly(family_from_string(family), gen_parts, gen_seed);
      std::cout << "wrote " << write_generated(g, gen_out).string() << "\n";
      if (gen_filter) {
        const FilterResult r = filter_assembly(g);
        std::cout << (r.accepted ? "accepted" : "rejected: " + r.reason) << "\n";
        return r.accepted ? 0 : 3;
      }
      return 0;
    }
    if (*labels) {
      const auto assemblies = load_inputs(label_inputs);
      const LabelStats s = generate_labels(pointers(assemblies), label_options, labels_out);
      std::cout << s.records << " records from " << s.assemblies << " assemblies (" << s.planned << " planned, "
                << s.failed << " skipped)\n";
      return 0;
    }
    if (*replay) {
      const Assembly assembly = load_assembly(load_manifest(replay_manifest));
      FeasibilitySettings settings;
      settings.max_held = replay_held;
      const ReplayReport r = replay_plan(assembly, load_plan(replay_plan_path), settings);
      for (const auto& p : r.problems) std::cout << "problem: " << p << "\n";
      std::cout << (r.ok ? "replay ok" : "replay FAILED") << " (max penetration " << r.max_penetration
                << " m, max drift " << r.max_drift << " m)\n";
      return r.ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
