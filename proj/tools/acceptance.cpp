// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "asap/ablation.hpp"
#include "asap/baselines.hpp"
#include "asap/benchmark.hpp"
#include "asap/dataset_filter.hpp"
#include "asap/physics.hpp"
#include "asap/sequence_planner.hpp"
#include "asap/stable_pose.hpp"

using namespace asap;

namespace {

// Tolerances and sizes.
constexpr int kAblationCases = 200;
constexpr double kAblationAgreement = 0.85;
constexpr double kAblationSpeedup = 5.0;
constexpr int kSuiteSize = 20;
constexpr int kSuiteMinParts = 4;
constexpr int kSuiteMaxParts = 12;
constexpr std::uint64_t kSuiteSeed = 1;
constexpr std::uint64_t kBenchSeed = 1;
constexpr double kHeuristicOverRandom = 1.5;
constexpr double kQualityTol = 1e-9;
constexpr double kRestDrift = 1e-3;
constexpr int kRestSteps = 500;
constexpr double kFreeFallTol = 0.02;
constexpr int kFreeFallSteps = 100;

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Report {
 public:
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass_ = false;
      failures_.push_back(what);
    }
  }
  void note(const std::string& s) { notes_.push_back(s); }
  Outcome outcome() const {
    std::ostringstream os;
    for (const auto& n : notes_) os << n << "; ";
    for (const auto& f : failures_) os << "failed: " << f << "; ";
    std::string d = os.str();
    if (d.size() >= 2) d.resize(d.size() - 2);
    return {pass_, d};
  }

 private:
  bool pass_ = true;
  std::vector<std::string> notes_, failures_;
};

std::string fmt(double v, int precision = 3) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(precision);
  os << v;
  return os.str();
}

Assembly boxes(const std::string& id, const std::vector<std::pair<Vec3, Vec3>>& size_center) {
  Assembly a;
  a.id = id;
  for (std::size_t i = 0; i < size_center.size(); ++i) {
    a.parts.push_back({make_part("cube-" + std::to_string(i), box_mesh(size_center[i].first), kDefaultDensity),
                       RigidTransform::from_translation(size_center[i].second)});
  }
  return a;
}

Assembly cube_stack(int n) {
  std::vector<std::pair<Vec3, Vec3>> specs;
  for (int i = 0; i < n; ++i) specs.emplace_back(Vec3::Ones(), Vec3(0, 0, 0.5 + i));
  return boxes("stack-" + std::to_string(n), specs);
}

double max_displacement(const Trajectory& t, const std::vector<Vec3>& start) {
  double d = 0.0;
  for (const auto& frame : t)
    for (std::size_t i = 0; i < frame.size(); ++i) d = std::max(d, (frame[i] - start[i]).norm());
  return d;
}

Outcome ablation_criterion(const std::filesystem::path& out_dir) {
  AblationOptions o;
  o.cases = kAblationCases;
  o.min_parts = 4;
  o.max_parts = 10;
  o.max_held = {2, 3};
  o.seed = 0;
  o.speedup_parts = 8;
  o.speedup_held = 2;
  const auto rows = run_stability_ablation(o);
  std::ofstream(out_dir / "ablation.csv") << [&] {
    std::ostringstream s;
    write_ablation_csv(s, rows);
    return s.str();
  }();
  std::ofstream(out_dir / "ablation.md") << ablation_table(rows);

  Report r;
  const AblationSummary all = summarize_ablation(rows);
  const AblationSummary m2 = summarize_ablation(rows, 2);
  r.note(std::to_string(rows.size() / o.max_held.size()) + " cases, " + std::to_string(all.total) + " checks");
  r.note("false positives " + std::to_string(all.fp));
  r.note("agreement " + fmt(100 * all.accuracy, 1) + "%");
  r.note("speed-up n=8 M=2 " + fmt(m2.speedup_sims, 2) + "x over " + std::to_string(m2.speedup_rows) + " rows");
  r.check(static_cast<int>(rows.size() / o.max_held.size()) >= kAblationCases, "case count");
  r.check(all.fp == 0, "soundness");
  r.check(all.accuracy >= kAblationAgreement, "agreement >= 85%");
  r.check(m2.speedup_rows > 0 && m2.speedup_sims >= kAblationSpeedup, "speed-up >= 5x");
  bool sims_bounded = true;
  for (const auto& row : rows) sims_bounded &= row.greedy_sims <= row.max_held + 1;
  r.check(sims_bounded, "greedy sims <= M+1");
  return r.outcome();
}

struct BenchData {
  std::vector<BenchmarkRow> rows;
  BenchmarkConfig config;
};

BenchData run_comparison(const std::filesystem::path& out_dir, int threads) {
  const auto suite = generated_suite(kSuiteSize, kSuiteMinParts, kSuiteMaxParts, kSuiteSeed);
  std::vector<const Assembly*> ptrs;
  for (const auto& a : suite) ptrs.push_back(&a);
  BenchData d;
  d.config.methods = {"asap-heuristic", "random-permutation", "genetic", "gravity-free"};
  d.config.budgets = {50, 400};
  d.config.max_held = {2, 4};
  d.config.seed = kBenchSeed;
  d.config.threads = threads;
  d.rows = run_benchmark(d.config, ptrs);
  std::ofstream csv(out_dir / "benchmark.csv");
  write_benchmark_csv(csv, d.rows);
  std::ofstream(out_dir / "benchmark.md") << success_table(d.rows) << "\n" << runtime_medians(d.rows);
  return d;
}

Outcome comparison_criterion(const BenchData& d) {
  Report r;
  auto rate = [&](const std::string& m, int b, int h) { return success_rate(d.rows, m, b, h); };
  const double heur = rate("asap-heuristic", 50, 2);
  const double rnd = rate("random-permutation", 50, 2);
  const double gf = rate("gravity-free", 50, 2);
  r.note("budget 50 M=2: heuristic " + fmt(100 * heur, 0) + "%, random " + fmt(100 * rnd, 0) + "%, genetic " +
         fmt(100 * rate("genetic", 50, 2), 0) + "%, gravity-free " + fmt(100 * gf, 0) + "%");
  r.check(heur >= kHeuristicOverRandom * rnd, "heuristic >= 1.5x random-permutation");
  r.check(heur >= gf, "heuristic >= gravity-free");
  for (const auto& m : d.config.methods) {
    for (int h : {2, 4}) {
      if (rate(m, 400, h) < rate(m, 50, h)) r.check(false, m + " budget monotonicity at M=" + std::to_string(h));
    }
    for (int b : {50, 400}) {
      if (rate(m, b, 4) < rate(m, b, 2)) r.check(false, m + " M monotonicity at budget " + std::to_string(b));
    }
  }
  return r.outcome();
}

Outcome replay_criterion(const BenchData& d) {
  Report r;
  int plans = 0, ok = 0;
  for (const auto& row : d.rows) {
    if (row.replay_ok == "na") continue;
    ++plans;
    ok += row.replay_ok == "true";
  }
  r.note(std::to_string(ok) + "/" + std::to_string(plans) + " plans replay");
  r.check(plans > 0, "some plans returned");
  r.check(ok == plans, "every plan replays");
  return r.outcome();
}

Outcome stable_pose_criterion() {
  Report r;
  Assembly cube = boxes("cube", {{Vec3::Ones(), Vec3::Zero()}});
  const PartSet one = PartSet::full(1);
  const auto all6 = enumerate_stable_poses(cube, one, 10);
  r.check(all6.size() == 6, "cube has 6 poses (got " + std::to_string(all6.size()) + ")");
  for (const auto& p : all6) r.check(std::abs(p.quality - 0.5) <= kQualityTol, "cube quality 0.5");
  r.check(enumerate_stable_poses(cube, one, 5).size() == 5, "top-5 at k=5");

  Assembly box = boxes("box211", {{Vec3(2, 1, 1), Vec3::Zero()}});
  const auto bp = enumerate_stable_poses(box, one, 6);
  r.check(bp.size() == 6 && std::abs(bp[0].facet_area - 2.0) < 1e-9 && std::abs(bp[1].facet_area - 2.0) < 1e-9,
          "2:1:1 box ranks its largest faces first");

  int survived = 0, total = 0;
  for (const Assembly* a : {&cube, &box}) {
    const double d_th = 0.01 * a->diagonal();
    for (const auto& p : enumerate_stable_poses(*a, one, 5)) {
      ++total;
      survived += rigid_proxy_stays(*a, one, p, 200, d_th);
    }
  }
  r.note(std::to_string(survived) + "/" + std::to_string(total) + " poses survive 200 steps");
  r.check(survived == total, "rigid-proxy survival");
  return r.outcome();
}

Outcome simulator_criterion() {
  Report r;
  auto cube_named = [](const std::string& id) { return make_part(id, box_mesh(Vec3::Ones()), kDefaultDensity); };
  auto cube = cube_named("cube");
  {
    SimScene scene;
    scene.add_part(cube, RigidTransform::from_translation({0, 0, 0.5}));
    const auto start = scene.positions();
    const double drift = max_displacement(run(scene, kRestSteps), start);
    r.note("resting drift " + fmt(drift * 1e3, 4) + " mm");
    r.check(drift < kRestDrift, "resting drift < 1 mm");
  }
  {
    SimScene scene;
    scene.add_part(cube_named("base"), RigidTransform::from_translation({0, 0, 0.5}), true);
    scene.add_part(cube_named("lifted"), RigidTransform::from_translation({0, 0, 3.0}), true);
    scene.add_part(cube_named("falling"), RigidTransform::from_translation({0.2, 0, 4.2}));
    const Vec3 p0 = scene.state(0).position, p1 = scene.state(1).position;
    const Quat q1 = scene.state(1).orientation;
    bool still = true;
    for (int i = 0; i < 200; ++i) {
      scene.step();
      still &= scene.state(0).position == p0 && scene.state(1).position == p1 &&
               scene.state(1).orientation.coeffs() == q1.coeffs();
    }
    r.check(still, "held parts move exactly 0");
  }
  {
    SimScene scene({}, false);
    scene.add_part(cube, RigidTransform::from_translation({0, 0, 100}));
    run(scene, kFreeFallSteps);
    const double t = kFreeFallSteps * scene.config().dt;
    const double expected = scene.config().gravity.norm() * t;
    const double err = std::abs(-scene.state(0).linear_velocity.z() - expected) / expected;
    r.note("free-fall error " + fmt(100 * err, 3) + "%");
    r.check(err <= kFreeFallTol, "free fall within 2%");
  }
  {
    auto simulate = [&] {
      SimScene scene;
      scene.add_part(cube_named("a"), RigidTransform::from_translation({0, 0, 0.5}));
      scene.add_part(cube_named("b"), RigidTransform{Quat(Eigen::AngleAxisd(0.3, Vec3::UnitZ())), Vec3(0.4, 0.1, 1.52)});
      return run(scene, 200);
    };
    const Trajectory a = simulate(), b = simulate();
    bool same = a.size() == b.size();
    for (std::size_t s = 0; same && s < a.size(); ++s) same = a[s] == b[s];
    r.check(same, "bit-exact determinism");
  }
  return r.outcome();
}

Outcome stack_criterion() {
  Report r;
  const Assembly a = cube_stack(4);
  PlannerOptions po;
  po.budget = 50;
  po.feasibility.upright_only = true;
  po.feasibility.max_held = 0;
  const PlanResult plan = plan_sequence(a, po);
  std::vector<std::string> removal;
  if (plan.plan) {
    const auto order = plan.plan->order();
    removal.assign(order.rbegin(), order.rend());
  }
  const std::vector<std::string> top_down{"cube-3", "cube-2", "cube-1", "cube-0"};
  r.check(removal == top_down, "planner removes top to bottom");

  BaselineOptions bo;
  bo.budget = 50;
  bo.feasibility = po.feasibility;
  r.check(evaluate_sequence(a, {0, 1, 2, 3}, bo).fitness == 0, "bottom-first fitness 0");

  std::vector<int> perm{0, 1, 2, 3};
  int complete = 0;
  bool only_top_down = true;
  do {
    if (evaluate_sequence(a, perm, bo).complete(4)) {
      ++complete;
      only_top_down &= perm == std::vector<int>{3, 2, 1, 0};
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  r.note(std::to_string(complete) + " of 24 orders complete");
  r.check(complete == 1 && only_top_down, "enumeration agrees");

  PlannerOptions defaults;
  defaults.budget = 50;
  const PlanResult free_plan = plan_sequence(a, defaults);
  std::string removal_default;
  if (free_plan.plan) {
    const auto order = free_plan.plan->order();
    for (auto it = order.rbegin(); it != order.rend(); ++it) removal_default += (removal_default.empty() ? "" : " ") + *it;
  }
  r.note("default settings (top-5 poses, M=2) removal order: " +
         (free_plan.plan ? removal_default : "none (" + to_string(free_plan.cause) + ")"));
  return r.outcome();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance suite"};
  std::string out = "acceptance_out";
  std::vector<std::string> only;
  int threads = 1;
  app.add_option("-o,--out-dir", out, "Directory for CSV and table outputs");
  app.add_option("--only", only, "Run only these criteria: ablation, comparison, replay, stable-pose, simulator, stack");
  app.add_option("--threads", threads, "Benchmark worker threads")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);
  std::filesystem::create_directories(out);
  auto wanted = [&](const std::string& n) { return only.empty() || std::count(only.begin(), only.end(), n) > 0; };

  bool all_pass = true;
  auto report = [&](const std::string& name, const std::function<Outcome()>& f) {
    if (!wanted(name)) return;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    all_pass &= o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << fmt(s, 1) << " s): " << o.detail << std::endl;
  };

  report("simulator", simulator_criterion);
  report("stable-pose", stable_pose_criterion);
  report("stack", stack_criterion);
  report("ablation", [&] { return ablation_criterion(out); });
  if (wanted("comparison") || wanted("replay")) {
    BenchData data;
    bool ran = false;
    std::string error;
    try {
      data = run_comparison(out, threads);
      ran = true;
    } catch (const std::exception& e) {
      error = e.what();
    }
    auto guarded = [&](auto f) { return [&, f] { return ran ? f(data) : Outcome{false, "benchmark failed: " + error}; }; };
    report("comparison", guarded(comparison_criterion));
    report("replay", guarded(replay_criterion));
  }
  return all_pass ? 0 : 1;
}
