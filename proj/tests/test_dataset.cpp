#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "asap/ablation.hpp"
#include "asap/benchmark.hpp"
#include "asap/dataset_filter.hpp"
#include "asap/mesh_io.hpp"
#include "asap/node_snapshot.hpp"
#include "asap/score_source.hpp"
#include "helpers.hpp"

using namespace asap;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("asap_test_dataset_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Assembly two_cubes() {
  return test::boxes("two", {{"a", Vec3::Ones(), Vec3(0, 0, 0.5)}, {"b", Vec3::Ones(), Vec3(2, 0, 0.5)}});
}

/// Manifest of boxes written to `dir`; `open_part` names a part whose mesh
/// loses one triangle.
AssemblyManifest box_manifest(const fs::path& dir, const std::vector<test::BoxSpec>& specs,
                              const std::string& open_part = {}) {
  AssemblyManifest m;
  m.id = "boxes";
  m.base_dir = dir;
  for (const auto& s : specs) {
    TriMesh mesh = box_mesh(s.size);
    if (s.id == open_part) mesh.triangles.pop_back();
    save_obj(dir / (s.id + ".obj"), mesh);
    m.parts.push_back({s.id, s.id + ".obj", s.density, RigidTransform::from_translation(s.center)});
  }
  return m;
}

std::vector<BenchmarkRow> without_time(std::vector<BenchmarkRow> rows) {
  for (auto& r : rows) r.wall_time_s = 0.0;
  return rows;
}

std::string csv(const std::vector<BenchmarkRow>& rows) {
  std::ostringstream out;
  write_benchmark_csv(out, rows);
  return out.str();
}

}  // namespace

TEST_CASE("dataset filter") {
  const fs::path dir = scratch("filter");
  SUBCASE("disjoint cubes are accepted") {
    auto m = box_manifest(dir, {{"a", Vec3::Ones(), Vec3(0, 0, 0.5)}, {"b", Vec3::Ones(), Vec3(1.5, 0, 0.5)}});
    FilterResult r = filter_assembly(m);
    REQUIRE(r.accepted);
    CHECK(r.reason.empty());
    CHECK(r.removed_parts.empty());
    CHECK(r.assembly->size() == 2);
  }
  SUBCASE("overlapping part is dropped") {
    auto m = box_manifest(dir, {{"a", Vec3::Ones(), Vec3(0, 0, 0.5)},
                                {"b", Vec3::Ones(), Vec3(1.5, 0, 0.5)},
                                {"c", Vec3::Ones(), Vec3(0.7, 0, 0.5)}});
    FilterResult r = filter_assembly(m);
    CHECK(r.removed_parts == std::vector<std::string>{"c"});
    REQUIRE(r.accepted);
    CHECK(r.assembly->size() == 2);
  }
  SUBCASE("two parts overlapping by 0.3 leave too few") {
    auto m = box_manifest(dir, {{"a", Vec3::Ones(), Vec3(0, 0, 0.5)}, {"b", Vec3::Ones(), Vec3(0.7, 0, 0.5)}});
    FilterResult r = filter_assembly(m);
    CHECK_FALSE(r.accepted);
    CHECK(r.removed_parts == std::vector<std::string>{"b"});
  }
  SUBCASE("open surface is rejected") {
    auto m = box_manifest(dir, {{"a", Vec3::Ones(), Vec3(0, 0, 0.5)}, {"b", Vec3::Ones(), Vec3(1.5, 0, 0.5)}}, "b");
    FilterResult r = filter_assembly(m);
    CHECK_FALSE(r.accepted);
    CHECK(r.reason.find("non-watertight") != std::string::npos);
  }
  SUBCASE("missing mesh throws") {
    auto m = box_manifest(dir, {{"a", Vec3::Ones(), Vec3(0, 0, 0.5)}, {"b", Vec3::Ones(), Vec3(1.5, 0, 0.5)}});
    m.parts[1].mesh_path = "absent.obj";
    CHECK_THROWS(filter_assembly(m));
  }
  SUBCASE("filtering is idempotent") {
    auto m = box_manifest(dir, {{"a", Vec3::Ones(), Vec3(0, 0, 0.5)},
                                {"b", Vec3::Ones(), Vec3(1.5, 0, 0.5)},
                                {"c", Vec3::Ones(), Vec3(0.7, 0, 0.5)}});
    FilterResult once = filter_assembly(m);
    REQUIRE(once.accepted);
    FilterResult twice = filter_assembly(*once.assembly);
    REQUIRE(twice.accepted);
    CHECK(twice.removed_parts.empty());
    REQUIRE(twice.assembly->size() == once.assembly->size());
    for (std::size_t i = 0; i < once.assembly->size(); ++i) {
      CHECK(twice.assembly->parts[i].geometry->id == once.assembly->parts[i].geometry->id);
    }
  }
  fs::remove_all(dir);
}

TEST_CASE("procedural generator") {
  SUBCASE("stack of four sits on the plane") {
    GeneratedAssembly g = generate_assembly(Family::stack, 4, 7);
    REQUIRE(g.manifest.parts.size() == 4);
    REQUIRE(g.meshes.size() == 4);
    Assembly a = to_assembly(g);
    std::vector<double> bottoms;
    for (const auto& p : a.parts) {
      double lo = 1e9;
      for (const Vec3& v : p.geometry->mesh.vertices) lo = std::min(lo, p.assembled.apply(v).z());
      bottoms.push_back(lo);
    }
    CHECK(*std::min_element(bottoms.begin(), bottoms.end()) == doctest::Approx(0.0).epsilon(1e-9));
    for (const auto& p : g.manifest.parts) CHECK(p.mesh_path.parent_path() == fs::path(g.manifest.id));
  }
  SUBCASE("deterministic in the seed") {
    for (Family f : all_families()) {
      GeneratedAssembly a = generate_assembly(f, 5, 3);
      GeneratedAssembly b = generate_assembly(f, 5, 3);
      CHECK(manifest_to_json(a.manifest) == manifest_to_json(b.manifest));
      REQUIRE(a.meshes.size() == b.meshes.size());
      for (std::size_t i = 0; i < a.meshes.size(); ++i) CHECK(mesh_hash(a.meshes[i]) == mesh_hash(b.meshes[i]));
    }
  }
  SUBCASE("every family yields watertight meshes") {
    for (Family f : all_families()) {
      GeneratedAssembly g = generate_assembly(f, 5, 1);
      for (const auto& m : g.meshes) CHECK(m.watertight);
    }
  }
  SUBCASE("peg-board passes the filter") {
    FilterResult r = filter_assembly(generate_assembly(Family::peg_board, 5, 1));
    CHECK_MESSAGE(r.accepted, r.reason);
  }
  SUBCASE("family names round trip") {
    for (Family f : all_families()) CHECK(family_from_string(to_string(f)) == f);
    CHECK_THROWS(family_from_string("pyramid"));
  }
  SUBCASE("unsupported sizes throw") { CHECK_THROWS_AS(generate_assembly(Family::stack, 1, 0), std::invalid_argument); }
}

TEST_CASE("manifest round trip") {
  const fs::path dir = scratch("manifest");
  GeneratedAssembly g = generate_assembly(Family::wall, 4, 2);
  const fs::path path = write_generated(g, dir);
  AssemblyManifest m = load_manifest(path);
  CHECK(manifest_to_json(m) == manifest_to_json(g.manifest));
  Assembly a = load_assembly(m);
  Assembly b = to_assembly(g);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.parts[i].geometry->id == b.parts[i].geometry->id);
    CHECK(a.parts[i].geometry->mass == doctest::Approx(b.parts[i].geometry->mass));
    CHECK((a.parts[i].assembled.translation - b.parts[i].assembled.translation).norm() < 1e-12);
  }
  SUBCASE("duplicate ids are invalid") {
    AssemblyManifest bad = m;
    bad.parts[1].id = bad.parts[0].id;
    CHECK_THROWS(bad.validate());
  }
  fs::remove_all(dir);
}

TEST_CASE("benchmark harness") {
  Assembly a = two_cubes();
  BenchmarkConfig cfg;
  cfg.methods = {"asap-heuristic", "random-permutation", "genetic", "gravity-free"};
  cfg.budgets = {20};
  cfg.max_held = {1, 2};
  cfg.seed = 4;
  const auto rows = run_benchmark(cfg, {&a});
  SUBCASE("one row per run, all succeed on a trivial assembly") {
    CHECK(rows.size() == 8);
    for (const auto& m : cfg.methods) {
      for (int h : cfg.max_held) CHECK(success_rate(rows, m, 20, h) == doctest::Approx(1.0));
    }
    for (const auto& r : rows) {
      CHECK(r.failure_cause == "none");
      CHECK(r.replay_ok == "true");
      CHECK(r.evaluations_used <= r.budget);
    }
    CHECK(success_rate(rows, "genetic", 400, 2) == -1.0);
  }
  SUBCASE("rerun is identical except for wall time") {
    CHECK(csv(without_time(run_benchmark(cfg, {&a}))) == csv(without_time(rows)));
  }
  SUBCASE("CSV round trip") {
    std::istringstream in(csv(rows));
    auto back = read_benchmark_csv(in);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].method == rows[i].method);
      CHECK(back[i].success == rows[i].success);
      CHECK(back[i].evaluations_used == rows[i].evaluations_used);
    }
    CHECK(csv(rows).rfind("method,assembly_id,n_parts,budget,M,success,evaluations_used,wall_time_s,failure_cause,replay_ok\n", 0) == 0);
  }
  SUBCASE("table lists every method") {
    const std::string t = success_table(rows);
    for (const auto& m : cfg.methods) CHECK(t.find(m) != std::string::npos);
  }
  SUBCASE("config validation") {
    BenchmarkConfig bad = cfg;
    bad.methods = {"oracle"};
    CHECK_THROWS(bad.validate());
    CHECK_THROWS(benchmark_config_from_json({{"budgets", {0}}}));
  }
}

TEST_CASE("stability ablation CSV") {
  AblationOptions o;
  o.cases = 2;
  o.min_parts = 3;
  o.max_parts = 4;
  o.max_held = {1};
  o.seed = 5;
  o.speedup_parts = 0;
  auto rows = run_stability_ablation(o);
  CHECK(rows.size() == 2);
  std::ostringstream out;
  write_ablation_csv(out, rows);
  const std::string text = out.str();
  CHECK(text.rfind("assembly_id,pose_id,removed_part,n_parts,M,greedy_result,oracle_result,greedy_sims,oracle_sims,", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  for (const auto& r : rows) {
    if (r.greedy_result) CHECK(r.oracle_result);
    CHECK(r.greedy_sims <= r.max_held + 1);
  }
  AblationSummary s = summarize_ablation(rows);
  CHECK(s.total == 2);
  CHECK(s.tp + s.tn + s.fn + s.fp == 2);
  CHECK(s.fp == 0);
}

TEST_CASE("score responses") {
  const std::vector<std::string> parts{"a", "b"};
  CHECK(parse_score_response({{"a", 0.25}, {"b", 0.75}}, parts).at("b") == doctest::Approx(0.75));
  CHECK_THROWS_AS(parse_score_response({{"a", 0.5}}, parts), ScoreError);
  CHECK_THROWS_AS(parse_score_response({{"a", 0.5}, {"b", 0.6}}, parts), ScoreError);
  CHECK_THROWS_AS(parse_score_response({{"a", -0.5}, {"b", 1.5}}, parts), ScoreError);
  CHECK_THROWS_AS(parse_score_response({{"a", 0.5}, {"b", "x"}}, parts), ScoreError);
  CHECK_THROWS_AS(parse_score_response({{"a", 0.5}, {"b", 0.25}, {"c", 0.25}}, parts), ScoreError);
  CHECK_THROWS_AS(parse_score_response(nlohmann::json::array(), parts), ScoreError);
}

TEST_CASE("score sources") {
  const fs::path dir = scratch("scores");
  Assembly a = two_cubes();
  const auto adjacency = assembly_adjacency(a, 0.01);
  NodeSnapshot node = make_snapshot(a, PartSet::full(2), adjacency);
  SUBCASE("scores file lookup by node key") {
    {
      std::ofstream f(dir / "scores.jsonl");
      f << nlohmann::json{{"assembly_id", "two"}, {"node_key", node.node_key}, {"scores", {{"a", 0.9}, {"b", 0.1}}}}.dump()
        << "\n";
    }
    ScoresFileSource src(dir / "scores.jsonl");
    CHECK(src.scores(node).at("a") == doctest::Approx(0.9));
    NodeSnapshot other = node;
    other.node_key = "missing";
    CHECK_THROWS_AS(src.scores(other), ScoreError);
  }
  SUBCASE("malformed scores file") {
    {
      std::ofstream f(dir / "bad.jsonl");
      f << "{not json\n";
    }
    CHECK_THROWS_AS(ScoresFileSource(dir / "bad.jsonl"), ScoreError);
    CHECK_THROWS_AS(ScoresFileSource(dir / "absent.jsonl"), ScoreError);
  }
  SUBCASE("subprocess answers one line per request") {
    const fs::path script = dir / "uniform.sh";
    {
      std::ofstream f(script);
      f << "while read -r line; do echo '{\"a\": 0.5, \"b\": 0.5}'; done\n";
    }
    SubprocessScoreSource src("sh " + script.string(), 5.0);
    for (int i = 0; i < 3; ++i) CHECK(src.scores(node).at("a") == doctest::Approx(0.5));
  }
  SUBCASE("subprocess that exits fails cleanly") {
    SubprocessScoreSource src("true", 2.0);
    CHECK_THROWS_AS(src.scores(node), ScoreError);
    CHECK_THROWS_AS(src.scores(node), ScoreError);
  }
  fs::remove_all(dir);
}

TEST_CASE("node snapshots") {
  Assembly a = test::cube_stack(3);
  const auto adjacency = assembly_adjacency(a, 0.01);
  CHECK(adjacency == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  SUBCASE("JSON round trip") {
    NodeSnapshot s = make_snapshot(a, PartSet::of({0, 2}), adjacency, "stack-3.pc.bin");
    s.next_part = "cube-2";
    NodeSnapshot back = snapshot_from_json(snapshot_to_json(s));
    CHECK(back.assembly_id == s.assembly_id);
    CHECK(back.node_key == s.node_key);
    CHECK(back.parts == std::vector<std::string>{"cube-0", "cube-2"});
    CHECK(back.part_indices == std::vector<int>{0, 2});
    CHECK(back.adjacency.empty());
    CHECK(back.degree == std::vector<int>{0, 0});
    CHECK(back.next_part == s.next_part);
    CHECK(back.pointcloud_ref == "stack-3.pc.bin");
    REQUIRE(back.volume.size() == 2);
    CHECK(back.volume[0] == doctest::Approx(1.0));
  }
  SUBCASE("full node degrees") {
    NodeSnapshot s = make_snapshot(a, PartSet::full(3), adjacency);
    CHECK(s.degree == std::vector<int>{1, 2, 1});
    CHECK(s.adjacency.size() == 2);
  }
  SUBCASE("split is a stable function of the id") {
    CHECK(split_for("stack-3") == split_for("stack-3"));
    int test_count = 0;
    for (int i = 0; i < 200; ++i) {
      const std::string s = split_for("asm-" + std::to_string(i));
      CHECK((s == "train" || s == "test"));
      test_count += s == "test";
    }
    CHECK(test_count > 5);
    CHECK(test_count < 60);
  }
}

TEST_CASE("point-cloud sidecar round trip") {
  const fs::path dir = scratch("pc");
  Assembly a = test::cube_stack(2);
  write_pointcloud_sidecar(dir / "s.pc.bin", a);
  CHECK(fs::file_size(dir / "s.pc.bin") == 2 * 1000 * 3 * sizeof(float));
  auto pts = read_pointcloud_sidecar(dir / "s.pc.bin", 2);
  REQUIRE(pts.size() == 2);
  REQUIRE(pts[1].size() == 1000);
  for (const Vec3& p : pts[1]) {
    CHECK(p.z() >= 1.0 - 1e-5);
    CHECK(p.z() <= 2.0 + 1e-5);
  }
  CHECK_THROWS(read_pointcloud_sidecar(dir / "s.pc.bin", 3));
  fs::remove_all(dir);
}
