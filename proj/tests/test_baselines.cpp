#include <doctest.h>

#include <set>

#include "asap/baselines.hpp"
#include "asap/replay.hpp"
#include "helpers.hpp"

using namespace asap;

namespace {

Assembly two_cubes() {
  return test::boxes("two", {{"a", Vec3::Ones(), Vec3(0, 0, 0.5)}, {"b", Vec3::Ones(), Vec3(2, 0, 0.5)}});
}

Assembly caged() {
  std::set<std::array<int, 3>> vox;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      for (int z = 0; z < 5; ++z) {
        const bool interior = x > 0 && x < 4 && y > 0 && y < 4 && z > 0 && z < 4;
        if (!interior) vox.insert({x, y, z});
      }
  Assembly a;
  a.id = "caged";
  a.parts.push_back({make_part("cage", voxel_mesh(vox, 0.2), 1000.0), RigidTransform{}});
  a.parts.push_back({make_part("inner", box_mesh(Vec3::Constant(0.4)), 1000.0),
                     RigidTransform::from_translation({0.5, 0.5, 0.4})});
  return a;
}

/// Plank balanced on a base cube with a heavy weight on each end: removing
/// any single part leaves the rest unable to stand without holds.
Assembly balance() {
  return test::boxes("balance", {{"base", Vec3::Ones(), Vec3(0, 0, 0.5)},
                                 {"plank", Vec3(3, 1, 0.2), Vec3(0, 0, 1.1)},
                                 {"w1", Vec3::Constant(0.5), Vec3(-1.25, 0, 1.45), 8000.0},
                                 {"w2", Vec3::Constant(0.5), Vec3(1.25, 0, 1.45), 8000.0}});
}

BaselineOptions upright(int budget, std::uint64_t seed = 1) {
  BaselineOptions o;
  o.budget = budget;
  o.seed = seed;
  o.feasibility.upright_only = true;
  o.feasibility.max_held = 0;
  return o;
}

std::vector<std::string> removal_order(const SequencePlan& plan) {
  auto order = plan.order();
  return {order.rbegin(), order.rend() - 1};
}

}  // namespace

TEST_CASE("evaluate_sequence fitness") {
  SUBCASE("two cubes: any order is complete") {
    Assembly a = two_cubes();
    BaselineOptions o;
    o.budget = 50;
    for (const std::vector<int>& order : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
      auto e = evaluate_sequence(a, order, o);
      CHECK(e.fitness == 1);
      CHECK(e.complete(2));
      CHECK_FALSE(e.exhausted);
    }
  }
  SUBCASE("4-stack: bottom-first 0, top-down 3") {
    Assembly a = test::cube_stack(4);
    auto bottom = evaluate_sequence(a, {0, 1, 2, 3}, upright(50));
    CHECK(bottom.fitness == 0);
    auto top = evaluate_sequence(a, {3, 2, 1, 0}, upright(50));
    CHECK(top.fitness == 3);
    CHECK(top.complete(4));
    REQUIRE(top.steps.size() == 3);
    CHECK(top.steps[0].part == 3);
  }
  SUBCASE("budget runs out mid-evaluation") {
    Assembly a = test::cube_stack(4);
    auto e = evaluate_sequence(a, {3, 2, 1, 0}, upright(2));
    CHECK(e.exhausted);
    CHECK(e.fitness == 2);
  }
}

TEST_CASE("random permutation search") {
  SUBCASE("two parts succeed quickly") {
    Assembly a = two_cubes();
    BaselineOptions o;
    o.budget = 50;
    auto r = random_permutation_search(a, o);
    REQUIRE(r.success());
    CHECK(r.evaluations <= 5);
    CHECK(r.plan->method == "random-permutation");
    CHECK(replay_plan(a, *r.plan, o.feasibility).ok);
  }
  SUBCASE("caged part always fails") {
    Assembly a = caged();
    BaselineOptions o;
    o.budget = 30;
    o.feasibility.path.budget = 300;
    for (std::uint64_t seed : {1u, 2u}) {
      o.seed = seed;
      auto r = random_permutation_search(a, o);
      CHECK_FALSE(r.success());
      CHECK(r.evaluations <= 30);
    }
  }
  SUBCASE("fixed seed is reproducible") {
    Assembly a = test::cube_stack(4);
    auto r1 = random_permutation_search(a, upright(100, 7));
    auto r2 = random_permutation_search(a, upright(100, 7));
    CHECK(r1.success() == r2.success());
    CHECK(r1.evaluations == r2.evaluations);
    if (r1.success() && r2.success()) CHECK(r1.plan->order() == r2.plan->order());
  }
}

TEST_CASE("genetic search") {
  SUBCASE("feasible initial population returns in generation 0") {
    Assembly a = two_cubes();
    BaselineOptions o;
    o.budget = 50;
    auto r = genetic_search(a, o, {}, nullptr, {{0, 1}, {1, 0}});
    REQUIRE(r.success());
    CHECK(r.best_fitness_per_generation.size() <= 1);
    CHECK(r.evaluations <= 2);
  }
  SUBCASE("4-stack converges to top-down within 400") {
    Assembly a = test::cube_stack(4);
    auto r = genetic_search(a, upright(400, 3));
    REQUIRE(r.success());
    CHECK(r.evaluations <= 400);
    CHECK(removal_order(*r.plan) == std::vector<std::string>{"cube-3", "cube-2", "cube-1"});
    for (std::size_t g = 1; g < r.best_fitness_per_generation.size(); ++g) {
      CHECK(r.best_fitness_per_generation[g] >= r.best_fitness_per_generation[g - 1]);
    }
  }
  SUBCASE("best fitness never decreases on a hard instance") {
    Assembly a = caged();
    BaselineOptions o;
    o.budget = 20;
    o.feasibility.path.budget = 300;
    auto r = genetic_search(a, o);
    CHECK_FALSE(r.success());
    for (std::size_t g = 1; g < r.best_fitness_per_generation.size(); ++g) {
      CHECK(r.best_fitness_per_generation[g] >= r.best_fitness_per_generation[g - 1]);
    }
  }
}

TEST_CASE("gravity-free search") {
  SUBCASE("two parts: path phase then stability post-check") {
    Assembly a = two_cubes();
    BaselineOptions o;
    o.budget = 50;
    auto r = gravity_free_search(a, o);
    REQUIRE(r.success());
    CHECK(r.plan->method == "gravity-free");
    CHECK(replay_plan(a, *r.plan, o.feasibility).ok);
  }
  SUBCASE("path-feasible orders that cannot stand with M = 0 fail") {
    Assembly a = balance();
    BaselineOptions o = upright(60);
    // Oracle: every single removal leaves an unstable remainder.
    SequenceEvaluator ev(a, o, nullptr);
    const PartSet all = PartSet::full(a.size());
    const auto pose = ev.checker().poses(all, std::nullopt).at(0);
    CHECK(ev.checker().stability(all, pose.transform, 0).stable);
    int path_feasible = 0;
    for (int p = 0; p < 4; ++p) {
      const HoldPlan h = check_stable_combinatorial(ev.checker().stability_query(all.without(p), pose.transform, 0));
      CHECK_FALSE(h.stable);
      path_feasible += ev.free_path(all, p).value_or(false);
    }
    CHECK(path_feasible > 0);
    auto r = gravity_free_search(a, o);
    CHECK_FALSE(r.success());
    CHECK(r.best_fitness == 0);
  }
  SUBCASE("fixed seed is reproducible") {
    Assembly a = test::cube_stack(3);
    auto r1 = gravity_free_search(a, upright(60, 5));
    auto r2 = gravity_free_search(a, upright(60, 5));
    CHECK(r1.success() == r2.success());
    CHECK(r1.evaluations == r2.evaluations);
    if (r1.success() && r2.success()) CHECK(r1.plan->order() == r2.plan->order());
  }
}

TEST_CASE("order crossover (OX1)") {
  const std::vector<int> p1{0, 1, 2, 3, 4, 5, 6, 7, 8};
  const std::vector<int> p2{8, 2, 6, 7, 1, 5, 4, 0, 3};
  const auto child = order_crossover(p1, p2, 3, 7);
  CHECK(child == std::vector<int>{2, 7, 1, 3, 4, 5, 6, 0, 8});
  SUBCASE("children are permutations") {
    for (std::size_t a = 0; a < 9; ++a)
      for (std::size_t b = a; b <= 9; ++b) {
        auto c = order_crossover(p1, p2, a, b);
        std::set<int> s(c.begin(), c.end());
        CHECK(s.size() == 9);
        for (std::size_t i = a; i < b; ++i) CHECK(c[i] == p1[i]);
      }
  }
}

TEST_CASE("property: shared budget accounting") {
  Assembly a = test::cube_stack(4);
  for (int budget : {1, 3, 7}) {
    BaselineOptions o;
    o.budget = budget;
    o.seed = 11;
    CHECK(random_permutation_search(a, o).evaluations <= budget);
    CHECK(genetic_search(a, o).evaluations <= budget);
    CHECK(gravity_free_search(a, o).evaluations <= budget);
  }
}
