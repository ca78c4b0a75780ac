#include <doctest.h>

#include "asap/path_planner.hpp"
#include "helpers.hpp"

using namespace asap;

namespace {

PlacedPart at(PartPtr p, const Vec3& t) { return {std::move(p), RigidTransform::from_translation(t)}; }

/// Solid 3×3×2 voxel slab with the top-center voxel removed, voxel 0.25.
TriMesh holed_board() {
  std::set<std::array<int, 3>> vox;
  for (int x = 0; x < 3; ++x)
    for (int y = 0; y < 3; ++y)
      for (int z = 0; z < 2; ++z)
        if (!(x == 1 && y == 1 && z == 1)) vox.insert({x, y, z});
  return voxel_mesh(vox, 0.25);
}

/// Hollow 5×5×5 voxel box with a closed 3×3×3 cavity, voxel 0.2.
TriMesh closed_cage() {
  std::set<std::array<int, 3>> vox;
  for (int x = 0; x < 5; ++x)
    for (int y = 0; y < 5; ++y)
      for (int z = 0; z < 5; ++z) {
        const bool interior = x > 0 && x < 4 && y > 0 && y < 4 && z > 0 && z < 4;
        if (!interior) vox.insert({x, y, z});
      }
  return voxel_mesh(vox, 0.2);
}

Vec3 net_displacement(const MotionPlan& m) { return m.waypoints.back().translation - m.waypoints.front().translation; }

}  // namespace

TEST_CASE("unobstructed cube lifts straight up") {
  PartPtr a = make_part("a", box_mesh(Vec3::Ones()), 1000.0);
  PartPtr b = make_part("b", box_mesh(Vec3::Ones()), 1000.0);
  std::vector<PlacedPart> rest{at(b, {1, 0, 0.5})};
  const PlacedPart mover = at(a, {0, 0, 0.5});
  std::string diag;
  auto plan = check_assemblable(rest, mover, Quat::Identity(), {}, &diag);
  REQUIRE_MESSAGE(plan, diag);
  const Vec3 d = net_displacement(*plan);
  CHECK(d.z() > 0.0);
  CHECK(std::abs(d.x()) < 1e-12);
  CHECK(std::abs(d.y()) < 1e-12);
  CHECK(plan->part_id == "a");
  CHECK(is_disassembled(rest, {a, plan->waypoints.back()}));
}

TEST_CASE("peg in a blind hole escapes along +z") {
  PartPtr board = make_part("board", holed_board(), 1000.0);
  PartPtr peg = make_part("peg", box_mesh(Vec3(0.25, 0.25, 0.5)), 1000.0);
  std::vector<PlacedPart> rest{at(board, Vec3::Zero())};
  // Bottom of the peg sits on the hole floor (z = 0.25); top protrudes.
  const PlacedPart mover = at(peg, {0.375, 0.375, 0.5});
  PathConfig cfg;
  std::string diag;
  auto plan = check_assemblable(rest, mover, Quat::Identity(), cfg, &diag);
  REQUIRE_MESSAGE(plan, diag);
  const Vec3 d = net_displacement(*plan);
  CHECK(d.z() > 0.0);
  CHECK(d.z() > 2.0 * std::hypot(d.x(), d.y()));
  const double cell = std::max(board->cell_size(), peg->cell_size());
  CHECK(motion_max_penetration(rest, *peg, plan->waypoints, 0.5 * cell) <= 2 * cell);
}

TEST_CASE("caged part is infeasible") {
  PartPtr cage = make_part("cage", closed_cage(), 1000.0);
  PartPtr inner = make_part("inner", box_mesh(Vec3::Constant(0.4)), 1000.0);
  std::vector<PlacedPart> rest{at(cage, Vec3::Zero())};
  const PlacedPart mover = at(inner, {0.5, 0.5, 0.5});
  for (int budget : {200, 2000, 10000}) {
    PathConfig cfg;
    cfg.budget = budget;
    std::string diag;
    CHECK_FALSE(check_assemblable(rest, mover, Quat::Identity(), cfg, &diag));
    CHECK_FALSE(diag.empty());
  }
}

TEST_CASE("reverse_to_assembly reverses waypoints and negates forces") {
  MotionPlan m;
  m.part_id = "p";
  m.waypoints = {RigidTransform::from_translation({0, 0, 0}), RigidTransform::from_translation({0, 0, 1}),
                 RigidTransform::from_translation({0, 1, 1})};
  m.force_sequence = {Vec3(0, 0, 1), Vec3(0, 1, 0)};
  MotionPlan r = reverse_to_assembly(m);
  REQUIRE(r.waypoints.size() == 3);
  CHECK(r.waypoints[0].translation == Vec3(0, 1, 1));
  CHECK(r.waypoints[1].translation == Vec3(0, 0, 1));
  CHECK(r.waypoints[2].translation == Vec3(0, 0, 0));
  REQUIRE(r.force_sequence.size() == 2);
  CHECK(r.force_sequence[0] == Vec3(0, -1, 0));
  CHECK(r.force_sequence[1] == Vec3(0, 0, -1));
  CHECK(reverse_to_assembly(r).waypoints[0].translation == m.waypoints[0].translation);
}

TEST_CASE("search directions: 26 unit vectors, axes first") {
  const auto& d = search_directions();
  REQUIRE(d.size() == 26);
  for (const auto& v : d) CHECK(v.norm() == doctest::Approx(1.0));
  for (int i = 0; i < 6; ++i) CHECK(d[i].cwiseAbs().maxCoeff() == 1.0);
}

TEST_CASE("force search without the shortcut") {
  PartPtr board = make_part("board", holed_board(), 1000.0);
  PartPtr peg = make_part("peg", box_mesh(Vec3(0.25, 0.25, 0.5)), 1000.0);
  std::vector<PlacedPart> rest{at(board, Vec3::Zero())};
  const PlacedPart mover = at(peg, {0.375, 0.375, 0.5});
  PathConfig cfg;
  cfg.straight_line_shortcut = false;
  auto a = check_assemblable(rest, mover, Quat::Identity(), cfg);
  auto b = check_assemblable(rest, mover, Quat::Identity(), cfg);
  REQUIRE(a);
  REQUIRE(b);
  SUBCASE("budget is respected") { CHECK(a->budget_used <= cfg.budget); }
  SUBCASE("forces pair with segments") { CHECK(a->force_sequence.size() + 1 == a->waypoints.size()); }
  SUBCASE("determinism") {
    REQUIRE(a->waypoints.size() == b->waypoints.size());
    for (std::size_t i = 0; i < a->waypoints.size(); ++i) {
      CHECK(a->waypoints[i].translation == b->waypoints[i].translation);
      CHECK(a->waypoints[i].rotation.coeffs() == b->waypoints[i].rotation.coeffs());
    }
  }
  SUBCASE("collision-free at every waypoint") {
    const double cell = std::max(board->cell_size(), peg->cell_size());
    for (const auto& w : a->waypoints) CHECK(pose_penetration(rest, *peg, w, true) <= 2 * cell);
  }
  SUBCASE("clean escape") { CHECK(is_disassembled(rest, {peg, a->waypoints.back()})); }
}
