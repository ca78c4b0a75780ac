#include <doctest.h>

#include <sstream>

#include "asap/physics.hpp"
#include "helpers.hpp"

using namespace asap;

namespace {

PartPtr unit_cube(const std::string& id = "cube") { return make_part(id, box_mesh(Vec3::Ones()), 1000.0); }

double max_displacement(const Trajectory& t, const std::vector<Vec3>& start) {
  double d = 0.0;
  for (const auto& frame : t)
    for (std::size_t i = 0; i < frame.size(); ++i) d = std::max(d, (frame[i] - start[i]).norm());
  return d;
}

}  // namespace

TEST_CASE("free fall: one implicit step gives v_z = g dt") {
  SimScene scene({}, false);
  scene.add_part(unit_cube(), RigidTransform::from_translation({0, 0, 5}));
  scene.step();
  CHECK(scene.state(0).linear_velocity.z() == doctest::Approx(-0.0981).epsilon(1e-9));
}

TEST_CASE("free fall: velocity matches g t within 2% over 100 steps") {
  SimScene scene({}, false);
  scene.add_part(unit_cube(), RigidTransform::from_translation({0, 0, 100}));
  run(scene, 100);
  CHECK(scene.state(0).linear_velocity.z() == doctest::Approx(-9.81 * 1.0).epsilon(0.02));
}

TEST_CASE("resting cube drifts less than 1 mm") {
  SimScene scene;
  scene.add_part(unit_cube(), RigidTransform::from_translation({0, 0, 0.5}));
  const auto start = scene.positions();
  CHECK(max_displacement(run(scene, 100), start) < 1e-3);
  CHECK(max_displacement(run(scene, 400), start) < 1e-3);
}

TEST_CASE("held cube in midair never moves") {
  SimScene scene;
  scene.add_part(unit_cube(), RigidTransform::from_translation({0, 0, 3}), true);
  const Vec3 start = scene.state(0).position;
  const Quat q = scene.state(0).orientation;
  for (int i = 0; i < 50; ++i) {
    scene.step();
    CHECK(scene.state(0).position == start);
    CHECK(scene.state(0).orientation.coeffs() == q.coeffs());
  }
}

TEST_CASE("stable two-cube stack stays within d_th") {
  SimScene scene;
  scene.add_part(unit_cube("a"), RigidTransform::from_translation({0, 0, 0.5}));
  scene.add_part(unit_cube("b"), RigidTransform::from_translation({0, 0, 1.5}));
  const auto start = scene.positions();
  const double d_th = 0.01 * std::sqrt(1 + 1 + 4);
  CHECK(max_displacement(run(scene, 200), start) < d_th);
}

TEST_CASE("overhanging top cube topples") {
  SimScene scene;
  scene.add_part(unit_cube("a"), RigidTransform::from_translation({0, 0, 0.5}));
  scene.add_part(unit_cube("b"), RigidTransform::from_translation({0.7, 0, 1.5}));
  const Vec3 start = scene.state(1).position;
  run(scene, 200);
  const double d_th = 0.01 * std::sqrt(1.7 * 1.7 + 1 + 4);
  CHECK((scene.state(1).position - start).norm() > d_th);
}

TEST_CASE("empty scene gives an empty trajectory") {
  SimScene scene;
  Trajectory t = run(scene, 10);
  CHECK(t.empty());
}

TEST_CASE("disconnection predicate") {
  SUBCASE("floating above another cube") {
    SimScene scene;
    scene.add_part(unit_cube("a"), RigidTransform::from_translation({0, 0, 0.5}));
    scene.add_part(unit_cube("b"), RigidTransform::from_translation({0, 0, 2.5}));
    CHECK(scene.is_disconnected("b"));
  }
  SUBCASE("resting on the plane") {
    SimScene scene;
    scene.add_part(unit_cube("a"), RigidTransform::from_translation({0, 0, 0.5}));
    CHECK_FALSE(scene.is_disconnected("a"));
  }
  SUBCASE("1 mm gap under a 2 cm threshold") {
    SimScene scene({}, false);
    scene.add_part(unit_cube("a"), RigidTransform::from_translation({0, 0, 0}));
    scene.add_part(unit_cube("b"), RigidTransform::from_translation({1.001, 0, 0}));
    CHECK(scene.contact_threshold() == doctest::Approx(0.02));
    CHECK_FALSE(scene.is_disconnected("b"));
  }
}

TEST_CASE("property: determinism is bit-exact") {
  auto simulate = [] {
    SimScene scene;
    scene.add_part(unit_cube("a"), RigidTransform::from_translation({0, 0, 0.5}));
    scene.add_part(unit_cube("b"), RigidTransform{Quat(Eigen::AngleAxisd(0.3, Vec3::UnitZ())), Vec3(0.4, 0.1, 1.52)});
    return run(scene, 150);
  };
  const Trajectory a = simulate();
  const Trajectory b = simulate();
  REQUIRE(a.size() == b.size());
  for (std::size_t s = 0; s < a.size(); ++s)
    for (std::size_t i = 0; i < a[s].size(); ++i) CHECK(a[s][i] == b[s][i]);
}

TEST_CASE("property: zero gravity fixed point") {
  SimConfig cfg;
  cfg.gravity = Vec3::Zero();
  SimScene scene(cfg, true);
  scene.add_part(unit_cube("a"), RigidTransform::from_translation({0, 0, 0.5}));
  scene.add_part(unit_cube("b"), RigidTransform::from_translation({1, 0, 0.5}));
  scene.add_part(unit_cube("c"), RigidTransform::from_translation({0, 0, 3}));
  const auto start = scene.positions();
  const Trajectory t = run(scene, 50);
  for (const auto& f : t)
    for (std::size_t i = 0; i < f.size(); ++i) CHECK((f[i] - start[i]).norm() == 0.0);
}

TEST_CASE("property: resting depth within the penalty equilibrium bound") {
  SimScene scene;
  scene.add_part(unit_cube(), RigidTransform::from_translation({0, 0, 0.5}));
  run(scene, 300);
  // m g spread over the samples touching the plane; bound against one sample.
  const double bound = 2.0 * 1000.0 * 9.81 / scene.config().contact_stiffness;
  CHECK(scene.max_contact_depth(0) <= bound);
  CHECK(0.5 - scene.state(0).position.z() <= bound);
}

TEST_CASE("held parts stay put while a free part lands on them") {
  SimScene scene;
  scene.add_part(unit_cube("base"), RigidTransform::from_translation({0, 0, 1.5}), true);
  scene.add_part(unit_cube("top"), RigidTransform::from_translation({0, 0, 2.6}));
  const Vec3 p = scene.state(0).position;
  run(scene, 100);
  CHECK(scene.state(0).position == p);
  CHECK(scene.state(1).position.z() > 2.45);
}

TEST_CASE("snapshot export has one record per part") {
  SimScene scene;
  scene.add_part(unit_cube("a"), RigidTransform::from_translation({0, 0, 0.5}));
  scene.add_part(unit_cube("b"), RigidTransform::from_translation({0, 0, 1.5}));
  std::ostringstream out;
  write_snapshot_jsonl(out, scene, 7);
  std::istringstream in(out.str());
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j.at("step") == 7);
    CHECK(j.at("position").size() == 3);
    CHECK(j.at("quaternion").size() == 4);
    ++n;
  }
  CHECK(n == 2);
}

TEST_CASE("config validation") {
  SimConfig c;
  c.dt = 0.0;
  CHECK_THROWS(c.validate());
  c = {};
  c.friction_coeff = -1;
  CHECK_THROWS(c.validate());
}
