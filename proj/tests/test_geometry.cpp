#include <doctest.h>

#include <random>
#include <sstream>

#include "asap/convex_hull.hpp"
#include "asap/mesh_io.hpp"
#include "asap/sdf.hpp"
#include "helpers.hpp"

using namespace asap;

namespace {

const char* kCubeTris = R"(# unit cube centered at the origin
v -0.5 -0.5 -0.5
v  0.5 -0.5 -0.5
v  0.5  0.5 -0.5
v -0.5  0.5 -0.5
v -0.5 -0.5  0.5
v  0.5 -0.5  0.5
v  0.5  0.5  0.5
v -0.5  0.5  0.5
f 1 3 2
f 1 4 3
f 5 6 7
f 5 7 8
f 1 2 6
f 1 6 5
f 2 3 7
f 2 7 6
f 3 4 8
f 3 8 7
f 4 1 5
f 4 5 8
)";

const char* kCubeQuads = R"(v -0.5 -0.5 -0.5
v  0.5 -0.5 -0.5
v  0.5  0.5 -0.5
v -0.5  0.5 -0.5
v -0.5 -0.5  0.5
v  0.5 -0.5  0.5
v  0.5  0.5  0.5
v -0.5  0.5  0.5
f 1 4 3 2
f 5 6 7 8
f 1 2 6 5
f 2 3 7 6
f 3 4 8 7
f 4/1 1/2 5//3 8
)";

TriMesh parse(const char* text) {
  std::istringstream in(text);
  return parse_obj(in);
}

}  // namespace

TEST_CASE("OBJ: cube with 12 triangles is watertight") {
  TriMesh m = parse(kCubeTris);
  CHECK(m.vertices.size() == 8);
  CHECK(m.triangles.size() == 12);
  CHECK(m.watertight);
}

TEST_CASE("OBJ: single triangle is open") {
  TriMesh m = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  CHECK(m.triangles.size() == 1);
  CHECK_FALSE(m.watertight);
  EdgeDiagnostics d = analyze_edges(m);
  CHECK(d.boundary_edges.size() == 3);
}

TEST_CASE("OBJ: quad faces are fan-triangulated") {
  TriMesh m = parse(kCubeQuads);
  CHECK(m.triangles.size() == 12);
  CHECK(m.watertight);
}

TEST_CASE("OBJ: malformed input") {
  CHECK_THROWS_AS(parse("v 0 0 0\nf 1 2 9\n"), MeshError);
  CHECK_THROWS_AS(parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 x 3\n"), MeshError);
  CHECK_THROWS_AS(parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n"), MeshError);
  CHECK_THROWS_AS(parse("# nothing\n"), MeshError);
}

TEST_CASE("OBJ: write then parse round trip") {
  TriMesh a = box_mesh(Vec3(0.3, 0.7, 1.1));
  std::stringstream s;
  write_obj(s, a);
  TriMesh b = parse_obj(s);
  REQUIRE(b.vertices.size() == a.vertices.size());
  CHECK(b.triangles == a.triangles);
  for (std::size_t i = 0; i < a.vertices.size(); ++i) CHECK(b.vertices[i] == a.vertices[i]);
  CHECK(mesh_hash(a) == mesh_hash(b));
}

TEST_CASE("OBJ: inconsistent winding is not watertight") {
  TriMesh m = parse(kCubeTris);
  std::swap(m.triangles[0][1], m.triangles[0][2]);
  validate_mesh(m);
  CHECK_FALSE(m.watertight);
  CHECK_FALSE(analyze_edges(m).inconsistent_edges.empty());
}

TEST_CASE("mass properties: unit cube") {
  TriMesh m = parse(kCubeTris);
  MassProperties p = mass_properties(m, 1.0);
  CHECK(p.volume == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p.center_of_mass.norm() < 1e-12);
  for (int i = 0; i < 3; ++i) {
    CHECK(p.inertia(i, i) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    for (int j = 0; j < 3; ++j) {
      if (i != j) CHECK(std::abs(p.inertia(i, j)) < 1e-12);
    }
  }
}

TEST_CASE("mass properties: translation equivariance") {
  TriMesh m = parse(kCubeTris);
  MassProperties p0 = mass_properties(m, 1.0);
  MassProperties p1 = mass_properties(transformed(m, RigidTransform::from_translation({5, 0, 0})), 1.0);
  CHECK(p1.volume == doctest::Approx(p0.volume).epsilon(1e-12));
  CHECK((p1.center_of_mass - Vec3(5, 0, 0)).norm() < 1e-9);
  CHECK((p1.inertia - p0.inertia).norm() < 1e-9);
}

TEST_CASE("mass properties: random convex hull vs Monte Carlo") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts;
  for (int i = 0; i < 20; ++i) pts.emplace_back(u(rng), u(rng), u(rng));
  ConvexHull hull = convex_hull(pts);
  TriMesh m;
  m.vertices = hull.points;
  m.triangles = hull.triangles;
  validate_mesh(m);
  REQUIRE(m.watertight);
  const double volume = mass_properties(m, 1.0).volume;

  const Aabb box = m.bounds();
  std::uniform_real_distribution<double> ux(box.min.x(), box.max.x()), uy(box.min.y(), box.max.y()),
      uz(box.min.z(), box.max.z());
  const int samples = 1'000'000;
  int inside = 0;
  for (int s = 0; s < samples; ++s) {
    const Vec3 p(ux(rng), uy(rng), uz(rng));
    bool in = true;
    for (std::size_t t = 0; t < hull.triangles.size() && in; ++t) {
      in = hull.normals[t].dot(p - hull.points[hull.triangles[t][0]]) <= 0.0;
    }
    inside += in;
  }
  const double mc = box.extent().prod() * inside / samples;
  CHECK(volume == doctest::Approx(mc).epsilon(0.01));
}

TEST_CASE("property: volume equals signed tetra sum and survives winding-preserving reorder") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::uniform_real_distribution<double> u(0.1, 2.0);
    TriMesh m = box_mesh(Vec3(u(rng), u(rng), u(rng)));
    const double v = mass_properties(m, 1.0).volume;
    CHECK(v == doctest::Approx(signed_volume(m)).epsilon(1e-9));
    for (auto& t : m.triangles) std::rotate(t.begin(), t.begin() + (rng() % 3), t.end());
    std::shuffle(m.triangles.begin(), m.triangles.end(), rng);
    CHECK(mass_properties(m, 1.0).volume == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("SDF: unit cube center and outside point") {
  TriMesh m = box_mesh(Vec3::Ones());
  const double cell = default_cell_size(m);
  SdfGrid g = build_sdf(m, cell);
  CHECK(std::abs(g.value(Vec3::Zero()) + 0.5) <= cell);
  CHECK(std::abs(g.value(Vec3(1, 0, 0)) - 0.5) <= cell);
}

TEST_CASE("SDF: sphere matches analytic distance outside") {
  const double r = 0.5;
  TriMesh m = test::icosphere(r, 4);
  const double cell = default_cell_size(m);
  SdfGrid g = build_sdf(m, cell, 12);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> d(r + 0.02, r + 0.1);
  for (int i = 0; i < 200; ++i) {
    Vec3 dir(n(rng), n(rng), n(rng));
    dir.normalize();
    const double dist = d(rng);
    CHECK(std::abs(g.value(dist * dir) - (dist - r)) <= 2 * cell);
  }
}

TEST_CASE("SDF: signs agree with point-in-box on every node") {
  for (const Vec3 size : {Vec3(1, 1, 1), Vec3(0.6, 0.6, 0.6), Vec3(2, 1, 1), Vec3(0.25, 0.25, 0.5)}) {
    TriMesh m = box_mesh(size);
    for (double cell : {0.01, 0.011, 0.0125}) {
      SdfGrid g = build_sdf(m, cell);
      int bad = 0;
      for (int i = 0; i < g.dims[0]; ++i)
        for (int j = 0; j < g.dims[1]; ++j)
          for (int k = 0; k < g.dims[2]; ++k) {
            const Vec3 p = g.node(i, j, k);
            const bool inside = ((p.cwiseAbs() - 0.5 * size).array() < 0).all();
            const double v = g.at(i, j, k);
            if (std::abs(v) > 1e-6 && inside != (v < 0)) ++bad;
          }
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("property: SDF gradient has unit length away from the surface") {
  TriMesh m = test::icosphere(0.5, 3);
  const double cell = default_cell_size(m);
  SdfGrid g = build_sdf(m, cell, 10);
  std::mt19937_64 rng(9);
  const Aabb box = g.bounds();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  const double h = 0.5 * cell;
  while (checked < 200) {
    const Vec3 p = box.min + (box.max - box.min).cwiseProduct(Vec3(u(rng), u(rng), u(rng)));
    double v = 0.0;
    if (!g.sample(p, v) || std::abs(v) <= 2 * cell) continue;
    if (!box.inflated(-2 * h).contains(p)) continue;
    Vec3 grad;
    for (int a = 0; a < 3; ++a) {
      Vec3 e = Vec3::Zero();
      e[a] = h;
      grad[a] = (g.value(p + e) - g.value(p - e)) / (2 * h);
    }
    CHECK(grad.norm() == doctest::Approx(1.0).epsilon(0.1));
    ++checked;
  }
}

TEST_CASE("SDF: binary sidecar round trip") {
  TriMesh m = box_mesh(Vec3(0.5, 0.4, 0.3));
  SdfGrid g = build_sdf(m, 0.01);
  const auto path = std::filesystem::temp_directory_path() / "asap_test_grid.asdf";
  save_sdf(path, g);
  SdfGrid h = load_sdf(path);
  CHECK(h.dims == g.dims);
  CHECK(h.cell_size == g.cell_size);
  CHECK(h.origin == g.origin);
  CHECK(h.values == g.values);
  std::filesystem::remove(path);
}

TEST_CASE("SDF: non-watertight mesh is rejected") {
  TriMesh m = parse("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n");
  CHECK_THROWS_AS(build_sdf(m, 0.01), MeshError);
  CHECK_THROWS_AS(make_part("open", m, 1000.0), MeshError);
}

TEST_CASE("penetration: disjoint cubes give no contacts") {
  PartPtr a = make_part("a", box_mesh(Vec3::Ones()), 1000.0);
  PartPtr b = make_part("b", box_mesh(Vec3::Ones()), 1000.0);
  auto c = penetration_query(*a, RigidTransform::identity(), *b, RigidTransform::from_translation({2, 0, 0}));
  CHECK(c.empty());
}

TEST_CASE("penetration: 0.1 m overlap along x") {
  PartPtr a = make_part("a", box_mesh(Vec3::Ones()), 1000.0);
  PartPtr b = make_part("b", box_mesh(Vec3::Ones()), 1000.0);
  const RigidTransform pa = RigidTransform::identity();
  const RigidTransform pb = RigidTransform::from_translation({0.9, 0, 0});
  auto c = penetration_query(*a, pa, *b, pb);
  REQUIRE_FALSE(c.empty());
  double depth = 0.0;
  for (const auto& r : c) depth = std::max(depth, r.depth);
  const double cell = a->cell_size();
  CHECK(std::abs(depth - 0.1) <= 2 * cell);
  // Deep samples sit away from the overlap slab's edges, where the normal is ±x.
  for (const auto& r : c) {
    if (r.depth < 0.5 * depth) continue;
    if (std::abs(r.point.y()) > 0.4 || std::abs(r.point.z()) > 0.4) continue;
    CHECK(std::abs(std::abs(r.normal.x()) - 1.0) < 1e-2);
    CHECK(r.normal.x() < 0.0);
  }
}

TEST_CASE("penetration: touching cubes stay within one cell") {
  PartPtr a = make_part("a", box_mesh(Vec3::Ones()), 1000.0);
  PartPtr b = make_part("b", box_mesh(Vec3::Ones()), 1000.0);
  for (const auto& r : penetration_query(*a, RigidTransform::identity(), *b, RigidTransform::from_translation({1, 0, 0}))) {
    CHECK(r.depth <= a->cell_size());
  }
}

TEST_CASE("property: penetration max depth is symmetric") {
  PartPtr a = make_part("a", box_mesh(Vec3(1.0, 0.8, 0.6)), 1000.0);
  PartPtr b = make_part("b", test::icosphere(0.4, 3), 1000.0);
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int i = 0; i < 20; ++i) {
    const RigidTransform pa{Quat::UnitRandom(), Vec3::Zero()};
    const RigidTransform pb = RigidTransform::from_translation({u(rng), u(rng), u(rng)});
    const double ab = max_penetration(*a, pa, *b, pb);
    const double ba = max_penetration(*b, pb, *a, pa);
    CHECK(std::abs(ab - ba) <= 2 * std::max(a->cell_size(), b->cell_size()));
  }
}

TEST_CASE("convex hull: cube facets merge into six squares") {
  ConvexHull hull = convex_hull(box_mesh(Vec3::Ones()).vertices);
  auto facets = merge_facets(hull);
  CHECK(facets.size() == 6);
  for (const auto& f : facets) {
    CHECK(f.area == doctest::Approx(1.0));
    CHECK(f.polygon.size() == 4);
  }
  CHECK_THROWS_AS(convex_hull({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}}), DegenerateHull);
}

TEST_CASE("voxel mesh: union of voxels is watertight with exact volume") {
  std::set<std::array<int, 3>> vox{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {1, 1, 1}};
  TriMesh m = voxel_mesh(vox, 0.5);
  CHECK(m.watertight);
  CHECK(mass_properties(m, 1.0).volume == doctest::Approx(4 * 0.125));
}
