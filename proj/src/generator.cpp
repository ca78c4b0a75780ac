#include "asap/generator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include "asap/mesh_io.hpp"

namespace asap {

using Voxel = std::array<int, 3>;
using VoxelSet = std::set<Voxel>;

TriMesh voxel_mesh(const VoxelSet& voxels, double voxel, const Vec3& origin) {
  TriMesh mesh;
  std::map<Voxel, int> corner_index;
  auto corner = [&](const Voxel& c) {
    auto [it, inserted] = corner_index.try_emplace(c, static_cast<int>(mesh.vertices.size()));
    if (inserted) mesh.vertices.push_back(origin + voxel * Vec3(c[0], c[1], c[2]));
    return it->second;
  };
  for (const Voxel& v : voxels) {
    for (int a = 0; a < 3; ++a) {
      const int b = (a + 1) % 3, c = (a + 2) % 3;
      for (int s : {0, 1}) {
        Voxel n = v;
        n[a] += s ? 1 : -1;
        if (voxels.count(n)) continue;
        std::array<int, 4> q{};
        const int uv[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
        for (int k = 0; k < 4; ++k) {
          Voxel p = v;
          p[a] += s;
          p[b] += uv[k][0];
          p[c] += uv[k][1];
          q[k] = corner(p);
        }
        // (b, c) order is counter-clockwise seen from +a.
        if (s) {
          mesh.triangles.push_back({q[0], q[1], q[2]});
          mesh.triangles.push_back({q[0], q[2], q[3]});
        } else {
          mesh.triangles.push_back({q[0], q[2], q[1]});
          mesh.triangles.push_back({q[0], q[3], q[2]});
        }
      }
    }
  }
  validate_mesh(mesh);
  return mesh;
}

TriMesh box_mesh(const Vec3& size) {
  TriMesh mesh = voxel_mesh({{0, 0, 0}}, 1.0, Vec3::Zero());
  for (Vec3& v : mesh.vertices) v = (v - Vec3::Constant(0.5)).cwiseProduct(size);
  return mesh;
}

Family family_from_string(const std::string& name) {
  for (Family f : all_families()) {
    if (to_string(f) == name) return f;
  }
  throw std::invalid_argument("unknown family '" + name + "'");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::stack: return "stack";
    case Family::wall: return "wall";
    case Family::peg_board: return "peg-board";
    case Family::ring: return "ring";
    case Family::random_lego: return "random-lego";
  }
  return "unknown";
}

const std::vector<Family>& all_families() {
  static const std::vector<Family> families{Family::stack, Family::wall, Family::peg_board, Family::ring,
                                            Family::random_lego};
  return families;
}

namespace {

struct Piece {
  std::string id;
  TriMesh mesh;  // centered on its bounding box
  RigidTransform assembled;
};

std::string padded(const std::string& prefix, int i, int n) {
  std::ostringstream os;
  os << prefix << '-' << std::setw(n > 10 ? 2 : 1) << std::setfill('0') << i;
  return os.str();
}

/// Recenters a mesh on its bounds; returns the offset that was removed.
Vec3 recenter(TriMesh& mesh) {
  const Vec3 c = mesh.bounds().center();
  for (Vec3& v : mesh.vertices) v -= c;
  return c;
}

Piece voxel_piece(std::string id, const VoxelSet& local, double voxel, const Vec3& world_origin) {
  Piece p{std::move(id), voxel_mesh(local, voxel, Vec3::Zero()), {}};
  const Vec3 c = recenter(p.mesh);
  p.assembled = RigidTransform::from_translation(world_origin + c);
  return p;
}

// Unit cubes on a 0.25 m voxel with a centered 0.5×0.5×0.25 stud on top and
// a matching cavity underneath. The mesh frame sits at the cube body center.
std::vector<Piece> make_stack(int n) {
  const double voxel = 0.25;
  VoxelSet local;
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      for (int z = 0; z < 4; ++z) local.insert({x, y, z});
  for (int x = 1; x < 3; ++x)
    for (int y = 1; y < 3; ++y) {
      local.erase({x, y, 0});
      local.insert({x, y, 4});
    }
  const TriMesh cube = voxel_mesh(local, voxel, Vec3::Constant(-0.5));
  std::vector<Piece> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({padded("cube", i, n), cube, RigidTransform::from_translation({0.0, 0.0, 0.5 + i})});
  }
  return out;
}

// Studded 1.0×0.5×0.5 bricks (0.125 m voxel, studs every half brick) in a
// running-bond pyramid on a single foundation beam. Every upper brick spans
// two bricks below.
std::vector<Piece> make_wall(int n) {
  const double voxel = 0.125;
  const int bricks = n - 1;
  int width = 1;
  while (width * (width + 1) / 2 < bricks) ++width;
  auto studded = [](int length) {
    VoxelSet v;
    for (int x = 0; x < length; ++x)
      for (int y = 0; y < 4; ++y)
        for (int z = 0; z < 4; ++z) v.insert({x, y, z});
    for (int x = 0; x < length; ++x) {
      if (x % 4 != 1 && x % 4 != 2) continue;
      for (int y = 1; y < 3; ++y) v.insert({x, y, 4});
    }
    return v;
  };
  VoxelSet brick = studded(8);
  for (int x = 0; x < 8; ++x) {
    if (x % 4 != 1 && x % 4 != 2) continue;
    for (int y = 1; y < 3; ++y) brick.erase({x, y, 0});
  }
  std::vector<Piece> out;
  out.push_back(voxel_piece("foundation", studded(8 * (width + 1)), voxel, Vec3::Zero()));
  for (int row = 0; row < width && static_cast<int>(out.size()) < n; ++row) {
    for (int i = 0; i < width - row && static_cast<int>(out.size()) < n; ++i) {
      const Vec3 origin = voxel * Vec3(4 * (row + 1) + 8 * i, 0, 4 * (row + 1));
      out.push_back(voxel_piece(padded("brick", static_cast<int>(out.size()) - 1, bricks), brick, voxel, origin));
    }
  }
  return out;
}

// Board with blind square holes on a 0.25 m voxel grid, opening alternately
// on the top and the bottom face; each peg fills its hole exactly and sticks
// out by one voxel.
std::vector<Piece> make_peg_board(int n) {
  const double voxel = 0.25;
  const int k = n - 1;
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(k))));
  const int rows = (k + cols - 1) / cols;
  VoxelSet board;
  for (int x = 0; x < 2 * cols + 1; ++x) {
    for (int y = 0; y < 2 * rows + 1; ++y) {
      for (int z = 0; z < 3; ++z) board.insert({x, y, z});
    }
  }
  std::vector<Voxel> holes;
  for (int j = 0; j < rows; ++j) {
    for (int i = 0; i < cols && static_cast<int>(holes.size()) < k; ++i) {
      holes.push_back({2 * i + 1, 2 * j + 1, (i + j) % 2 == 0 ? 2 : 0});
    }
  }
  for (const Voxel& h : holes) board.erase(h);
  std::vector<Piece> out;
  out.push_back(voxel_piece("board", board, voxel, Vec3::Zero()));
  const TriMesh peg = box_mesh(Vec3(voxel, voxel, 2 * voxel));
  for (int i = 0; i < k; ++i) {
    const double zc = holes[i][2] == 2 ? 3.0 : 0.0;
    const Vec3 center = voxel * Vec3(holes[i][0] + 0.5, holes[i][1] + 0.5, zc);
    out.push_back({padded("peg", i, k), peg, RigidTransform::from_translation(center)});
  }
  return out;
}

// Hub, a ring of radially oriented cubes, and a lid resting on the ring only.
std::vector<Piece> make_ring(int n) {
  const int m = n - 2;
  const double cube = 0.8, hub_size = 0.6;
  double inner = 0.55;
  if (m >= 3) inner = std::max(inner, 0.45 / std::tan(std::numbers::pi / m));
  const double radius = inner + 0.5 * cube;
  std::vector<Piece> out;
  out.push_back({"hub", box_mesh(Vec3::Constant(hub_size)), RigidTransform::from_translation({0, 0, 0.5 * hub_size})});
  const TriMesh cube_mesh = box_mesh(Vec3::Constant(cube));
  for (int i = 0; i < m; ++i) {
    const double theta = 2.0 * std::numbers::pi * i / m;
    RigidTransform tf;
    tf.rotation = Quat(Eigen::AngleAxisd(theta, Vec3::UnitZ()));
    tf.translation = Vec3(radius * std::cos(theta), radius * std::sin(theta), 0.5 * cube);
    out.push_back({padded("ring", i, m), cube_mesh, tf});
  }
  const double side = 2.0 * radius + 0.4, thickness = 0.2;
  out.push_back({"lid", box_mesh(Vec3(side, side, thickness)),
                 RigidTransform::from_translation({0, 0, cube + 0.5 * thickness})});
  return out;
}

// Interlocking bricks on a 0.125 m voxel: 8x4x3 body, two 2x2 studs on top
// and matching cavities underneath.
std::vector<Piece> make_random_lego(int n, std::uint64_t seed) {
  const double voxel = 0.125;
  VoxelSet local;
  const std::vector<std::array<int, 2>> stud_xy{{1, 1}, {1, 2}, {2, 1}, {2, 2}, {5, 1}, {5, 2}, {6, 1}, {6, 2}};
  for (int x = 0; x < 8; ++x) {
    for (int y = 0; y < 4; ++y) {
      for (int z = 0; z < 3; ++z) local.insert({x, y, z});
    }
  }
  for (auto [x, y] : stud_xy) {
    local.erase({x, y, 0});
    local.insert({x, y, 3});
  }
  struct Brick {
    int ox, oz;
  };
  std::vector<Brick> bricks{{0, 0}};
  VoxelSet occupied;
  auto voxels_of = [&](const Brick& b) {
    std::vector<Voxel> out;
    for (const Voxel& v : local) out.push_back({v[0] + b.ox, v[1], v[2] + b.oz});
    return out;
  };
  for (const Voxel& v : voxels_of(bricks[0])) occupied.insert(v);

  std::mt19937_64 rng(seed);
  int attempts = 0;
  while (static_cast<int>(bricks.size()) < n) {
    if (++attempts > 500 * n) throw std::invalid_argument("random-lego: cannot place " + std::to_string(n) + " bricks");
    const Brick& base = bricks[std::uniform_int_distribution<std::size_t>(0, bricks.size() - 1)(rng)];
    Brick cand{};
    if (std::uniform_real_distribution<double>(0, 1)(rng) < 0.7) {
      const int dx = std::array<int, 3>{-4, 0, 4}[std::uniform_int_distribution<int>(0, 2)(rng)];
      cand = {base.ox + dx, base.oz + 3};
    } else {
      if (base.oz != 0) continue;
      cand = {base.ox + (std::uniform_int_distribution<int>(0, 1)(rng) ? 8 : -8), 0};
    }
    const auto vox = voxels_of(cand);
    if (std::any_of(vox.begin(), vox.end(), [&](const Voxel& v) { return occupied.count(v) > 0; })) continue;
    if (cand.oz > 0) {
      // Center of mass strictly inside the span of the bricks directly below.
      int lo = 1 << 30, hi = -(1 << 30);
      for (const Brick& b : bricks) {
        if (b.oz + 3 != cand.oz || b.ox + 8 <= cand.ox || b.ox >= cand.ox + 8) continue;
        lo = std::min(lo, b.ox);
        hi = std::max(hi, b.ox + 8);
      }
      const int com = cand.ox + 4;
      if (!(lo + 1 <= com && com <= hi - 1)) continue;
    }
    bricks.push_back(cand);
    for (const Voxel& v : vox) occupied.insert(v);
  }
  std::vector<Piece> out;
  for (int i = 0; i < n; ++i) {
    out.push_back(voxel_piece(padded("brick", i, n), local, voxel, voxel * Vec3(bricks[i].ox, 0, bricks[i].oz)));
  }
  return out;
}

}  // namespace

GeneratedAssembly generate_assembly(Family family, int n_parts, std::uint64_t seed) {
  if (n_parts < 2) throw std::invalid_argument("generate_assembly needs n_parts >= 2");
  if (n_parts > PartSet::kCapacity) throw std::invalid_argument("too many parts");
  std::vector<Piece> pieces;
  switch (family) {
    case Family::stack: pieces = make_stack(n_parts); break;
    case Family::wall: pieces = make_wall(n_parts); break;
    case Family::peg_board: pieces = make_peg_board(n_parts); break;
    case Family::ring:
      if (n_parts < 3) throw std::invalid_argument("ring needs at least 3 parts");
      pieces = make_ring(n_parts);
      break;
    case Family::random_lego: pieces = make_random_lego(n_parts, seed); break;
  }
  // The seed also fixes the canonical index order.
  std::vector<std::size_t> order(pieces.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::shuffle(order.begin(), order.end(), rng);

  GeneratedAssembly g;
  g.manifest.id = to_string(family) + "-" + std::to_string(n_parts) + "-s" + std::to_string(seed);
  g.manifest.metadata = {{"family", to_string(family)}, {"n_parts", n_parts}, {"seed", seed}};
  for (std::size_t i : order) {
    Piece& p = pieces[i];
    g.manifest.parts.push_back({p.id, std::filesystem::path(g.manifest.id) / (p.id + ".obj"), kDefaultDensity,
                                p.assembled});
    g.meshes.push_back(std::move(p.mesh));
  }
  g.manifest.validate();
  return g;
}

std::filesystem::path write_generated(const GeneratedAssembly& g, const std::filesystem::path& dir) {
  for (std::size_t i = 0; i < g.meshes.size(); ++i) {
    const auto path = dir / g.manifest.parts[i].mesh_path;
    std::filesystem::create_directories(path.parent_path());
    save_obj(path, g.meshes[i]);
  }
  const auto path = dir / (g.manifest.id + ".json");
  save_manifest(path, g.manifest);
  return path;
}

Assembly to_assembly(const GeneratedAssembly& g, double cell_size) {
  Assembly a;
  a.id = g.manifest.id;
  for (std::size_t i = 0; i < g.meshes.size(); ++i) {
    const ManifestPart& p = g.manifest.parts[i];
    a.parts.push_back({make_part(p.id, g.meshes[i], p.density, cell_size), p.assembled});
  }
  return a;
}

}  // namespace asap
