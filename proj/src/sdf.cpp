#include "asap/sdf.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace asap {

namespace {

/// Nearest-triangle queries over an AABB tree.
class TriangleBvh {
 public:
  explicit TriangleBvh(const TriMesh& mesh) : mesh_(mesh) {
    const std::size_t n = mesh.triangles.size();
    order_.resize(n);
    centroids_.resize(n);
    boxes_.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      order_[t] = static_cast<int>(t);
      const auto& tri = mesh.triangles[t];
      for (int v : tri) boxes_[t].extend(mesh.vertices[v]);
      centroids_[t] = boxes_[t].center();
    }
    nodes_.reserve(2 * n);
    build(0, static_cast<int>(n));
  }

  struct Hit {
    double dist2 = std::numeric_limits<double>::infinity();
    int triangle = -1;
    int feature = 0;
    Vec3 point = Vec3::Zero();
  };

  Hit closest(const Vec3& p) const {
    Hit hit;
    std::vector<int> stack;
    stack.reserve(64);
    stack.push_back(0);
    while (!stack.empty()) {
      const Node& node = nodes_[stack.back()];
      stack.pop_back();
      if (box_dist2(node.box, p) >= hit.dist2) continue;
      if (node.count > 0) {
        for (int i = node.first; i < node.first + node.count; ++i) {
          const int t = order_[i];
          const auto& tri = mesh_.triangles[t];
          int feature = 0;
          Vec3 c = closest_point_on_triangle(p, mesh_.vertices[tri[0]], mesh_.vertices[tri[1]],
                                             mesh_.vertices[tri[2]], &feature);
          const double d2 = (c - p).squaredNorm();
          if (d2 < hit.dist2) {
            hit = {d2, t, feature, c};
          }
        }
      } else {
        const double dl = box_dist2(nodes_[node.left].box, p);
        const double dr = box_dist2(nodes_[node.right].box, p);
        if (dl < dr) {
          stack.push_back(node.right);
          stack.push_back(node.left);
        } else {
          stack.push_back(node.left);
          stack.push_back(node.right);
        }
      }
    }
    return hit;
  }

 private:
  struct Node {
    Aabb box;
    int left = -1, right = -1;
    int first = 0, count = 0;
  };

  static double box_dist2(const Aabb& b, const Vec3& p) {
    Vec3 d = (b.min - p).cwiseMax(p - b.max).cwiseMax(Vec3::Zero());
    return d.squaredNorm();
  }

  int build(int first, int last) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Aabb box;
    Aabb cbox;
    for (int i = first; i < last; ++i) {
      box.extend(boxes_[order_[i]]);
      cbox.extend(centroids_[order_[i]]);
    }
    nodes_[id].box = box;
    if (last - first <= 4) {
      nodes_[id].first = first;
      nodes_[id].count = last - first;
      return id;
    }
    int axis = 0;
    cbox.extent().maxCoeff(&axis);
    const int mid = (first + last) / 2;
    std::nth_element(order_.begin() + first, order_.begin() + mid, order_.begin() + last,
                     [&](int a, int b) { return centroids_[a][axis] < centroids_[b][axis]; });
    const int l = build(first, mid);
    const int r = build(mid, last);
    nodes_[id].left = l;
    nodes_[id].right = r;
    return id;
  }

  const TriMesh& mesh_;
  std::vector<int> order_;
  std::vector<Vec3> centroids_;
  std::vector<Aabb> boxes_;
  std::vector<Node> nodes_;
};

/// Angle-weighted pseudo-normals for faces, edges and vertices.
struct PseudoNormals {
  std::vector<Vec3> face;
  std::vector<Vec3> vertex;
  std::map<std::pair<int, int>, Vec3> edge;

  explicit PseudoNormals(const TriMesh& mesh) {
    face.resize(mesh.triangles.size());
    vertex.assign(mesh.vertices.size(), Vec3::Zero());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
      const auto& tri = mesh.triangles[t];
      const Vec3& a = mesh.vertices[tri[0]];
      const Vec3& b = mesh.vertices[tri[1]];
      const Vec3& c = mesh.vertices[tri[2]];
      Vec3 n = (b - a).cross(c - a).normalized();
      face[t] = n;
      for (int e = 0; e < 3; ++e) {
        const int i0 = tri[e], i1 = tri[(e + 1) % 3], i2 = tri[(e + 2) % 3];
        const Vec3 u = (mesh.vertices[i1] - mesh.vertices[i0]).normalized();
        const Vec3 v = (mesh.vertices[i2] - mesh.vertices[i0]).normalized();
        const double angle = std::acos(std::clamp(u.dot(v), -1.0, 1.0));
        vertex[i0] += angle * n;
        edge.try_emplace(key(i0, i1), Vec3::Zero()).first->second += n;
      }
    }
  }

  static std::pair<int, int> key(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

  Vec3 for_feature(const TriMesh& mesh, int triangle, int feature) const {
    const auto& tri = mesh.triangles[triangle];
    switch (feature) {
      case 0: return face[triangle];
      case 1: return edge.at(key(tri[0], tri[1]));
      case 2: return edge.at(key(tri[1], tri[2]));
      case 3: return edge.at(key(tri[2], tri[0]));
      case 4: return vertex[tri[0]];
      case 5: return vertex[tri[1]];
      default: return vertex[tri[2]];
    }
  }
};

}  // namespace

Aabb SdfGrid::bounds() const {
  return {origin, origin + cell_size * Vec3(dims[0] - 1, dims[1] - 1, dims[2] - 1)};
}

double SdfGrid::value(const Vec3& p) const {
  double v = 0.0;
  if (sample(p, v)) return v;
  const Aabb box = bounds();
  const Vec3 clamped = p.cwiseMax(box.min).cwiseMin(box.max);
  sample(clamped, v);
  return v + (p - clamped).norm();
}

double default_cell_size(const TriMesh& mesh) {
  return std::clamp(mesh.bounds().diagonal() / 64.0, 1e-3, 1e-2);
}

SdfGrid build_sdf(const TriMesh& mesh, double cell_size, int padding_cells) {
  if (!mesh.watertight) throw MeshError("signed distance field requires a watertight mesh");
  if (!(cell_size > 0.0)) throw std::invalid_argument("cell_size must be positive");
  padding_cells = std::max(padding_cells, 2);

  const Aabb box = mesh.bounds();
  SdfGrid grid;
  grid.cell_size = cell_size;
  grid.origin = box.min - Vec3::Constant(padding_cells * cell_size);
  for (int a = 0; a < 3; ++a) {
    grid.dims[a] = static_cast<int>(std::ceil(box.extent()[a] / cell_size)) + 2 * padding_cells + 1;
  }
  grid.values.resize(static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2]);

  const TriangleBvh bvh(mesh);
  const PseudoNormals normals(mesh);

  auto fill_slab = [&](int i0, int i1) {
    for (int i = i0; i < i1; ++i) {
      for (int j = 0; j < grid.dims[1]; ++j) {
        for (int k = 0; k < grid.dims[2]; ++k) {
          const Vec3 p = grid.node(i, j, k);
          const auto hit = bvh.closest(p);
          const double dist = std::sqrt(hit.dist2);
          const Vec3 n = normals.for_feature(mesh, hit.triangle, hit.feature);
          const double side = (p - hit.point).dot(n);
          grid.values[grid.index(i, j, k)] = static_cast<float>(side < 0.0 ? -dist : dist);
        }
      }
    }
  };

  const int workers = std::max(1u, std::min(std::thread::hardware_concurrency(), 16u));
  if (workers == 1) {
    fill_slab(0, grid.dims[0]);
  } else {
    std::vector<std::thread> pool;
    const int per = (grid.dims[0] + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int i0 = w * per, i1 = std::min(grid.dims[0], i0 + per);
      if (i0 < i1) pool.emplace_back(fill_slab, i0, i1);
    }
    for (auto& t : pool) t.join();
  }
  return grid;
}

std::shared_ptr<const SdfGrid> cached_sdf(const TriMesh& mesh, double cell_size) {
  static std::mutex mutex;
  static std::unordered_map<std::uint64_t, std::shared_ptr<const SdfGrid>> cache;
  std::uint64_t key = mesh_hash(mesh);
  std::uint64_t bits = 0;
  std::memcpy(&bits, &cell_size, sizeof(bits));
  key ^= bits + 0x9e3779b97f4a7c15ULL + (key << 6) + (key >> 2);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto grid = std::make_shared<const SdfGrid>(build_sdf(mesh, cell_size));
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(grid)).first->second;
}

namespace {

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated SDF file");
  return v;
}

constexpr std::uint32_t kSdfVersion = 1;

}  // namespace

void save_sdf(const std::filesystem::path& path, const SdfGrid& grid) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write("ASDF", 4);
  put<std::uint32_t>(out, kSdfVersion);
  for (int a = 0; a < 3; ++a) put<double>(out, grid.origin[a]);
  put<double>(out, grid.cell_size);
  for (int a = 0; a < 3; ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.dims[a]));
  out.write(reinterpret_cast<const char*>(grid.values.data()),
            static_cast<std::streamsize>(grid.values.size() * sizeof(float)));
}

SdfGrid load_sdf(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "ASDF", 4) != 0) throw std::runtime_error("not an ASDF file");
  if (get<std::uint32_t>(in) != kSdfVersion) throw std::runtime_error("unsupported ASDF version");
  SdfGrid grid;
  for (int a = 0; a < 3; ++a) grid.origin[a] = get<double>(in);
  grid.cell_size = get<double>(in);
  for (int a = 0; a < 3; ++a) grid.dims[a] = static_cast<int>(get<std::uint32_t>(in));
  grid.values.resize(static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2]);
  in.read(reinterpret_cast<char*>(grid.values.data()),
          static_cast<std::streamsize>(grid.values.size() * sizeof(float)));
  if (!in) throw std::runtime_error("truncated SDF values");
  return grid;
}

}  // namespace asap
