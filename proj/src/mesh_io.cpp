#include "asap/mesh_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace asap {

namespace {

int resolve_index(const std::string& token, int vertex_count, const std::string& where) {
  // "7", "7/2", "7//3", "-1"
  const std::string head = token.substr(0, token.find('/'));
  int idx = 0;
  try {
    std::size_t used = 0;
    idx = std::stoi(head, &used);
    if (used != head.size()) throw std::invalid_argument(head);
  } catch (const std::exception&) {
    throw MeshError(where + ": bad face index '" + token + "'");
  }
  if (idx > 0) return idx - 1;
  if (idx < 0) return vertex_count + idx;
  throw MeshError(where + ": face index 0 is invalid");
}

}  // namespace

TriMesh parse_obj(std::istream& in, const std::string& source_name) {
  TriMesh mesh;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source_name + ":" + std::to_string(line_no);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw MeshError(where + ": malformed vertex");
      mesh.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (ls >> tok) {
        poly.push_back(resolve_index(tok, static_cast<int>(mesh.vertices.size()), where));
      }
      if (poly.size() < 3) throw MeshError(where + ": face with fewer than 3 vertices");
      for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
        mesh.triangles.push_back({poly[0], poly[i], poly[i + 1]});
      }
    }
    // vn, vt, o, g, usemtl, s ... carry no geometry we need
  }
  if (mesh.vertices.empty() || mesh.triangles.empty()) {
    throw MeshError(source_name + ": no geometry found");
  }
  validate_mesh(mesh);
  return mesh;
}

TriMesh load_mesh(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MeshError("cannot open mesh file " + path.string());
  return parse_obj(in, path.string());
}

void write_obj(std::ostream& out, const TriMesh& mesh) {
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles) {
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
  }
}

void save_obj(const std::filesystem::path& path, const TriMesh& mesh) {
  std::ofstream out(path);
  if (!out) throw MeshError("cannot write mesh file " + path.string());
  write_obj(out, mesh);
}

}  // namespace asap
