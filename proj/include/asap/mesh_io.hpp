#pragma once

#include <filesystem>
#include <iosfwd>

#include "asap/geometry.hpp"

namespace asap {

/// Parses ASCII OBJ `v`/`f` records; polygons are fan-triangulated. The
/// result is validated (see validate_mesh).
TriMesh parse_obj(std::istream& in, const std::string& source_name = "<stream>");
TriMesh load_mesh(const std::filesystem::path& path);

void write_obj(std::ostream& out, const TriMesh& mesh);
void save_obj(const std::filesystem::path& path, const TriMesh& mesh);

}  // namespace asap
