#pragma once

#include <string>

#include "minsurf/mesh.hpp"

namespace minsurf {

/// ASCII Wavefront OBJ: `v x y z` and `f i j k` records, 1-based indices,
/// LF endings, shortest-roundtrip reals. Throws Error on an empty mesh and
/// IoError on filesystem failure.
void export_obj(const TriMesh& mesh, const std::string& path);
std::string to_obj(const TriMesh& mesh);

/// ASCII PLY 1.0 with double-precision vertex properties.
void export_ply(const TriMesh& mesh, const std::string& path);
std::string to_ply(const TriMesh& mesh);

/// Parses ASCII OBJ text. Faces with more than three vertices are
/// fan-triangulated; v/vt/vn composite references keep the vertex index.
/// Throws ParseError with a line number on malformed input.
TriMesh import_obj(const std::string& path);
TriMesh parse_obj(const std::string& text);

/// Parses the ASCII PLY subset written by export_ply.
TriMesh import_ply(const std::string& path);
TriMesh parse_ply(const std::string& text);

}  // namespace minsurf
