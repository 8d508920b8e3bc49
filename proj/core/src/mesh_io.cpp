#include "minsurf/mesh_io.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "minsurf/errors.hpp"
#include "minsurf/num_format.hpp"

namespace minsurf {

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing", path);
    out << content;
    if (!out) throw IoError("write failed", path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading", path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void require_nonempty(const TriMesh& mesh) {
    if (mesh.vertices.empty() || mesh.triangles.empty()) throw Error("empty mesh");
    for (const auto& tri : mesh.triangles)
        for (int v : tri)
            if (v < 0 || v >= mesh.vertex_count()) throw Error("triangle index out of range");
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> tokens;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) tokens.push_back(s.substr(i, j - i));
        i = j;
    }
    return tokens;
}

// "17/3/9" -> 17: OBJ face references keep only the vertex index.
bool face_vertex_index(std::string_view token, long long& out) {
    const size_t slash = token.find('/');
    return parse_int(token.substr(0, slash == std::string_view::npos ? token.size() : slash), out);
}

}  // namespace

std::string to_obj(const TriMesh& mesh) {
    require_nonempty(mesh);
    std::string out;
    for (const Vec3& v : mesh.vertices)
        out += "v " + format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z) +
               "\n";
    for (const auto& tri : mesh.triangles)
        out += "f " + std::to_string(tri[0] + 1) + " " + std::to_string(tri[1] + 1) + " " +
               std::to_string(tri[2] + 1) + "\n";
    return out;
}

void export_obj(const TriMesh& mesh, const std::string& path) { write_file(path, to_obj(mesh)); }

std::string to_ply(const TriMesh& mesh) {
    require_nonempty(mesh);
    std::string out =
        "ply\nformat ascii 1.0\nelement vertex " + std::to_string(mesh.vertex_count()) +
        "\nproperty double x\nproperty double y\nproperty double z\nelement face " +
        std::to_string(mesh.triangle_count()) +
        "\nproperty list uchar int vertex_indices\nend_header\n";
    for (const Vec3& v : mesh.vertices)
        out += format_double(v.x) + " " + format_double(v.y) + " " + format_double(v.z) + "\n";
    for (const auto& tri : mesh.triangles)
        out += "3 " + std::to_string(tri[0]) + " " + std::to_string(tri[1]) + " " +
               std::to_string(tri[2]) + "\n";
    return out;
}

void export_ply(const TriMesh& mesh, const std::string& path) { write_file(path, to_ply(mesh)); }

TriMesh parse_obj(const std::string& text) {
    TriMesh mesh;
    int line_no = 0;
    size_t start = 0;
    while (start <= text.size()) {
        ++line_no;
        size_t nl = text.find('\n', start);
        if (nl == std::string::npos) nl = text.size();
        const auto tokens = split_ws(std::string_view(text).substr(start, nl - start));
        start = nl + 1;
        if (tokens.empty() || tokens[0][0] == '#') continue;

        if (tokens[0] == "v") {
            if (tokens.size() < 4) throw ParseError("vertex needs 3 coordinates", line_no);
            Vec3 p;
            for (int a = 0; a < 3; ++a)
                if (!parse_double(tokens[a + 1], p[a]))
                    throw ParseError("invalid coordinate '" + std::string(tokens[a + 1]) + "'",
                                     line_no);
            mesh.vertices.push_back(p);
        } else if (tokens[0] == "f") {
            if (tokens.size() < 4) throw ParseError("face needs at least 3 vertices", line_no);
            std::vector<int> face;
            for (size_t t = 1; t < tokens.size(); ++t) {
                long long idx;
                if (!face_vertex_index(tokens[t], idx))
                    throw ParseError("invalid face index '" + std::string(tokens[t]) + "'",
                                     line_no);
                if (idx < 1 || idx > mesh.vertex_count())
                    throw ParseError("face index " + std::to_string(idx) + " out of range",
                                     line_no);
                face.push_back(static_cast<int>(idx) - 1);
            }
            for (size_t t = 1; t + 1 < face.size(); ++t)
                mesh.triangles.push_back({face[0], face[t], face[t + 1]});
        }
        // vt/vn/g/o/s/usemtl/mtllib records carry no geometry here; skip them.
    }
    return mesh;
}

TriMesh import_obj(const std::string& path) { return parse_obj(read_file(path)); }

TriMesh parse_ply(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    auto next_line = [&]() -> bool {
        if (!std::getline(in, line)) return false;
        ++line_no;
        return true;
    };

    if (!next_line() || split_ws(line) != std::vector<std::string_view>{"ply"})
        throw ParseError("missing ply magic", 1);

    long long n_vertices = -1, n_faces = -1;
    bool ascii = false;
    std::string current_element;
    int vertex_props = 0;
    while (next_line()) {
        const auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        if (tokens[0] == "comment") continue;
        if (tokens[0] == "format") {
            ascii = tokens.size() >= 2 && tokens[1] == "ascii";
        } else if (tokens[0] == "element" && tokens.size() == 3) {
            current_element = std::string(tokens[1]);
            long long count;
            if (!parse_int(tokens[2], count) || count < 0)
                throw ParseError("invalid element count", line_no);
            if (current_element == "vertex") n_vertices = count;
            else if (current_element == "face") n_faces = count;
        } else if (tokens[0] == "property") {
            if (current_element == "vertex" && tokens.size() == 3) ++vertex_props;
        } else if (tokens[0] == "end_header") {
            break;
        }
    }
    if (!ascii) throw ParseError("only ascii 1.0 PLY is supported");
    if (n_vertices < 0 || n_faces < 0) throw ParseError("missing vertex or face element");
    if (vertex_props != 3) throw ParseError("expected exactly x, y, z vertex properties");

    TriMesh mesh;
    mesh.vertices.reserve(n_vertices);
    for (long long i = 0; i < n_vertices; ++i) {
        if (!next_line()) throw ParseError("unexpected end of vertex list", line_no);
        const auto tokens = split_ws(line);
        if (tokens.size() != 3) throw ParseError("vertex row needs 3 values", line_no);
        Vec3 p;
        for (int a = 0; a < 3; ++a)
            if (!parse_double(tokens[a], p[a]))
                throw ParseError("invalid coordinate '" + std::string(tokens[a]) + "'", line_no);
        mesh.vertices.push_back(p);
    }
    for (long long i = 0; i < n_faces; ++i) {
        if (!next_line()) throw ParseError("unexpected end of face list", line_no);
        const auto tokens = split_ws(line);
        long long arity;
        if (tokens.empty() || !parse_int(tokens[0], arity) || arity < 3 ||
            tokens.size() != static_cast<size_t>(arity) + 1)
            throw ParseError("malformed face row", line_no);
        std::vector<int> face;
        for (long long t = 1; t <= arity; ++t) {
            long long idx;
            if (!parse_int(tokens[t], idx) || idx < 0 || idx >= n_vertices)
                throw ParseError("face index out of range", line_no);
            face.push_back(static_cast<int>(idx));
        }
        for (size_t t = 1; t + 1 < face.size(); ++t)
            mesh.triangles.push_back({face[0], face[t], face[t + 1]});
    }
    return mesh;
}

TriMesh import_ply(const std::string& path) { return parse_ply(read_file(path)); }

}  // namespace minsurf
