#pragma once

#include <array>
#include <vector>

#include "minsurf/vec3.hpp"

namespace minsurf {

/// Indexed triangle mesh.
struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;

    int vertex_count() const { return static_cast<int>(vertices.size()); }
    int triangle_count() const { return static_cast<int>(triangles.size()); }

    friend bool operator==(const TriMesh& a, const TriMesh& b) {
        return a.vertices == b.vertices && a.triangles == b.triangles;
    }
};

inline double triangle_area(const TriMesh& mesh, const std::array<int, 3>& tri) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    return 0.5 * norm(cross(b - a, c - a));
}

inline double surface_area(const TriMesh& mesh) {
    double area = 0.0;
    for (const auto& tri : mesh.triangles) area += triangle_area(mesh, tri);
    return area;
}

inline Aabb bounding_box(const TriMesh& mesh) {
    Aabb box;
    if (mesh.vertices.empty()) return box;
    box.lo = box.hi = mesh.vertices.front();
    for (const Vec3& v : mesh.vertices) box.expand(v);
    return box;
}

}  // namespace minsurf
