#include "minsurf/mesh_check.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mesh_internal.hpp"

namespace minsurf {

namespace {

uint64_t edge_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
}

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

bool vertices_manifold(const TriMesh& mesh) {
    const int n = mesh.vertex_count();
    std::vector<std::vector<int>> vertex_faces(n);
    for (int f = 0; f < mesh.triangle_count(); ++f)
        for (int v : mesh.triangles[f]) vertex_faces[v].push_back(f);

    for (int v = 0; v < n; ++v) {
        const auto& faces = vertex_faces[v];
        if (faces.empty()) return false;  // isolated vertex
        // Union faces sharing an edge incident to v; one fan means one root.
        std::map<uint64_t, int> first_face;
        DisjointSet components(static_cast<int>(faces.size()));
        for (size_t fi = 0; fi < faces.size(); ++fi) {
            const auto& tri = mesh.triangles[faces[fi]];
            for (int e = 0; e < 3; ++e) {
                const int a = tri[e];
                const int b = tri[(e + 1) % 3];
                if (a != v && b != v) continue;
                auto [it, inserted] = first_face.try_emplace(edge_key(a, b), static_cast<int>(fi));
                if (!inserted) components.unite(it->second, static_cast<int>(fi));
            }
        }
        int roots = 0;
        for (size_t fi = 0; fi < faces.size(); ++fi)
            if (components.find(static_cast<int>(fi)) == static_cast<int>(fi)) ++roots;
        if (roots != 1) return false;
    }
    return true;
}

}  // namespace

namespace detail {

ManifoldFlags manifold_flags(const TriMesh& mesh) {
    ManifoldFlags flags;
    const int n = mesh.vertex_count();
    flags.well_formed = true;
    for (const auto& tri : mesh.triangles) {
        for (int v : tri)
            if (v < 0 || v >= n) return {};
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) flags.well_formed = false;
    }
    if (!flags.well_formed) return flags;

    std::unordered_map<uint64_t, int> edge_faces;
    edge_faces.reserve(mesh.triangles.size() * 2);
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) ++edge_faces[edge_key(tri[e], tri[(e + 1) % 3])];

    flags.edge_manifold = true;
    for (const auto& [key, count] : edge_faces)
        if (count > 2) flags.edge_manifold = false;

    flags.vertex_manifold = flags.edge_manifold && vertices_manifold(mesh);
    return flags;
}

}  // namespace detail

MeshReport check_mesh(const TriMesh& mesh) {
    MeshReport report;
    report.vertex_count = mesh.vertex_count();
    report.face_count = mesh.triangle_count();

    const detail::ManifoldFlags flags = detail::manifold_flags(mesh);
    const int n = mesh.vertex_count();
    for (const auto& tri : mesh.triangles)
        for (int v : tri)
            if (v < 0 || v >= n) return report;  // unusable mesh; all flags false

    std::unordered_map<uint64_t, int> edge_faces;
    std::unordered_map<uint64_t, int> directed;
    edge_faces.reserve(mesh.triangles.size() * 2);
    directed.reserve(mesh.triangles.size() * 3);
    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = tri[e];
            const int b = tri[(e + 1) % 3];
            ++edge_faces[edge_key(a, b)];
            ++directed[(static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b)];
        }
    }
    report.edge_count = static_cast<int>(edge_faces.size());
    report.euler_characteristic = report.vertex_count - report.edge_count + report.face_count;

    report.edge_manifold = flags.edge_manifold;
    report.vertex_manifold = flags.vertex_manifold;
    report.watertight = flags.well_formed && !edge_faces.empty();
    for (const auto& [key, count] : edge_faces) {
        if (count != 2) report.watertight = false;
        if (count == 1) ++report.boundary_edge_count;
    }

    report.oriented = flags.well_formed;
    for (const auto& [key, count] : directed)
        if (count > 1) report.oriented = false;

    DisjointSet vertex_components(n);
    for (const auto& tri : mesh.triangles) {
        vertex_components.unite(tri[0], tri[1]);
        vertex_components.unite(tri[1], tri[2]);
    }
    report.connected_components = 0;
    for (int v = 0; v < n; ++v)
        if (vertex_components.find(v) == v) ++report.connected_components;

    report.area = surface_area(mesh);

    if (report.watertight && report.oriented && report.connected_components == 1 &&
        (2 - report.euler_characteristic) % 2 == 0 && 2 - report.euler_characteristic >= 0)
        report.genus = (2 - report.euler_characteristic) / 2;

    if (flags.manifold()) {
        const detail::VertexLaplacian lap = detail::vertex_laplacian(mesh, false);
        size_t interior = 0;
        for (int v = 0; v < n; ++v) {
            if (lap.boundary[v] || lap.mixed_area[v] <= 1e-300) continue;
            const double h = 0.5 * norm(lap.curvature_normal[v]);
            report.mean_abs_curvature += h;
            report.max_abs_curvature = std::max(report.max_abs_curvature, h);
            ++interior;
        }
        if (interior) report.mean_abs_curvature /= static_cast<double>(interior);
    }
    return report;
}

std::string MeshReport::to_json() const {
    nlohmann::ordered_json j{{"vertex_count", vertex_count},
                             {"edge_count", edge_count},
                             {"face_count", face_count},
                             {"watertight", watertight},
                             {"edge_manifold", edge_manifold},
                             {"vertex_manifold", vertex_manifold},
                             {"oriented", oriented},
                             {"boundary_edge_count", boundary_edge_count},
                             {"euler_characteristic", euler_characteristic},
                             {"genus", genus},
                             {"connected_components", connected_components},
                             {"area", area},
                             {"mean_abs_curvature", mean_abs_curvature},
                             {"max_abs_curvature", max_abs_curvature}};
    return j.dump(2) + "\n";
}

}  // namespace minsurf
