#include "minsurf/decoder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <unordered_map>
#include <vector>

#include "minsurf/errors.hpp"
#include "mesh_internal.hpp"

namespace minsurf {

namespace {

#include "mc_tables.inl"

// Cube corner offsets matching the table convention: 0..3 bottom ring
// counter-clockwise, 4..7 top ring.
constexpr int kCorner[8][3] = {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
                               {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}};

// Each cube edge as (corner, axis): the lattice edge leaving kCorner[c] in
// +axis direction. Matches the classic 0..11 edge numbering.
constexpr int kEdgeBase[12] = {0, 1, 3, 0, 4, 5, 7, 4, 0, 1, 2, 3};
constexpr int kEdgeAxis[12] = {0, 1, 0, 1, 0, 1, 0, 1, 2, 2, 2, 2};

struct GridSampler {
    int res;                     // cells per axis
    Vec3 origin;
    Vec3 cell;                   // cell size per axis
    std::vector<double> values;  // (res+1)^3 samples

    size_t index(int i, int j, int k) const {
        const size_t s = static_cast<size_t>(res) + 1;
        return (static_cast<size_t>(i) * s + j) * s + k;
    }
    Vec3 point(int i, int j, int k) const {
        return {origin.x + cell.x * i, origin.y + cell.y * j, origin.z + cell.z * k};
    }
};

TriMesh largest_component(const TriMesh& mesh) {
    const int n = mesh.vertex_count();
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& tri : mesh.triangles) {
        parent[find(tri[0])] = find(tri[1]);
        parent[find(tri[1])] = find(tri[2]);
    }
    std::unordered_map<int, int> face_count;
    for (const auto& tri : mesh.triangles) ++face_count[find(tri[0])];
    if (face_count.size() <= 1) return mesh;

    int best_root = -1, best_count = -1;
    for (int v = 0; v < n; ++v) {
        const int root = find(v);
        auto it = face_count.find(root);
        if (it == face_count.end()) continue;
        if (it->second > best_count) {
            best_count = it->second;
            best_root = root;
        }
    }

    TriMesh out;
    std::vector<int> remap(n, -1);
    for (const auto& tri : mesh.triangles) {
        if (find(tri[0]) != best_root) continue;
        std::array<int, 3> mapped;
        for (int e = 0; e < 3; ++e) {
            if (remap[tri[e]] < 0) {
                remap[tri[e]] = out.vertex_count();
                out.vertices.push_back(mesh.vertices[tri[e]]);
            }
            mapped[e] = remap[tri[e]];
        }
        out.triangles.push_back(mapped);
    }
    return out;
}

double cotangent(Vec3 a, Vec3 b) {
    // cot of the angle between a and b
    const Vec3 c = cross(a, b);
    const double sin_len = norm(c);
    if (sin_len < 1e-300) return 0.0;
    return dot(a, b) / sin_len;
}

void require_manifold(const TriMesh& mesh, const char* where) {
    if (!detail::manifold_flags(mesh).manifold())
        throw Error(std::string(where) + ": mesh is not manifold");
}

double mean_edge_length(const TriMesh& mesh) {
    double total = 0.0;
    size_t count = 0;
    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            total += norm(mesh.vertices[tri[e]] - mesh.vertices[tri[(e + 1) % 3]]);
            ++count;
        }
    }
    return count ? total / static_cast<double>(count) : 0.0;
}

}  // namespace

namespace detail {

VertexLaplacian vertex_laplacian(const TriMesh& mesh, bool clamp_weights) {
    const int n = mesh.vertex_count();
    VertexLaplacian lap;
    lap.curvature_normal.assign(n, Vec3{});
    lap.mixed_area.assign(n, 0.0);
    lap.boundary.assign(n, false);

    std::vector<Vec3> weighted_sum(n, Vec3{});
    std::unordered_map<uint64_t, int> edge_faces;
    edge_faces.reserve(mesh.triangles.size() * 2);

    for (const auto& tri : mesh.triangles) {
        const Vec3 p[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]};
        double cot[3];
        bool obtuse[3];
        for (int c = 0; c < 3; ++c) {
            const Vec3 u = p[(c + 1) % 3] - p[c];
            const Vec3 v = p[(c + 2) % 3] - p[c];
            cot[c] = cotangent(u, v);
            obtuse[c] = dot(u, v) < 0.0;
        }
        const double area = triangle_area(mesh, tri);

        for (int c = 0; c < 3; ++c) {
            const int i = tri[(c + 1) % 3];
            const int j = tri[(c + 2) % 3];
            const double w = clamp_weights ? std::max(cot[c], 0.0) : cot[c];
            // the angle at corner c faces edge (i, j)
            weighted_sum[i] += w * (mesh.vertices[j] - mesh.vertices[i]);
            weighted_sum[j] += w * (mesh.vertices[i] - mesh.vertices[j]);

            const int a = std::min(i, j), b = std::max(i, j);
            ++edge_faces[(static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b)];
        }

        // Mixed area: Voronoi pieces for non-obtuse triangles, area/2 at the
        // obtuse corner and area/4 elsewhere otherwise.
        if (!obtuse[0] && !obtuse[1] && !obtuse[2]) {
            for (int c = 0; c < 3; ++c) {
                const int i = tri[c];
                const double e1 = norm2(p[(c + 1) % 3] - p[c]);
                const double e2 = norm2(p[(c + 2) % 3] - p[c]);
                lap.mixed_area[i] += (e1 * cot[(c + 2) % 3] + e2 * cot[(c + 1) % 3]) / 8.0;
            }
        } else {
            for (int c = 0; c < 3; ++c)
                lap.mixed_area[tri[c]] += obtuse[c] ? area / 2.0 : area / 4.0;
        }
    }

    for (const auto& tri : mesh.triangles) {
        for (int e = 0; e < 3; ++e) {
            const int a = std::min(tri[e], tri[(e + 1) % 3]);
            const int b = std::max(tri[e], tri[(e + 1) % 3]);
            if (edge_faces[(static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b)] == 1) {
                lap.boundary[a] = true;
                lap.boundary[b] = true;
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        if (lap.mixed_area[i] > 1e-300)
            lap.curvature_normal[i] = weighted_sum[i] / (2.0 * lap.mixed_area[i]);
    }
    return lap;
}

}  // namespace detail

TriMesh extract_surface(const ScalarField& field, const DecodeParams& params) {
    if (params.grid_resolution < 16) throw Error("grid resolution must be >= 16");
    if (!field.evaluate) throw Error("field has no evaluator");

    GridSampler grid;
    grid.res = params.grid_resolution;
    grid.origin = field.bounds.lo;
    grid.cell = (field.bounds.hi - field.bounds.lo) / static_cast<double>(grid.res);
    if (!(grid.cell.x > 0.0 && grid.cell.y > 0.0 && grid.cell.z > 0.0))
        throw Error("field bounds are degenerate");

    const int s = grid.res + 1;
    grid.values.resize(static_cast<size_t>(s) * s * s);
    bool any_inside = false;
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) {
            for (int k = 0; k < s; ++k) {
                double v = field.evaluate(grid.point(i, j, k));
                // A sample exactly on the surface would create degenerate
                // triangles; nudge it inside.
                if (v == 0.0) v = -1e-12;
                grid.values[grid.index(i, j, k)] = v;
                any_inside |= v < 0.0;
            }
        }
    }
    if (!any_inside) throw Error("empty surface: the field has no zero set inside the bounds");

    TriMesh mesh;
    std::unordered_map<uint64_t, int> edge_vertex;  // lattice edge -> mesh vertex
    edge_vertex.reserve(grid.values.size() / 4);

    auto vertex_on_edge = [&](int i, int j, int k, int axis) {
        const uint64_t key = static_cast<uint64_t>(grid.index(i, j, k)) * 3 + axis;
        auto it = edge_vertex.find(key);
        if (it != edge_vertex.end()) return it->second;

        const double v0 = grid.values[grid.index(i, j, k)];
        const int i1 = i + (axis == 0), j1 = j + (axis == 1), k1 = k + (axis == 2);
        const double v1 = grid.values[grid.index(i1, j1, k1)];
        const double t = v0 / (v0 - v1);
        const Vec3 p0 = grid.point(i, j, k);
        const Vec3 p1 = grid.point(i1, j1, k1);
        const int id = mesh.vertex_count();
        mesh.vertices.push_back(p0 + t * (p1 - p0));
        edge_vertex.emplace(key, id);
        return id;
    };

    for (int i = 0; i < grid.res; ++i) {
        for (int j = 0; j < grid.res; ++j) {
            for (int k = 0; k < grid.res; ++k) {
                int cube = 0;
                for (int c = 0; c < 8; ++c) {
                    const double v = grid.values[grid.index(i + kCorner[c][0], j + kCorner[c][1],
                                                            k + kCorner[c][2])];
                    if (v < 0.0) cube |= 1 << c;
                }
                if (kEdgeTable[cube] == 0) continue;

                int edge_ids[12];
                for (int e = 0; e < 12; ++e) {
                    if (!(kEdgeTable[cube] & (1 << e))) continue;
                    const int c = kEdgeBase[e];
                    edge_ids[e] = vertex_on_edge(i + kCorner[c][0], j + kCorner[c][1],
                                                 k + kCorner[c][2], kEdgeAxis[e]);
                }
                for (int t = 0; kTriTable[cube][t] != -1; t += 3) {
                    const int a = edge_ids[kTriTable[cube][t]];
                    const int b = edge_ids[kTriTable[cube][t + 1]];
                    const int c = edge_ids[kTriTable[cube][t + 2]];
                    if (a == b || b == c || a == c) continue;  // collapsed sliver
                    // Table order gives inward normals for negative-inside
                    // fields; swap to face outward.
                    mesh.triangles.push_back({a, c, b});
                }
            }
        }
    }

    if (mesh.triangles.empty())
        throw Error("empty surface: the field has no zero set inside the bounds");
    return largest_component(mesh);
}

TriMesh relax_curvature(const TriMesh& mesh, const Skeleton& skel, const DecodeParams& params) {
    require_manifold(mesh, "relax_curvature");
    if (params.relax_iters < 0) throw Error("relax_iters must be >= 0");
    if (!(params.relax_step > 0.0 && params.relax_step <= 1.0))
        throw Error("relax_step must lie in (0,1]");

    TriMesh out = mesh;
    if (params.relax_iters == 0 || out.triangles.empty()) return out;

    // Pin band: vertices that start within pin_tolerance of a solid edge are
    // the skeletal constraint set and stay inside that band.
    Aabb skel_box;
    if (!skel.nodes.empty()) {
        skel_box.lo = skel_box.hi = skel.nodes.front().position;
        for (const SkeletonNode& node : skel.nodes) skel_box.expand(node.position);
    }
    const double pin_tol = params.pin_tolerance.value_or(0.05 * skel_box.diagonal());

    auto nearest_on_skeleton = [&](Vec3 p, double& dist) -> Vec3 {
        Vec3 best = p;
        dist = std::numeric_limits<double>::infinity();
        for (const EdgePair& e : skel.solid_edges) {
            const Vec3 q = closest_point_on_segment(p, skel.nodes[e.a].position,
                                                    skel.nodes[e.b].position);
            const double d = norm(p - q);
            if (d < dist) {
                dist = d;
                best = q;
            }
        }
        return best;
    };

    std::vector<int> pinned;
    if (pin_tol > 0.0 && !skel.solid_edges.empty()) {
        for (int v = 0; v < out.vertex_count(); ++v) {
            double d;
            nearest_on_skeleton(out.vertices[v], d);
            if (d < pin_tol) pinned.push_back(v);
        }
    }

    const double bbox_diag = bounding_box(out).diagonal();
    double area = surface_area(out);

    for (int iter = 0; iter < params.relax_iters; ++iter) {
        const detail::VertexLaplacian lap = detail::vertex_laplacian(out, /*clamp_weights=*/true);
        const double edge_len = mean_edge_length(out);
        double step = params.relax_step * edge_len * edge_len;

        std::vector<Vec3> candidate(out.vertices.size());
        double max_move = 0.0;
        bool moved = false;
        for (int halving = 0; halving < 48; ++halving, step *= 0.5) {
            max_move = 0.0;
            for (int v = 0; v < out.vertex_count(); ++v) {
                if (lap.boundary[v]) {
                    candidate[v] = out.vertices[v];
                    continue;
                }
                candidate[v] = out.vertices[v] + (step * 0.5) * lap.curvature_normal[v];
            }
            for (int v : pinned) {
                double d;
                const Vec3 q = nearest_on_skeleton(candidate[v], d);
                if (d > pin_tol && d > 0.0)
                    candidate[v] = q + (pin_tol / d) * (candidate[v] - q);
            }
            double trial_area = 0.0;
            for (const auto& tri : out.triangles)
                trial_area += 0.5 * norm(cross(candidate[tri[1]] - candidate[tri[0]],
                                               candidate[tri[2]] - candidate[tri[0]]));
            if (trial_area <= area + 1e-12) {
                for (int v = 0; v < out.vertex_count(); ++v)
                    max_move = std::max(max_move, norm(candidate[v] - out.vertices[v]));
                out.vertices = std::move(candidate);
                area = trial_area;
                moved = true;
                break;
            }
        }
        if (!moved) break;  // no admissible step left; area would only grow
        if (params.early_stop && max_move < 1e-6 * bbox_diag) break;
    }
    return out;
}

TriMesh decode(const Skeleton& skel, const DecodeParams& params) {
    const ScalarField field = assemble_field(skel, params);
    TriMesh mesh = extract_surface(field, params);
    if (params.relax_iters > 0) mesh = relax_curvature(mesh, skel, params);
    return mesh;
}

CurvatureStats mean_curvature_stats(const TriMesh& mesh) {
    require_manifold(mesh, "mean_curvature_stats");

    const detail::VertexLaplacian lap = detail::vertex_laplacian(mesh, /*clamp_weights=*/false);
    CurvatureStats stats;
    stats.per_vertex.assign(mesh.vertices.size(), 0.0);
    size_t interior = 0;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (lap.boundary[v] || lap.mixed_area[v] <= 1e-300) continue;
        const double h = 0.5 * norm(lap.curvature_normal[v]);
        stats.per_vertex[v] = h;
        stats.mean_abs += h;
        stats.max_abs = std::max(stats.max_abs, h);
        ++interior;
    }
    if (interior) stats.mean_abs /= static_cast<double>(interior);
    return stats;
}

}  // namespace minsurf
