#pragma once

#include <vector>

#include "minsurf/mesh.hpp"

// Shared internals between the mesh checker and the decoder; not installed.
namespace minsurf::detail {

struct ManifoldFlags {
    bool well_formed = false;     // indices in range, no repeated corner
    bool edge_manifold = false;
    bool vertex_manifold = false;

    bool manifold() const { return well_formed && edge_manifold && vertex_manifold; }
};

ManifoldFlags manifold_flags(const TriMesh& mesh);

struct VertexLaplacian {
    std::vector<Vec3> curvature_normal;  // (1 / 2A_i) * sum w_ij (v_j - v_i)
    std::vector<double> mixed_area;
    std::vector<bool> boundary;
};

/// Cotangent-weighted Laplacian of the vertex positions with Meyer-style
/// mixed Voronoi areas. clamp_weights zeroes negative cotangents (for the
/// flow); the raw weights serve the curvature estimate.
VertexLaplacian vertex_laplacian(const TriMesh& mesh, bool clamp_weights);

}  // namespace minsurf::detail
