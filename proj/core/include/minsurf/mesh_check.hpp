#pragma once

#include <string>

#include "minsurf/mesh.hpp"

namespace minsurf {

/// Topology and quality findings for a triangle mesh. Findings are data, not
/// errors: check_mesh never throws on a bad mesh.
struct MeshReport {
    int vertex_count = 0;
    int edge_count = 0;
    int face_count = 0;
    bool watertight = false;      // every edge borders exactly 2 triangles
    bool edge_manifold = false;   // every edge borders at most 2 triangles
    bool vertex_manifold = false; // every vertex's triangles form one fan
    bool oriented = false;        // adjacent triangles wind consistently
    int boundary_edge_count = 0;
    int euler_characteristic = 0;
    /// (2 - chi) / 2 for a closed connected oriented mesh, else -1.
    int genus = -1;
    int connected_components = 0;
    double area = 0.0;
    double mean_abs_curvature = 0.0;
    double max_abs_curvature = 0.0;

    std::string to_json() const;
};

MeshReport check_mesh(const TriMesh& mesh);

}  // namespace minsurf
