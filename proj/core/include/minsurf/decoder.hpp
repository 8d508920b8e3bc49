#pragma once

#include <vector>

#include "minsurf/field.hpp"
#include "minsurf/mesh.hpp"
#include "minsurf/skeleton.hpp"

namespace minsurf {

/// Triangulates the zero isosurface of `field` on a regular grid of
/// `params.grid_resolution` cells per axis. Shared vertices are welded, zero
/// -area triangles removed, and when spurious fragments appear only the
/// largest connected component is kept. The result is watertight and
/// manifold by construction. Throws Error when the zero set is empty inside
/// the field bounds or the resolution is below 16.
TriMesh extract_surface(const ScalarField& field, const DecodeParams& params = {});

/// Explicit mean-curvature flow: each iteration moves every interior vertex
/// along the cotangent-weighted mean-curvature normal, scaled by relax_step
/// and normalized by the squared mean edge length. Cotangents are clamped to
/// >= 0 and the step is halved until the total area does not increase, so
/// area is non-increasing per iteration. Vertices starting within
/// pin_tolerance of a solid edge are projected back to that band after every
/// step; boundary vertices never move. Connectivity is untouched. Throws
/// Error on non-manifold input.
TriMesh relax_curvature(const TriMesh& mesh, const Skeleton& skel, const DecodeParams& params = {});

/// Full skeleton -> surface pipeline: assemble_field, extract_surface, then
/// relax_curvature (skipped when relax_iters is 0). Deterministic.
TriMesh decode(const Skeleton& skel, const DecodeParams& params = {});

struct CurvatureStats {
    double mean_abs = 0.0;
    double max_abs = 0.0;
    /// Per-vertex |H|; boundary and isolated vertices hold 0 and are excluded
    /// from the summary statistics.
    std::vector<double> per_vertex;
};

/// Discrete mean curvature from the cotangent formula with Voronoi-mixed
/// vertex areas. Throws Error on non-manifold input.
CurvatureStats mean_curvature_stats(const TriMesh& mesh);

}  // namespace minsurf
