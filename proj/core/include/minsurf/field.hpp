#pragma once

#include <functional>
#include <optional>

#include "minsurf/skeleton.hpp"
#include "minsurf/vec3.hpp"

namespace minsurf {

/// Decoder knobs. Empty optionals derive data-dependent defaults: blend
/// smoothness 0.25 x mean node size, offlink offset = the larger endpoint
/// size per edge, pin tolerance 0.05 x skeleton bbox diagonal.
struct DecodeParams {
    int grid_resolution = 64;
    std::optional<double> blend_smoothness;
    std::optional<double> offlink_offset;
    double relax_step = 0.1;
    int relax_iters = 200;
    std::optional<double> pin_tolerance;
    /// Stop relaxing once max displacement < 1e-6 x bbox diagonal.
    bool early_stop = false;
};

/// Implicit surface: negative inside, positive outside, zero on the surface.
/// `bounds` encloses the zero set with margin.
struct ScalarField {
    std::function<double(Vec3)> evaluate;
    Aabb bounds;
};

/// Exact signed distance to the convex hull of two spheres (a tube whose
/// radius interpolates linearly between the endpoints). Degenerate segments
/// and fully nested spheres fall back to sphere distances.
double round_cone_distance(Vec3 p, Vec3 a, Vec3 b, double ra, double rb);

/// Polynomial smooth minimum; C1, never above min(a,b).
double smooth_min(double a, double b, double k);

/// Builds the multi-tube field: a smooth minimum over one tube per solid
/// edge and per virtual edge. Virtual edges honor their operator: Link adds
/// the tube directly, Merge also blends in the endpoint node spheres, OffLink
/// shifts the tube sideways by the offlink offset before construction. The
/// fold is applied to value-sorted terms, making the field invariant under
/// node relabeling. Throws Error on a zero node size or a disconnected
/// solid-edge subgraph.
ScalarField assemble_field(const Skeleton& skel, const DecodeParams& params = {});

}  // namespace minsurf
