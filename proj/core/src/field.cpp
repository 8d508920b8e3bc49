#include "minsurf/field.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>
#include <vector>

#include "minsurf/errors.hpp"

namespace minsurf {

double round_cone_distance(Vec3 p, Vec3 a, Vec3 b, double ra, double rb) {
    const Vec3 ba = b - a;
    const double l2 = dot(ba, ba);
    const double rr = ra - rb;
    const double a2 = l2 - rr * rr;

    // Degenerate segment, or one endpoint sphere swallowing the other: the
    // hull reduces to the nearer sphere.
    if (l2 <= 1e-30 || a2 <= 0.0)
        return std::min(norm(p - a) - ra, norm(p - b) - rb);

    const double il2 = 1.0 / l2;
    const Vec3 pa = p - a;
    const double y = dot(pa, ba);
    const double z = y - l2;
    const Vec3 q = pa * l2 - ba * y;
    const double x2 = dot(q, q);
    const double y2 = y * y * l2;
    const double z2 = z * z * l2;

    const double k = (rr >= 0.0 ? 1.0 : -1.0) * rr * rr * x2;
    if ((z >= 0.0 ? 1.0 : -1.0) * a2 * z2 > k) return std::sqrt(x2 + z2) * il2 - rb;
    if ((y >= 0.0 ? 1.0 : -1.0) * a2 * y2 < k) return std::sqrt(x2 + y2) * il2 - ra;
    return (std::sqrt(x2 * a2 * il2) + y * rr) * il2 - ra;
}

double smooth_min(double a, double b, double k) {
    const double h = std::max(k - std::fabs(a - b), 0.0) / k;
    return std::min(a, b) - h * h * k * 0.25;
}

namespace {

struct Tube {
    Vec3 a, b;
    double ra, rb;
};

// Endpoint order is canonicalized so the distance field depends only on the
// geometric edge, not on node numbering.
Tube make_tube(Vec3 a, Vec3 b, double ra, double rb) {
    const bool swap = std::tie(a.x, a.y, a.z, ra) > std::tie(b.x, b.y, b.z, rb);
    return swap ? Tube{b, a, rb, ra} : Tube{a, b, ra, rb};
}

// Deterministic unit vector perpendicular to d: project out the coordinate
// axis least aligned with d.
Vec3 perpendicular(Vec3 d) {
    const Vec3 u = normalized(d);
    const double ax = std::fabs(u.x), ay = std::fabs(u.y), az = std::fabs(u.z);
    Vec3 ref{1, 0, 0};
    if (ay <= ax && ay <= az) ref = {0, 1, 0};
    else if (az <= ax && az <= ay) ref = {0, 0, 1};
    const Vec3 n = ref - dot(ref, u) * u;
    return normalized(n);
}

void require_decodable(const Skeleton& skel) {
    const ValidationReport report = validate(skel);
    if (!report.ok) throw Error("invalid skeleton: " + report.violations.front().rule);
    if (skel.nodes.empty()) throw Error("no nodes");
    for (int i = 0; i < skel.node_count(); ++i)
        if (!(skel.nodes[i].size > 0.0))
            throw Error("node " + std::to_string(i) + " has zero size; tubes need radius > 0");

    // Every node must be reachable through solid edges.
    std::vector<std::vector<int>> adjacent(skel.nodes.size());
    for (const EdgePair& e : skel.solid_edges) {
        adjacent[e.a].push_back(e.b);
        adjacent[e.b].push_back(e.a);
    }
    std::vector<bool> seen(skel.nodes.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int w : adjacent[v])
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end())
        throw Error("solid-edge subgraph is disconnected");
}

}  // namespace

ScalarField assemble_field(const Skeleton& skel, const DecodeParams& params) {
    require_decodable(skel);

    double mean_size = 0.0, max_size = 0.0;
    for (const SkeletonNode& node : skel.nodes) {
        mean_size += node.size;
        max_size = std::max(max_size, node.size);
    }
    mean_size /= static_cast<double>(skel.nodes.size());

    const double k = params.blend_smoothness.value_or(0.25 * mean_size);
    if (!(k > 0.0)) throw Error("blend smoothness must be positive");

    std::vector<Tube> tubes;
    double max_offset = 0.0;
    for (const EdgePair& e : skel.solid_edges)
        tubes.push_back(make_tube(skel.nodes[e.a].position, skel.nodes[e.b].position,
                                  skel.nodes[e.a].size, skel.nodes[e.b].size));
    for (const VirtualEdge& ve : skel.virtual_edges) {
        const SkeletonNode& na = skel.nodes[ve.pair.a];
        const SkeletonNode& nb = skel.nodes[ve.pair.b];
        switch (ve.op) {
            case ConnectionOperator::Link:
                tubes.push_back(make_tube(na.position, nb.position, na.size, nb.size));
                break;
            case ConnectionOperator::Merge:
                tubes.push_back(make_tube(na.position, nb.position, na.size, nb.size));
                tubes.push_back({na.position, na.position, na.size, na.size});
                tubes.push_back({nb.position, nb.position, nb.size, nb.size});
                break;
            case ConnectionOperator::OffLink: {
                const double offset =
                    params.offlink_offset.value_or(std::max(na.size, nb.size));
                if (offset < 0.0) throw Error("offlink offset must be non-negative");
                const Vec3 shift = offset * perpendicular(nb.position - na.position);
                tubes.push_back(make_tube(na.position + shift, nb.position + shift, na.size,
                                          nb.size));
                max_offset = std::max(max_offset, offset);
                break;
            }
        }
    }

    Aabb bounds;
    bounds.lo = bounds.hi = skel.nodes.front().position;
    for (const SkeletonNode& node : skel.nodes) bounds.expand(node.position);
    bounds.inflate(1.5 * max_size + max_offset + k);

    const double empty_value = bounds.diagonal() + 1.0;

    ScalarField field;
    field.bounds = bounds;
    field.evaluate = [tubes, k, empty_value](Vec3 p) -> double {
        if (tubes.empty()) return empty_value;
        std::vector<double> distances;
        distances.reserve(tubes.size());
        for (const Tube& t : tubes)
            distances.push_back(round_cone_distance(p, t.a, t.b, t.ra, t.rb));
        // Folding in sorted order makes the result a function of the value
        // set alone, independent of edge enumeration order.
        std::sort(distances.begin(), distances.end());
        double d = distances.front();
        for (size_t i = 1; i < distances.size(); ++i) d = smooth_min(d, distances[i], k);
        return d;
    };
    return field;
}

}  // namespace minsurf
