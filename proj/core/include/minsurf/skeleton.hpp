#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "minsurf/vec3.hpp"

namespace minsurf {

/// One skeleton node: a 3D position plus a size parameter giving the local
/// surface offset (tube radius) around that node.
struct SkeletonNode {
    Vec3 position;
    double size = 0.0;
};

enum class EdgeKind : uint8_t { Solid, Virtual };

/// How a virtual-edge tube attaches to the solid-edge surface.
/// Solid edges never carry an operator.
enum class ConnectionOperator : uint8_t { Link, Merge, OffLink };

enum class CoordSystem : uint8_t { Relative, Camera };

const char* to_string(ConnectionOperator op);
const char* to_string(CoordSystem cs);

/// Unordered node-index pair; stored normalized with a <= b.
struct EdgePair {
    int a = 0;
    int b = 0;

    EdgePair() = default;
    EdgePair(int i, int j) : a(i < j ? i : j), b(i < j ? j : i) {}

    friend bool operator==(EdgePair l, EdgePair r) { return l.a == r.a && l.b == r.b; }
    friend bool operator<(EdgePair l, EdgePair r) { return l.a != r.a ? l.a < r.a : l.b < r.b; }
};

struct VirtualEdge {
    EdgePair pair;
    ConnectionOperator op = ConnectionOperator::Link;

    friend bool operator==(const VirtualEdge& l, const VirtualEdge& r) {
        return l.pair == r.pair && l.op == r.op;
    }
    friend bool operator<(const VirtualEdge& l, const VirtualEdge& r) { return l.pair < r.pair; }
};

/// Dual-edge topological skeleton: nodes with positions and sizes, a set of
/// solid edges forming the primary skeleton, and a set of virtual edges with
/// per-edge connection operators. Edge sets are kept sorted and deduplicated
/// by the builders in this module; validate() checks the full invariant set.
struct Skeleton {
    std::vector<SkeletonNode> nodes;
    std::vector<EdgePair> solid_edges;
    std::vector<VirtualEdge> virtual_edges;
    CoordSystem coord_system = CoordSystem::Relative;

    int node_count() const { return static_cast<int>(nodes.size()); }

    friend bool operator==(const Skeleton& l, const Skeleton& r) {
        if (l.coord_system != r.coord_system || l.nodes.size() != r.nodes.size()) return false;
        for (size_t i = 0; i < l.nodes.size(); ++i) {
            if (l.nodes[i].position != r.nodes[i].position || l.nodes[i].size != r.nodes[i].size)
                return false;
        }
        return l.solid_edges == r.solid_edges && l.virtual_edges == r.virtual_edges;
    }
};

/// n x n symmetric grid over {0 = none, 1 = solid edge, 2 = virtual edge}.
struct AdjacencyMatrix {
    int n = 0;
    std::vector<int> entries;  // row-major, n*n

    int at(int i, int j) const { return entries[static_cast<size_t>(i) * n + j]; }
    int& at(int i, int j) { return entries[static_cast<size_t>(i) * n + j]; }
};

struct Violation {
    std::string rule;
    std::string message;
    std::vector<int> indices;
};

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

/// Simple undirected graph view: n vertices, sorted unique edges.
struct SimpleGraph {
    int n = 0;
    std::vector<EdgePair> edges;
};

/// Checks every structural invariant and reports all violations, not just the
/// first: index ranges, self-loops, duplicate edges, solid/virtual conflicts,
/// finite positions, non-negative sizes.
ValidationReport validate(const Skeleton& skel);

/// Encodes connectivity as the 0/1/2 adjacency matrix. Throws Error naming the
/// violated rule if the skeleton is invalid.
AdjacencyMatrix to_adjacency(const Skeleton& skel);

/// Inverse of to_adjacency. Virtual edges default to the Link operator since
/// the 0/1/2 code cannot carry operators. Throws Error on an asymmetric
/// matrix, a code outside {0,1,2}, or a position/size length mismatch.
Skeleton from_adjacency(const AdjacencyMatrix& adj, const std::vector<Vec3>& positions,
                        const std::vector<double>& sizes,
                        CoordSystem coord_system = CoordSystem::Relative);

/// Union of solid and virtual edges with kind and operator erased.
SimpleGraph combined_graph(const Skeleton& skel);

SimpleGraph solid_graph(const Skeleton& skel);
SimpleGraph virtual_graph(const Skeleton& skel);

/// Per-axis min-max map into [0,1]^3. A zero-extent axis maps to 0 for every
/// point. Throws Error on an empty list.
std::vector<Vec3> normalize_bbox(const std::vector<Vec3>& positions);

struct RandomSkeletonConfig {
    int min_nodes = 2;
    int max_nodes = 8;
    /// Probability that a non-tree node pair becomes a virtual edge.
    double ve_fraction = 0.25;
    /// Positions are drawn from [0, bbox_extent]^3.
    double bbox_extent = 4.0;
    /// Probability that a non-tree node pair becomes an extra solid edge.
    double extra_se_fraction = 0.15;
};

/// Seeded generator for property testing. The solid-edge subgraph is built as
/// a random spanning tree (hence connected); extra solid and virtual edges are
/// added by Bernoulli sampling. Positions and sizes are snapped to a 1/256
/// grid so coordinate differences are exact in double arithmetic. Identical
/// seed and config give an identical skeleton on any platform.
Skeleton random_skeleton(uint64_t seed, const RandomSkeletonConfig& cfg = {});

}  // namespace minsurf
