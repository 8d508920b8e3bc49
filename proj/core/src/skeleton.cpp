#include "minsurf/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "minsurf/errors.hpp"

namespace minsurf {

const char* to_string(ConnectionOperator op) {
    switch (op) {
        case ConnectionOperator::Link: return "LINK";
        case ConnectionOperator::Merge: return "MERGE";
        case ConnectionOperator::OffLink: return "OFFLINK";
    }
    return "LINK";
}

const char* to_string(CoordSystem cs) {
    return cs == CoordSystem::Camera ? "camera" : "relative";
}

ValidationReport validate(const Skeleton& skel) {
    ValidationReport report;
    auto add = [&report](std::string rule, std::string msg, std::vector<int> idx) {
        report.violations.push_back({std::move(rule), std::move(msg), std::move(idx)});
    };

    const int n = skel.node_count();
    for (int i = 0; i < n; ++i) {
        const SkeletonNode& node = skel.nodes[i];
        if (!is_finite(node.position))
            add("non-finite-position", "node " + std::to_string(i) + " has a non-finite position", {i});
        if (!(node.size >= 0.0) || !std::isfinite(node.size))
            add("negative-size", "node " + std::to_string(i) + " has size < 0 or non-finite", {i});
    }

    auto check_edge = [&](EdgePair e, const char* kind) {
        if (e.a < 0 || e.b >= n) {
            add("index-out-of-range",
                std::string(kind) + " edge (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                    ") references a missing node",
                {e.a, e.b});
            return false;
        }
        if (e.a == e.b) {
            add("self-loop", std::string(kind) + " edge is a self-loop at node " + std::to_string(e.a),
                {e.a});
            return false;
        }
        return true;
    };

    std::set<EdgePair> solid_seen;
    for (const EdgePair& e : skel.solid_edges) {
        if (!check_edge(e, "solid")) continue;
        if (!solid_seen.insert(e).second)
            add("duplicate-edge",
                "solid edge (" + std::to_string(e.a) + "," + std::to_string(e.b) + ") is duplicated",
                {e.a, e.b});
    }
    std::set<EdgePair> virtual_seen;
    for (const VirtualEdge& ve : skel.virtual_edges) {
        if (!check_edge(ve.pair, "virtual")) continue;
        if (!virtual_seen.insert(ve.pair).second)
            add("duplicate-edge",
                "virtual edge (" + std::to_string(ve.pair.a) + "," + std::to_string(ve.pair.b) +
                    ") is duplicated",
                {ve.pair.a, ve.pair.b});
    }
    for (const EdgePair& e : solid_seen) {
        if (virtual_seen.count(e))
            add("conflicting-edge-kind",
                "pair (" + std::to_string(e.a) + "," + std::to_string(e.b) +
                    ") appears as both solid and virtual",
                {e.a, e.b});
    }

    report.ok = report.violations.empty();
    return report;
}

static void require_valid(const Skeleton& skel) {
    ValidationReport report = validate(skel);
    if (!report.ok)
        throw Error("invalid skeleton: " + report.violations.front().rule + " (" +
                    report.violations.front().message + ")");
}

AdjacencyMatrix to_adjacency(const Skeleton& skel) {
    require_valid(skel);
    AdjacencyMatrix adj;
    adj.n = skel.node_count();
    adj.entries.assign(static_cast<size_t>(adj.n) * adj.n, 0);
    for (const EdgePair& e : skel.solid_edges) {
        adj.at(e.a, e.b) = 1;
        adj.at(e.b, e.a) = 1;
    }
    for (const VirtualEdge& ve : skel.virtual_edges) {
        adj.at(ve.pair.a, ve.pair.b) = 2;
        adj.at(ve.pair.b, ve.pair.a) = 2;
    }
    return adj;
}

Skeleton from_adjacency(const AdjacencyMatrix& adj, const std::vector<Vec3>& positions,
                        const std::vector<double>& sizes, CoordSystem coord_system) {
    const int n = adj.n;
    if (adj.entries.size() != static_cast<size_t>(n) * n)
        throw Error("adjacency storage does not match node count");
    if (static_cast<int>(positions.size()) != n || static_cast<int>(sizes.size()) != n)
        throw Error("dimension mismatch: " + std::to_string(positions.size()) + " positions, " +
                    std::to_string(sizes.size()) + " sizes for " + std::to_string(n) + " nodes");

    Skeleton skel;
    skel.coord_system = coord_system;
    skel.nodes.resize(n);
    for (int i = 0; i < n; ++i) skel.nodes[i] = {positions[i], sizes[i]};

    for (int i = 0; i < n; ++i) {
        if (adj.at(i, i) != 0)
            throw Error("invalid adjacency code: nonzero diagonal at node " + std::to_string(i));
        for (int j = i + 1; j < n; ++j) {
            const int code = adj.at(i, j);
            if (code != adj.at(j, i))
                throw Error("asymmetric adjacency at (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
            if (code == 1) {
                skel.solid_edges.emplace_back(i, j);
            } else if (code == 2) {
                skel.virtual_edges.push_back({EdgePair(i, j), ConnectionOperator::Link});
            } else if (code != 0) {
                throw Error("invalid adjacency code " + std::to_string(code) + " at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
            }
        }
    }
    return skel;
}

static SimpleGraph make_graph(int n, std::vector<EdgePair> edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return {n, std::move(edges)};
}

SimpleGraph combined_graph(const Skeleton& skel) {
    std::vector<EdgePair> edges = skel.solid_edges;
    edges.reserve(edges.size() + skel.virtual_edges.size());
    for (const VirtualEdge& ve : skel.virtual_edges) edges.push_back(ve.pair);
    return make_graph(skel.node_count(), std::move(edges));
}

SimpleGraph solid_graph(const Skeleton& skel) {
    return make_graph(skel.node_count(), skel.solid_edges);
}

SimpleGraph virtual_graph(const Skeleton& skel) {
    std::vector<EdgePair> edges;
    edges.reserve(skel.virtual_edges.size());
    for (const VirtualEdge& ve : skel.virtual_edges) edges.push_back(ve.pair);
    return make_graph(skel.node_count(), std::move(edges));
}

std::vector<Vec3> normalize_bbox(const std::vector<Vec3>& positions) {
    if (positions.empty()) throw Error("no nodes");
    Vec3 lo = positions.front();
    Vec3 hi = positions.front();
    for (const Vec3& p : positions) {
        for (int a = 0; a < 3; ++a) {
            lo[a] = std::fmin(lo[a], p[a]);
            hi[a] = std::fmax(hi[a], p[a]);
        }
    }
    std::vector<Vec3> out(positions.size());
    for (size_t i = 0; i < positions.size(); ++i) {
        for (int a = 0; a < 3; ++a) {
            const double extent = hi[a] - lo[a];
            out[i][a] = extent > 0.0 ? (positions[i][a] - lo[a]) / extent : 0.0;
        }
    }
    return out;
}

namespace {

// mt19937_64 has a standardized sequence; only the <random> distributions are
// implementation-defined, so the mappings below are hand-rolled.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

    int uniform_int(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(engine_() % static_cast<uint64_t>(hi - lo + 1));
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

}  // namespace

Skeleton random_skeleton(uint64_t seed, const RandomSkeletonConfig& cfg) {
    if (cfg.min_nodes < 1 || cfg.min_nodes > cfg.max_nodes)
        throw Error("invalid node-count range");
    if (cfg.ve_fraction < 0.0 || cfg.ve_fraction > 1.0 || cfg.extra_se_fraction < 0.0 ||
        cfg.extra_se_fraction > 1.0)
        throw Error("edge fractions must lie in [0,1]");
    if (!(cfg.bbox_extent > 0.0)) throw Error("bbox extent must be positive");
    if (cfg.max_nodes == 1 && cfg.ve_fraction > 0.0)
        throw Error("single-node skeletons cannot carry virtual edges");

    Rng rng(seed);
    const int n = rng.uniform_int(cfg.min_nodes, cfg.max_nodes);

    // Snap coordinates and sizes to a 1/256 grid: values with a shared quantum
    // subtract exactly, so coordinate-system conversion preserves pairwise
    // difference vectors bit for bit.
    const int grid_max = std::max(1, static_cast<int>(std::lround(cfg.bbox_extent * 256.0)));
    auto snapped = [&](double lo_frac, double hi_frac) {
        const int lo = static_cast<int>(lo_frac * grid_max);
        const int hi = std::max(lo + 1, static_cast<int>(hi_frac * grid_max));
        return rng.uniform_int(lo, hi) / 256.0;
    };

    Skeleton skel;
    skel.nodes.resize(n);
    for (int i = 0; i < n; ++i) {
        skel.nodes[i].position = {snapped(0.0, 1.0), snapped(0.0, 1.0), snapped(0.0, 1.0)};
        skel.nodes[i].size = snapped(0.03, 0.12);
    }

    // Random spanning tree keeps the solid-edge subgraph connected.
    for (int i = 1; i < n; ++i) skel.solid_edges.emplace_back(rng.uniform_int(0, i - 1), i);
    std::sort(skel.solid_edges.begin(), skel.solid_edges.end());

    auto in_tree = [&](EdgePair e) {
        return std::binary_search(skel.solid_edges.begin(), skel.solid_edges.end(), e);
    };
    std::vector<EdgePair> extra_solid;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const EdgePair e(i, j);
            if (in_tree(e)) continue;
            if (rng.bernoulli(cfg.extra_se_fraction)) {
                extra_solid.push_back(e);
            } else if (rng.bernoulli(cfg.ve_fraction)) {
                const auto op = static_cast<ConnectionOperator>(rng.uniform_int(0, 2));
                skel.virtual_edges.push_back({e, op});
            }
        }
    }
    skel.solid_edges.insert(skel.solid_edges.end(), extra_solid.begin(), extra_solid.end());
    std::sort(skel.solid_edges.begin(), skel.solid_edges.end());
    std::sort(skel.virtual_edges.begin(), skel.virtual_edges.end());
    return skel;
}

}  // namespace minsurf
