#include <doctest.h>

#include <set>

#include "minsurf/errors.hpp"
#include "minsurf/skeleton.hpp"
#include "test_helpers.hpp"

using namespace minsurf;
using test_helpers::make_skeleton;

TEST_CASE("validate accepts a minimal two-node skeleton") {
    const Skeleton skel = make_skeleton({{0, 0, 0}, {1, 0, 0}}, {0.5, 0.5}, {{0, 1}});
    const ValidationReport report = validate(skel);
    CHECK(report.ok);
    CHECK(report.violations.empty());
}

TEST_CASE("validate flags self-loops") {
    Skeleton skel = make_skeleton({{0, 0, 0}}, {0.5}, {});
    skel.solid_edges.push_back(EdgePair(0, 0));
    const ValidationReport report = validate(skel);
    CHECK_FALSE(report.ok);
    REQUIRE_EQ(report.violations.size(), 1);
    CHECK_EQ(report.violations[0].rule, "self-loop");
}

TEST_CASE("validate flags a pair present as both solid and virtual") {
    Skeleton skel = make_skeleton({{0, 0, 0}, {1, 0, 0}}, {0.5, 0.5}, {{0, 1}}, {{0, 1}});
    const ValidationReport report = validate(skel);
    CHECK_FALSE(report.ok);
    REQUIRE_EQ(report.violations.size(), 1);
    CHECK_EQ(report.violations[0].rule, "conflicting-edge-kind");
}

TEST_CASE("validate reports all violations, not just the first") {
    Skeleton skel = make_skeleton({{0, 0, 0}, {1, 0, 0}}, {0.5, -1.0}, {{0, 1}}, {{0, 1}});
    skel.solid_edges.push_back(EdgePair(0, 5));
    const ValidationReport report = validate(skel);
    CHECK_FALSE(report.ok);
    std::set<std::string> rules;
    for (const Violation& v : report.violations) rules.insert(v.rule);
    CHECK(rules.count("negative-size"));
    CHECK(rules.count("conflicting-edge-kind"));
    CHECK(rules.count("index-out-of-range"));
}

TEST_CASE("to_adjacency encodes solid as 1 and virtual as 2") {
    const Skeleton two = make_skeleton({{0, 0, 0}, {1, 0, 0}}, {0.5, 0.5}, {{0, 1}});
    const AdjacencyMatrix a2 = to_adjacency(two);
    CHECK_EQ(a2.entries, std::vector<int>{0, 1, 1, 0});

    const Skeleton three =
        make_skeleton({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, {0.5, 0.5, 0.5}, {{0, 1}}, {{1, 2}});
    const AdjacencyMatrix a3 = to_adjacency(three);
    CHECK_EQ(a3.entries, std::vector<int>{0, 1, 0, 1, 0, 2, 0, 2, 0});

    const Skeleton isolated = make_skeleton({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, {1, 1, 1}, {});
    const AdjacencyMatrix a0 = to_adjacency(isolated);
    CHECK_EQ(a0.entries, std::vector<int>(9, 0));
}

TEST_CASE("to_adjacency rejects an invalid skeleton") {
    Skeleton skel = make_skeleton({{0, 0, 0}}, {0.5}, {});
    skel.solid_edges.push_back(EdgePair(0, 0));
    CHECK_THROWS_WITH_AS(to_adjacency(skel), doctest::Contains("self-loop"), Error);
}

TEST_CASE("from_adjacency inverts to_adjacency and rejects bad input") {
    const Skeleton skel =
        make_skeleton({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, {0.5, 0.4, 0.3}, {{0, 1}}, {{1, 2}});
    const AdjacencyMatrix adj = to_adjacency(skel);
    std::vector<Vec3> positions;
    std::vector<double> sizes;
    for (const SkeletonNode& n : skel.nodes) {
        positions.push_back(n.position);
        sizes.push_back(n.size);
    }
    const Skeleton back = from_adjacency(adj, positions, sizes);
    CHECK_EQ(to_adjacency(back).entries, adj.entries);
    CHECK(back == skel);

    AdjacencyMatrix bad = adj;
    bad.at(0, 2) = 3;
    bad.at(2, 0) = 3;
    CHECK_THROWS_WITH_AS(from_adjacency(bad, positions, sizes),
                         doctest::Contains("invalid adjacency code"), Error);

    AdjacencyMatrix asym = adj;
    asym.at(0, 2) = 1;
    CHECK_THROWS_WITH_AS(from_adjacency(asym, positions, sizes), doctest::Contains("asymmetric"),
                         Error);

    positions.pop_back();
    CHECK_THROWS_WITH_AS(from_adjacency(adj, positions, sizes),
                         doctest::Contains("dimension mismatch"), Error);
}

TEST_CASE("combined_graph erases kind and operator") {
    const Skeleton path =
        make_skeleton({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, {1, 1, 1}, {{0, 1}}, {{1, 2}});
    const SimpleGraph g = combined_graph(path);
    CHECK_EQ(g.n, 3);
    CHECK_EQ(g.edges, std::vector<EdgePair>{EdgePair(0, 1), EdgePair(1, 2)});

    const SimpleGraph empty = combined_graph(make_skeleton({{0, 0, 0}}, {1}, {}));
    CHECK(empty.edges.empty());

    const Skeleton tri = make_skeleton({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {1, 1, 1},
                                       {{0, 1}, {1, 2}, {0, 2}});
    CHECK_EQ(combined_graph(tri).edges.size(), 3);
}

TEST_CASE("combined_graph edge count is |SE| + |VE|") {
    for (uint64_t seed = 0; seed < 50; ++seed) {
        const Skeleton skel = random_skeleton(seed);
        CHECK_EQ(combined_graph(skel).edges.size(),
                 skel.solid_edges.size() + skel.virtual_edges.size());
    }
}

TEST_CASE("normalize_bbox maps extremes to 0 and 1, degenerate axes to 0") {
    const auto a = normalize_bbox({{0, 0, 0}, {2, 4, 0}});
    CHECK_EQ(a[0], Vec3{0, 0, 0});
    CHECK_EQ(a[1], Vec3{1, 1, 0});

    const auto single = normalize_bbox({{3.5, -2, 17}});
    CHECK_EQ(single[0], Vec3{0, 0, 0});

    const auto line = normalize_bbox({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}});
    CHECK_EQ(line[1], Vec3{0.5, 0, 0});
    CHECK_EQ(line[2], Vec3{1, 0, 0});

    CHECK_THROWS_WITH_AS(normalize_bbox({}), "no nodes", Error);
}

TEST_CASE("normalize_bbox is invariant under translation and uniform scaling") {
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const Skeleton skel = random_skeleton(seed);
        std::vector<Vec3> positions;
        for (const SkeletonNode& n : skel.nodes) positions.push_back(n.position);
        const auto base = normalize_bbox(positions);

        std::vector<Vec3> moved = positions;
        for (Vec3& p : moved) p = 3.7 * p + Vec3{11.0, -4.25, 0.5};
        const auto mapped = normalize_bbox(moved);
        for (size_t i = 0; i < base.size(); ++i) {
            for (int axis = 0; axis < 3; ++axis) {
                CHECK(mapped[i][axis] == doctest::Approx(base[i][axis]).epsilon(1e-12));
                CHECK(mapped[i][axis] >= 0.0);
                CHECK(mapped[i][axis] <= 1.0);
            }
        }
    }
}

TEST_CASE("random_skeleton is deterministic and honors the node range") {
    const Skeleton a = random_skeleton(42);
    const Skeleton b = random_skeleton(42);
    CHECK(a == b);

    RandomSkeletonConfig cfg;
    cfg.min_nodes = 2;
    cfg.max_nodes = 16;
    for (uint64_t seed = 0; seed < 200; ++seed) {
        const Skeleton skel = random_skeleton(seed, cfg);
        CHECK(skel.node_count() >= 2);
        CHECK(skel.node_count() <= 16);
    }

    cfg.min_nodes = cfg.max_nodes = 2;
    CHECK_EQ(random_skeleton(7, cfg).node_count(), 2);
}

TEST_CASE("random_skeleton output always validates (validate as oracle)") {
    for (uint64_t seed = 0; seed < 1000; ++seed) {
        const Skeleton skel = random_skeleton(seed);
        const ValidationReport report = validate(skel);
        REQUIRE_MESSAGE(report.ok, "seed ", seed);
    }
}

TEST_CASE("random_skeleton keeps the solid subgraph connected") {
    for (uint64_t seed = 0; seed < 200; ++seed) {
        const Skeleton skel = random_skeleton(seed);
        std::vector<std::vector<int>> adjacent(skel.nodes.size());
        for (const EdgePair& e : skel.solid_edges) {
            adjacent[e.a].push_back(e.b);
            adjacent[e.b].push_back(e.a);
        }
        std::vector<bool> seen(skel.nodes.size(), false);
        std::vector<int> stack{0};
        seen[0] = true;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : adjacent[v])
                if (!seen[w]) {
                    seen[w] = true;
                    stack.push_back(w);
                }
        }
        CHECK(std::count(seen.begin(), seen.end(), false) == 0);
    }
}

TEST_CASE("random_skeleton rejects impossible configs") {
    RandomSkeletonConfig cfg;
    cfg.min_nodes = 3;
    cfg.max_nodes = 2;
    CHECK_THROWS_AS(random_skeleton(0, cfg), Error);

    cfg = {};
    cfg.min_nodes = cfg.max_nodes = 1;
    cfg.ve_fraction = 0.5;
    CHECK_THROWS_AS(random_skeleton(0, cfg), Error);

    cfg = {};
    cfg.ve_fraction = 1.5;
    CHECK_THROWS_AS(random_skeleton(0, cfg), Error);
}

TEST_CASE("adjacency roundtrip holds on the generator corpus") {
    for (uint64_t seed = 0; seed < 200; ++seed) {
        const Skeleton skel = random_skeleton(seed);
        const AdjacencyMatrix adj = to_adjacency(skel);
        std::vector<Vec3> positions;
        std::vector<double> sizes;
        for (const SkeletonNode& n : skel.nodes) {
            positions.push_back(n.position);
            sizes.push_back(n.size);
        }
        CHECK_EQ(to_adjacency(from_adjacency(adj, positions, sizes)).entries, adj.entries);
    }
}
