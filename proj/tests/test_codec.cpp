#include <doctest.h>

#include <random>

#include "minsurf/codec.hpp"
#include "minsurf/errors.hpp"
#include "test_helpers.hpp"

using namespace minsurf;
using test_helpers::make_skeleton;

namespace {

const char* kCanonicalThreeNode =
    "NODES: 3\n"
    "ADJ:\n"
    "0 1 0\n"
    "1 0 2\n"
    "0 2 0\n"
    "X: 0 1 1\n"
    "Y: 0 0 1\n"
    "Z: 0 0 0\n"
    "SIZE: 0.5 0.5 0.5\n"
    "VE_OPS:\n"
    "1 2 LINK\n";

}  // namespace

TEST_CASE("parse_text reads the canonical block") {
    const Skeleton skel = parse_text(kCanonicalThreeNode);
    CHECK_EQ(skel.node_count(), 3);
    CHECK_EQ(skel.solid_edges, std::vector<EdgePair>{EdgePair(0, 1)});
    REQUIRE_EQ(skel.virtual_edges.size(), 1);
    CHECK_EQ(skel.virtual_edges[0].pair, EdgePair(1, 2));
    CHECK_EQ(skel.virtual_edges[0].op, ConnectionOperator::Link);
    CHECK_EQ(skel.coord_system, CoordSystem::Relative);
    CHECK_EQ(skel.nodes[2].position, Vec3{1, 1, 0});
    CHECK_EQ(skel.nodes[1].size, 0.5);
}

TEST_CASE("parse_text reads a minimal two-node block") {
    const Skeleton skel = parse_text("NODES: 2\nADJ:\n0 1\n1 0\nX: 0 1\nY: 0 0\nZ: 0 0\nSIZE: 1 1\n");
    CHECK_EQ(skel.node_count(), 2);
    CHECK_EQ(skel.solid_edges, std::vector<EdgePair>{EdgePair(0, 1)});
}

TEST_CASE("parse_text skips surrounding chatter and flexible spacing") {
    const std::string wrapped = "Sure! Here is the structure:\n\n" +
                                std::string("NODES:  2\nADJ:\n 0  1\n1 0\nX:  0 1\nY: 0 0\n"
                                            "Z: 0 0\nSIZE: 1 1\nHope this helps.\n");
    const Skeleton skel = parse_text(wrapped);
    CHECK_EQ(skel.node_count(), 2);
}

TEST_CASE("parse_text reports the offending line") {
    const char* bad_adj = "NODES: 2\nADJ:\n0 3\n3 0\nX: 0 1\nY: 0 0\nZ: 0 0\nSIZE: 1 1\n";
    try {
        parse_text(bad_adj);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK_EQ(e.line, 3);
        CHECK(std::string(e.what()).find("invalid adjacency code") != std::string::npos);
    }

    CHECK_THROWS_AS(parse_text("no skeleton here"), ParseError);
    CHECK_THROWS_AS(parse_text("NODES: 2\nADJ:\n0 1\n1 0\nX: 0\nY: 0 0\nZ: 0 0\nSIZE: 1 1\n"),
                    ParseError);  // X count mismatch
    CHECK_THROWS_AS(parse_text("NODES: 2\nADJ:\n0 1\n1 0\nX: 0 q\nY: 0 0\nZ: 0 0\nSIZE: 1 1\n"),
                    ParseError);  // non-numeric token
    CHECK_THROWS_AS(parse_text("NODES: 2\nADJ:\n0 1\n0 0\nX: 0 1\nY: 0 0\nZ: 0 0\nSIZE: 1 1\n"),
                    ParseError);  // asymmetric
    CHECK_THROWS_AS(parse_text("NODES: 2\nX: 0 1\nADJ:\n0 1\n1 0\nY: 0 0\nZ: 0 0\nSIZE: 1 1\n"),
                    ParseError);  // section order
}

TEST_CASE("serialize_text produces the canonical form") {
    Skeleton one = make_skeleton({{0.25, -1, 2}}, {0.75}, {});
    CHECK_EQ(serialize_text(one), "NODES: 1\nADJ:\n0\nX: 0.25\nY: -1\nZ: 2\nSIZE: 0.75\n");

    Skeleton merge = make_skeleton({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, {0.5, 0.5, 0.5}, {{0, 1}});
    merge.virtual_edges.push_back({EdgePair(1, 2), ConnectionOperator::Merge});
    const std::string text = serialize_text(merge);
    CHECK(text.find("VE_OPS:\n1 2 MERGE\n") != std::string::npos);
    CHECK_EQ(parse_text(text), merge);

    // All-Link virtual edges omit the section entirely.
    const Skeleton link = make_skeleton({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}, {0.5, 0.5, 0.5},
                                        {{0, 1}}, {{1, 2}});
    CHECK(serialize_text(link).find("VE_OPS") == std::string::npos);
}

TEST_CASE("serialize_text then parse_text is the identity on the generator corpus") {
    for (uint64_t seed = 0; seed < 1000; ++seed) {
        Skeleton skel = random_skeleton(seed);
        if (seed % 2 == 1) skel.coord_system = CoordSystem::Camera;
        const std::string text = serialize_text(skel);
        const Skeleton back = parse_text(text);
        REQUIRE_MESSAGE(back == skel, "text roundtrip changed skeleton at seed ", seed);
        REQUIRE_EQ(serialize_text(back), text);  // bit-exact
    }
}

TEST_CASE("serialize_text after parse_text canonicalizes loose input") {
    const std::string canonical = serialize_text(parse_text(kCanonicalThreeNode));
    // The only virtual edge uses Link, so VE_OPS disappears from the canonical
    // form; a second pass is stable.
    CHECK_EQ(canonical,
             "NODES: 3\nADJ:\n0 1 0\n1 0 2\n0 2 0\nX: 0 1 1\nY: 0 0 1\nZ: 0 0 0\n"
             "SIZE: 0.5 0.5 0.5\n");
    CHECK_EQ(serialize_text(parse_text(canonical)), canonical);
}

TEST_CASE("JSON mirror roundtrips bit-exactly") {
    for (uint64_t seed = 0; seed < 500; ++seed) {
        Skeleton skel = random_skeleton(seed);
        if (seed % 2 == 1) skel.coord_system = CoordSystem::Camera;
        const std::string json = serialize_json(skel);
        const Skeleton back = parse_json(json);
        REQUIRE_MESSAGE(back == skel, "json roundtrip changed skeleton at seed ", seed);
        REQUIRE_EQ(serialize_json(back), json);
    }
    CHECK_THROWS_AS(parse_json("{not json"), ParseError);
    CHECK_THROWS_AS(parse_json("{\"nodes\": 2}"), ParseError);
}

TEST_CASE("convert_coords subtracts the anchor and preserves topology") {
    Skeleton cam = make_skeleton({{1, 2, 3}, {4, 6, 3}}, {0.5, 0.5}, {{0, 1}});
    cam.coord_system = CoordSystem::Camera;
    const Skeleton rel = convert_coords(cam, CoordSystem::Relative);
    CHECK_EQ(rel.coord_system, CoordSystem::Relative);
    CHECK_EQ(rel.nodes[0].position, Vec3{0, 0, 0});
    CHECK_EQ(rel.nodes[1].position, Vec3{3, 4, 0});
    CHECK_EQ(rel.solid_edges, cam.solid_edges);
    CHECK_EQ(rel.nodes[0].size, cam.nodes[0].size);

    // Converting to the current system is the identity.
    CHECK(convert_coords(cam, CoordSystem::Camera) == cam);
    CHECK(convert_coords(rel, CoordSystem::Relative) == rel);
}

TEST_CASE("anchor rule: min x, then max y, then min z, then lowest index") {
    Skeleton skel = make_skeleton({{1, 5, 0}, {0, 2, 7}, {0, 9, 3}, {0, 9, 1}}, {1, 1, 1, 1},
                                  {{0, 1}, {1, 2}, {2, 3}});
    CHECK_EQ(anchor_node(skel), 3);  // x=0 tie -> y=9 tie -> z=1 wins
    skel.nodes[3].position.z = 3;    // full tie with node 2 -> lowest index
    CHECK_EQ(anchor_node(skel), 2);
}

TEST_CASE("camera->relative preserves pairwise difference vectors exactly") {
    for (uint64_t seed = 0; seed < 500; ++seed) {
        Skeleton cam = random_skeleton(seed);
        cam.coord_system = CoordSystem::Camera;
        const Skeleton rel = convert_coords(cam, CoordSystem::Relative);
        for (int i = 0; i < cam.node_count(); ++i) {
            for (int j = i + 1; j < cam.node_count(); ++j) {
                const Vec3 before = cam.nodes[i].position - cam.nodes[j].position;
                const Vec3 after = rel.nodes[i].position - rel.nodes[j].position;
                REQUIRE_EQ(before, after);
            }
        }
        // Camera -> Relative -> Camera keeps the anchored coordinates.
        const Skeleton back = convert_coords(rel, CoordSystem::Camera);
        CHECK_EQ(back.coord_system, CoordSystem::Camera);
        for (int i = 0; i < cam.node_count(); ++i)
            CHECK_EQ(back.nodes[i].position, rel.nodes[i].position);
    }
}

TEST_CASE("prompt templates are stable and distinct") {
    CHECK(prompt_template(PromptVariant::TextSimple).substr(0, 25) == "Please analyze this image");
    CHECK(prompt_template(PromptVariant::TextExact).find("0 (no connection), 1 (solid edge)") !=
          std::string_view::npos);
    CHECK(prompt_template(PromptVariant::TextDetailed).find("camera-based") !=
          std::string_view::npos);
    CHECK(prompt_template(PromptVariant::TextSimple) != prompt_template(PromptVariant::TextExact));
}

TEST_CASE("dataset records are deterministic, well-formed JSON that reparses") {
    const Skeleton skel = parse_text(kCanonicalThreeNode);
    const DatasetRecord record = make_dataset_record("img/0001.png", PromptVariant::TextSimple, skel);
    CHECK(record.prompt.substr(0, 25) == "Please analyze this image");
    CHECK_EQ(record.answer, serialize_text(skel));
    CHECK(parse_text(record.answer) == skel);

    const std::string line = record.to_json_line();
    CHECK_EQ(line, make_dataset_record("img/0001.png", PromptVariant::TextSimple, skel)
                       .to_json_line());
    CHECK(line.find('\n') == std::string::npos);
    CHECK(line.find("\"messages\"") != std::string::npos);
    CHECK(line.find("img/0001.png") != std::string::npos);

    Skeleton bad = skel;
    bad.solid_edges.push_back(EdgePair(0, 0));
    CHECK_THROWS_AS(make_dataset_record("x.png", PromptVariant::TextSimple, bad), Error);
}

TEST_CASE("parser survives arbitrary byte input with structured errors") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        std::string noise(rng() % 200, '\0');
        for (char& c : noise) c = static_cast<char>(rng() & 0xff);
        try {
            (void)parse_text(noise);
        } catch (const ParseError&) {
        }
        try {
            (void)parse_json(noise);
        } catch (const ParseError&) {
        }
    }
    CHECK(true);  // reaching here means no aborts
}
