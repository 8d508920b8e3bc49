#include "minsurf/codec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "minsurf/errors.hpp"
#include "minsurf/num_format.hpp"

namespace minsurf {

namespace {

constexpr std::string_view kTextSimple =
    "Please analyze this image and infer its possible topological structure. Output your "
    "answer in matrix form, including the adjacency matrix for connectivity, and the x, y, "
    "and z coordinate matrices.";

constexpr std::string_view kTextExact =
    "A line drawing representing the 2D planar projection of a contour, overlaid with "
    "shading, depicting an approximate minimal surface 3D model. Analyze this image and "
    "infer its topological skeleton. Output: the node count as an integer; the connectivity "
    "as an adjacency matrix with elements 0 (no connection), 1 (solid edge), or 2 (void "
    "edge); and the x, y, and z coordinate matrices in 2D array format, using a relative "
    "coordinate system with the top-left node as the origin.";

constexpr std::string_view kTextDetailed =
    "A line drawing representing the 2D planar projection of a contour, overlaid with "
    "shading, depicting an approximate minimal surface 3D model. Analyze this image and "
    "infer its topological skeleton. Inference method: (1) perform region segmentation to "
    "identify surface patches and voids; (2) extract skeletons from the main regions, where "
    "closed skeletons correspond to void edges and the endpoints of linear skeletons are "
    "nodes; (3) detect internal lines not involved in region segmentation as additional "
    "nodes with void-edge connections; (4) ensure full skeleton connectivity by extending "
    "nodes along the z-axis. Output: the node count as an integer; the connectivity as an "
    "adjacency matrix with elements 0 (no connection), 1 (solid edge), or 2 (void edge); "
    "and the x, y, and z coordinate matrices in 2D array format, using a camera-based "
    "coordinate system (x horizontal right, y vertical up, z perpendicular outward from the "
    "image plane).";

// Guards against absurd node counts on fuzzed input before any allocation.
constexpr long long kMaxNodes = 4096;

std::string_view trim(std::string_view s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_tokens(std::string_view s) {
    std::vector<std::string_view> tokens;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        size_t j = i;
        while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
        if (j > i) tokens.push_back(s.substr(i, j - i));
        i = j;
    }
    return tokens;
}

struct LineCursor {
    std::vector<std::string_view> lines;
    size_t pos = 0;

    explicit LineCursor(std::string_view text) {
        size_t start = 0;
        while (start <= text.size()) {
            size_t nl = text.find('\n', start);
            if (nl == std::string_view::npos) {
                lines.push_back(text.substr(start));
                break;
            }
            lines.push_back(text.substr(start, nl - start));
            start = nl + 1;
        }
    }

    int line_no() const { return static_cast<int>(pos) + 1; }
    bool done() const { return pos >= lines.size(); }
    std::string_view current() const { return trim(lines[pos]); }
};

// A section header is "NAME:" optionally followed by inline values.
bool take_header(LineCursor& cur, std::string_view name, std::string_view& rest) {
    if (cur.done()) return false;
    std::string_view line = cur.current();
    if (line.size() < name.size() + 1 || line.substr(0, name.size()) != name ||
        line[name.size()] != ':')
        return false;
    rest = trim(line.substr(name.size() + 1));
    ++cur.pos;
    return true;
}

double parse_real_token(std::string_view token, int line_no, const char* what) {
    double v;
    if (!parse_double(token, v) || !std::isfinite(v))
        throw ParseError(std::string("invalid ") + what + " value '" + std::string(token) + "'",
                         line_no);
    return v;
}

std::vector<double> parse_real_row(std::string_view rest, int n, int line_no, const char* what) {
    const auto tokens = split_tokens(rest);
    if (static_cast<int>(tokens.size()) != n)
        throw ParseError(std::string(what) + " row has " + std::to_string(tokens.size()) +
                             " values, expected " + std::to_string(n),
                         line_no);
    std::vector<double> values(tokens.size());
    for (size_t i = 0; i < tokens.size(); ++i)
        values[i] = parse_real_token(tokens[i], line_no, what);
    return values;
}

bool parse_operator(std::string_view token, ConnectionOperator& op) {
    if (token == "LINK") op = ConnectionOperator::Link;
    else if (token == "MERGE") op = ConnectionOperator::Merge;
    else if (token == "OFFLINK") op = ConnectionOperator::OffLink;
    else return false;
    return true;
}

}  // namespace

std::string_view prompt_template(PromptVariant variant) {
    switch (variant) {
        case PromptVariant::TextSimple: return kTextSimple;
        case PromptVariant::TextExact: return kTextExact;
        case PromptVariant::TextDetailed: return kTextDetailed;
    }
    return kTextSimple;
}

const char* version_tag(PromptVariant variant) {
    switch (variant) {
        case PromptVariant::TextSimple: return "v1";
        case PromptVariant::TextExact: return "v2";
        case PromptVariant::TextDetailed: return "v3";
    }
    return "v1";
}

Skeleton parse_text(std::string_view text) {
    LineCursor cur(text);

    // Skip leading chatter until the NODES header.
    std::string_view rest;
    while (!cur.done() && !take_header(cur, "NODES", rest)) ++cur.pos;
    if (cur.done()) throw ParseError("missing NODES section");
    const int nodes_line = cur.line_no() - 1;

    long long n_ll;
    if (!parse_int(rest, n_ll) || n_ll < 0)
        throw ParseError("invalid node count '" + std::string(rest) + "'", nodes_line);
    if (n_ll > kMaxNodes)
        throw ParseError("node count " + std::to_string(n_ll) + " exceeds limit", nodes_line);
    const int n = static_cast<int>(n_ll);

    if (!take_header(cur, "ADJ", rest))
        throw ParseError("expected ADJ section", cur.line_no());
    if (!rest.empty()) throw ParseError("unexpected values after ADJ header", cur.line_no() - 1);

    AdjacencyMatrix adj;
    adj.n = n;
    adj.entries.assign(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) {
        if (cur.done()) throw ParseError("adjacency matrix ends after " + std::to_string(i) +
                                             " of " + std::to_string(n) + " rows",
                                         cur.line_no());
        const int line_no = cur.line_no();
        const auto tokens = split_tokens(cur.current());
        ++cur.pos;
        if (static_cast<int>(tokens.size()) != n)
            throw ParseError("adjacency row has " + std::to_string(tokens.size()) +
                                 " entries, expected " + std::to_string(n),
                             line_no);
        for (int j = 0; j < n; ++j) {
            long long code;
            if (!parse_int(tokens[j], code) || code < 0 || code > 2)
                throw ParseError("invalid adjacency code '" + std::string(tokens[j]) + "'",
                                 line_no);
            adj.at(i, j) = static_cast<int>(code);
        }
        if (adj.at(i, i) != 0)
            throw ParseError("nonzero diagonal at node " + std::to_string(i), line_no);
        for (int j = 0; j < i; ++j)
            if (adj.at(i, j) != adj.at(j, i))
                throw ParseError("asymmetric adjacency at (" + std::to_string(j) + "," +
                                     std::to_string(i) + ")",
                                 line_no);
    }

    std::vector<Vec3> positions(n);
    const char* axes[3] = {"X", "Y", "Z"};
    for (int a = 0; a < 3; ++a) {
        const int line_no = cur.line_no();
        if (!take_header(cur, axes[a], rest))
            throw ParseError(std::string("expected ") + axes[a] + " section", line_no);
        const auto values = parse_real_row(rest, n, line_no, axes[a]);
        for (int i = 0; i < n; ++i) positions[i][a] = values[i];
    }

    const int size_line = cur.line_no();
    if (!take_header(cur, "SIZE", rest)) throw ParseError("expected SIZE section", size_line);
    std::vector<double> sizes = parse_real_row(rest, n, size_line, "SIZE");
    for (int i = 0; i < n; ++i)
        if (sizes[i] < 0.0)
            throw ParseError("negative size at node " + std::to_string(i), size_line);

    Skeleton skel = from_adjacency(adj, positions, sizes, CoordSystem::Relative);

    if (take_header(cur, "VE_OPS", rest)) {
        if (!rest.empty())
            throw ParseError("unexpected values after VE_OPS header", cur.line_no() - 1);
        std::vector<bool> assigned(skel.virtual_edges.size(), false);
        while (!cur.done()) {
            const int line_no = cur.line_no();
            const auto tokens = split_tokens(cur.current());
            long long i_ll, j_ll;
            if (tokens.size() != 3 || !parse_int(tokens[0], i_ll) || !parse_int(tokens[1], j_ll))
                break;  // end of section; remaining lines are trailing chatter
            ConnectionOperator op;
            if (!parse_operator(tokens[2], op))
                throw ParseError("invalid operator '" + std::string(tokens[2]) + "'", line_no);
            const EdgePair pair(static_cast<int>(i_ll), static_cast<int>(j_ll));
            auto it = std::find_if(skel.virtual_edges.begin(), skel.virtual_edges.end(),
                                   [&](const VirtualEdge& ve) { return ve.pair == pair; });
            if (it == skel.virtual_edges.end())
                throw ParseError("operator for non-virtual pair (" + std::to_string(pair.a) +
                                     "," + std::to_string(pair.b) + ")",
                                 line_no);
            const size_t idx = static_cast<size_t>(it - skel.virtual_edges.begin());
            if (assigned[idx])
                throw ParseError("duplicate operator for pair (" + std::to_string(pair.a) + "," +
                                     std::to_string(pair.b) + ")",
                                 line_no);
            assigned[idx] = true;
            it->op = op;
            ++cur.pos;
        }
    }

    if (take_header(cur, "COORDS", rest)) {
        if (rest == "camera") skel.coord_system = CoordSystem::Camera;
        else if (rest == "relative") skel.coord_system = CoordSystem::Relative;
        else throw ParseError("invalid coordinate system '" + std::string(rest) + "'",
                              cur.line_no() - 1);
    }

    const ValidationReport report = validate(skel);
    if (!report.ok) throw ParseError("parsed skeleton invalid: " + report.violations.front().rule);
    return skel;
}

std::string serialize_text(const Skeleton& skel) {
    const AdjacencyMatrix adj = to_adjacency(skel);  // throws on invalid skeleton
    const int n = adj.n;

    std::string out;
    out += "NODES: " + std::to_string(n) + "\n";
    out += "ADJ:\n";
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j) out += ' ';
            out += static_cast<char>('0' + adj.at(i, j));
        }
        out += '\n';
    }
    const char* axes[3] = {"X", "Y", "Z"};
    for (int a = 0; a < 3; ++a) {
        out += axes[a];
        out += ':';
        for (int i = 0; i < n; ++i) {
            out += ' ';
            out += format_double(skel.nodes[i].position[a]);
        }
        out += '\n';
    }
    out += "SIZE:";
    for (int i = 0; i < n; ++i) {
        out += ' ';
        out += format_double(skel.nodes[i].size);
    }
    out += '\n';

    const bool all_link =
        std::all_of(skel.virtual_edges.begin(), skel.virtual_edges.end(),
                    [](const VirtualEdge& ve) { return ve.op == ConnectionOperator::Link; });
    if (!all_link) {
        std::vector<VirtualEdge> ves = skel.virtual_edges;
        std::sort(ves.begin(), ves.end());
        out += "VE_OPS:\n";
        for (const VirtualEdge& ve : ves)
            out += std::to_string(ve.pair.a) + " " + std::to_string(ve.pair.b) + " " +
                   to_string(ve.op) + "\n";
    }
    if (skel.coord_system == CoordSystem::Camera) out += "COORDS: camera\n";
    return out;
}

std::string serialize_json(const Skeleton& skel) {
    const AdjacencyMatrix adj = to_adjacency(skel);
    const int n = adj.n;

    nlohmann::ordered_json j;
    j["nodes"] = n;
    j["coord_system"] = to_string(skel.coord_system);
    auto rows = nlohmann::ordered_json::array();
    for (int i = 0; i < n; ++i) {
        auto row = nlohmann::ordered_json::array();
        for (int k = 0; k < n; ++k) row.push_back(adj.at(i, k));
        rows.push_back(std::move(row));
    }
    j["adjacency"] = std::move(rows);
    const char* axes[3] = {"x", "y", "z"};
    for (int a = 0; a < 3; ++a) {
        auto coords = nlohmann::ordered_json::array();
        for (int i = 0; i < n; ++i) coords.push_back(skel.nodes[i].position[a]);
        j[axes[a]] = std::move(coords);
    }
    auto sizes = nlohmann::ordered_json::array();
    for (int i = 0; i < n; ++i) sizes.push_back(skel.nodes[i].size);
    j["sizes"] = std::move(sizes);

    std::vector<VirtualEdge> ves = skel.virtual_edges;
    std::sort(ves.begin(), ves.end());
    auto ops = nlohmann::ordered_json::array();
    for (const VirtualEdge& ve : ves)
        ops.push_back({{"i", ve.pair.a}, {"j", ve.pair.b}, {"op", to_string(ve.op)}});
    j["ve_ops"] = std::move(ops);

    return j.dump(2) + "\n";
}

Skeleton parse_json(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("malformed JSON");
    try {
        const int n = j.at("nodes").get<int>();
        if (n < 0 || n > kMaxNodes) throw ParseError("node count out of range");

        AdjacencyMatrix adj;
        adj.n = n;
        adj.entries.assign(static_cast<size_t>(n) * n, 0);
        const auto& rows = j.at("adjacency");
        if (static_cast<int>(rows.size()) != n) throw ParseError("adjacency row count mismatch");
        for (int i = 0; i < n; ++i) {
            if (static_cast<int>(rows[i].size()) != n)
                throw ParseError("adjacency column count mismatch");
            for (int k = 0; k < n; ++k) {
                const int code = rows[i][k].get<int>();
                if (code < 0 || code > 2) throw ParseError("invalid adjacency code");
                adj.at(i, k) = code;
            }
        }

        std::vector<Vec3> positions(n);
        const char* axes[3] = {"x", "y", "z"};
        for (int a = 0; a < 3; ++a) {
            const auto& coords = j.at(axes[a]);
            if (static_cast<int>(coords.size()) != n)
                throw ParseError("coordinate array length mismatch");
            for (int i = 0; i < n; ++i) {
                positions[i][a] = coords[i].get<double>();
                if (!std::isfinite(positions[i][a])) throw ParseError("non-finite coordinate");
            }
        }
        const auto& sizes_json = j.at("sizes");
        if (static_cast<int>(sizes_json.size()) != n)
            throw ParseError("size array length mismatch");
        std::vector<double> sizes(n);
        for (int i = 0; i < n; ++i) {
            sizes[i] = sizes_json[i].get<double>();
            if (!std::isfinite(sizes[i]) || sizes[i] < 0.0) throw ParseError("invalid size value");
        }

        CoordSystem cs = CoordSystem::Relative;
        if (j.contains("coord_system")) {
            const std::string tag = j.at("coord_system").get<std::string>();
            if (tag == "camera") cs = CoordSystem::Camera;
            else if (tag != "relative") throw ParseError("invalid coordinate system '" + tag + "'");
        }

        Skeleton skel = from_adjacency(adj, positions, sizes, cs);

        if (j.contains("ve_ops")) {
            std::vector<bool> assigned(skel.virtual_edges.size(), false);
            for (const auto& entry : j.at("ve_ops")) {
                const EdgePair pair(entry.at("i").get<int>(), entry.at("j").get<int>());
                ConnectionOperator op;
                if (!parse_operator(entry.at("op").get<std::string>(), op))
                    throw ParseError("invalid operator");
                auto it = std::find_if(skel.virtual_edges.begin(), skel.virtual_edges.end(),
                                       [&](const VirtualEdge& ve) { return ve.pair == pair; });
                if (it == skel.virtual_edges.end())
                    throw ParseError("operator for non-virtual pair (" + std::to_string(pair.a) +
                                     "," + std::to_string(pair.b) + ")");
                const size_t idx = static_cast<size_t>(it - skel.virtual_edges.begin());
                if (assigned[idx]) throw ParseError("duplicate operator entry");
                assigned[idx] = true;
                it->op = op;
            }
        }
        return skel;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed skeleton JSON: ") + e.what());
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
}

int anchor_node(const Skeleton& skel) {
    if (skel.nodes.empty()) throw Error("no nodes");
    int best = 0;
    for (int i = 1; i < skel.node_count(); ++i) {
        const Vec3& p = skel.nodes[i].position;
        const Vec3& q = skel.nodes[best].position;
        if (p.x != q.x) { if (p.x < q.x) best = i; continue; }
        if (p.y != q.y) { if (p.y > q.y) best = i; continue; }
        if (p.z != q.z) { if (p.z < q.z) best = i; continue; }
    }
    return best;
}

Skeleton convert_coords(const Skeleton& skel, CoordSystem target) {
    Skeleton out = skel;
    if (skel.coord_system == target) return out;
    out.coord_system = target;
    if (target == CoordSystem::Relative && !out.nodes.empty()) {
        const Vec3 origin = out.nodes[anchor_node(out)].position;
        for (SkeletonNode& node : out.nodes) node.position -= origin;
    }
    // Relative -> Camera keeps coordinates as-is: the relative frame embeds at
    // the camera origin since the true global offset is unknown.
    return out;
}

std::string DatasetRecord::to_json_line() const {
    nlohmann::ordered_json j;
    j["messages"] = nlohmann::ordered_json::array(
        {{{"role", "user"}, {"content", "<image>" + prompt}},
         {{"role", "assistant"}, {"content", answer}}});
    j["images"] = nlohmann::ordered_json::array({image_ref});
    j["metadata"] = {{"coord_system", to_string(coord_system)}, {"version", version}};
    return j.dump();
}

DatasetRecord make_dataset_record(const std::string& image_ref, PromptVariant variant,
                                  const Skeleton& skel) {
    DatasetRecord record;
    record.image_ref = image_ref;
    record.prompt = std::string(prompt_template(variant));
    record.answer = serialize_text(skel);  // throws on invalid skeleton
    record.coord_system = skel.coord_system;
    record.version = version_tag(variant);
    return record;
}

}  // namespace minsurf
