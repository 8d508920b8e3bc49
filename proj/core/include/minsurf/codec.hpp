#pragma once

#include <string>
#include <string_view>

#include "minsurf/skeleton.hpp"

namespace minsurf {

/// Static prompt templates shipped with the dataset tooling. The templates are
/// byte-stable across runs and platforms.
enum class PromptVariant : uint8_t { TextSimple, TextExact, TextDetailed };

std::string_view prompt_template(PromptVariant variant);
const char* version_tag(PromptVariant variant);

/// One fine-tuning record: an image reference, a prompt, and the serialized
/// skeleton as the assistant answer.
struct DatasetRecord {
    std::string image_ref;
    std::string prompt;
    std::string answer;
    CoordSystem coord_system = CoordSystem::Relative;
    std::string version;

    /// Single-line JSON object with a ShareGPT-style messages array, suitable
    /// for one JSONL row.
    std::string to_json_line() const;
};

/// Parses the plain-text skeletal description.
///
/// Sections in fixed order: NODES, ADJ, X, Y, Z, SIZE, then optional VE_OPS
/// and COORDS. Leading and trailing non-section lines are skipped; inside the
/// block the parser is strict about order and counts but tolerant of extra
/// spaces. Throws ParseError with a 1-based line number. The returned
/// skeleton always passes validate().
Skeleton parse_text(std::string_view text);

/// Canonical text form: fixed section order, single spaces, LF endings,
/// shortest-roundtrip reals. VE_OPS is omitted when every virtual edge uses
/// Link, COORDS when the system is Relative. parse_text inverts this exactly.
std::string serialize_text(const Skeleton& skel);

/// JSON mirror of the text format (object with nodes/adjacency/x/y/z/sizes/
/// ve_ops/coord_system). Canonical form: 2-space indent, trailing newline.
std::string serialize_json(const Skeleton& skel);
Skeleton parse_json(std::string_view text);

/// Re-tags and re-anchors coordinates. Camera -> Relative subtracts the
/// anchor node (minimal x, then maximal y, then minimal z, then lowest index)
/// from every position; Relative -> Camera re-tags only. Converting to the
/// current system is the identity. Topology, sizes and operators never change.
Skeleton convert_coords(const Skeleton& skel, CoordSystem target);

/// Index of the coordinate anchor node under the upper-left rule.
int anchor_node(const Skeleton& skel);

/// Builds a deterministic dataset record whose answer is serialize_text(skel).
DatasetRecord make_dataset_record(const std::string& image_ref, PromptVariant variant,
                                  const Skeleton& skel);

}  // namespace minsurf
