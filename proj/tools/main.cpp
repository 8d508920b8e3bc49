#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "minsurf/codec.hpp"
#include "minsurf/decoder.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/mesh_check.hpp"
#include "minsurf/mesh_io.hpp"
#include "minsurf/metrics.hpp"
#include "minsurf/num_format.hpp"
#include "minsurf/skeleton.hpp"

namespace fs = std::filesystem;
using namespace minsurf;

namespace {

// Exit code contract: 0 success, 1 usage, 2 data/validation, 3 I/O.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitIo = 3;

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("MINSURF_LOG");
        if (!env) return LogLevel::Warn;
        const std::string v(env);
        if (v == "error") return LogLevel::Error;
        if (v == "info") return LogLevel::Info;
        if (v == "debug") return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return level;
}

void log(LogLevel level, const std::string& msg) {
    if (level <= log_level()) std::cerr << msg << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading", path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing", path);
    out << content;
    if (!out) throw IoError("write failed", path);
}

bool has_extension(const std::string& path, const char* ext) {
    return fs::path(path).extension() == ext;
}

Skeleton load_skeleton(const std::string& path) {
    const std::string text = read_file(path);
    return has_extension(path, ".json") ? parse_json(text) : parse_text(text);
}

nlohmann::ordered_json validation_json(const ValidationReport& report) {
    nlohmann::ordered_json j;
    j["ok"] = report.ok;
    auto violations = nlohmann::ordered_json::array();
    for (const Violation& v : report.violations)
        violations.push_back({{"rule", v.rule}, {"message", v.message}, {"indices", v.indices}});
    j["violations"] = std::move(violations);
    return j;
}

TopologyGraphMode parse_topo_mode(const std::string& name) {
    if (name == "se") return TopologyGraphMode::SolidOnly;
    if (name == "ve") return TopologyGraphMode::VirtualOnly;
    return TopologyGraphMode::Union;
}

bool glob_match(std::string_view pattern, std::string_view text) {
    if (pattern.empty()) return text.empty();
    if (pattern[0] == '*')
        return glob_match(pattern.substr(1), text) ||
               (!text.empty() && glob_match(pattern, text.substr(1)));
    if (text.empty()) return false;
    if (pattern[0] != '?' && pattern[0] != text[0]) return false;
    return glob_match(pattern.substr(1), text.substr(1));
}

struct BatchInput {
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> pairs;  // (pred text, gt text)
};

BatchInput collect_pairs_from_dir(const std::string& dir, const std::string& pattern) {
    if (!fs::is_directory(dir)) throw IoError("not a directory", dir);
    std::vector<std::string> stems;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        constexpr std::string_view suffix = ".pred.txt";
        if (name.size() <= suffix.size() ||
            name.substr(name.size() - suffix.size()) != suffix)
            continue;
        const std::string stem = name.substr(0, name.size() - suffix.size());
        if (!pattern.empty() && !glob_match(pattern, stem)) continue;
        if (!fs::exists(fs::path(dir) / (stem + ".gt.txt"))) {
            log(LogLevel::Warn, "skipping " + stem + ": no matching .gt.txt");
            continue;
        }
        stems.push_back(stem);
    }
    std::sort(stems.begin(), stems.end());

    BatchInput input;
    for (const std::string& stem : stems) {
        input.names.push_back(stem);
        input.pairs.emplace_back(read_file((fs::path(dir) / (stem + ".pred.txt")).string()),
                                 read_file((fs::path(dir) / (stem + ".gt.txt")).string()));
    }
    return input;
}

BatchInput collect_pairs_from_manifest(const std::string& manifest_path) {
    const std::string text = read_file(manifest_path);
    BatchInput input;
    size_t start = 0;
    int line_no = 0;
    while (start < text.size()) {
        ++line_no;
        size_t nl = text.find('\n', start);
        if (nl == std::string::npos) nl = text.size();
        const std::string line = text.substr(start, nl - start);
        start = nl + 1;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("pred") || !j.contains("gt"))
            throw ParseError("manifest line needs {\"pred\": ..., \"gt\": ...}", line_no);
        const std::string pred = j["pred"].get<std::string>();
        const std::string gt = j["gt"].get<std::string>();
        input.names.push_back(j.value("name", fs::path(pred).stem().string()));
        input.pairs.emplace_back(read_file(pred), read_file(gt));
    }
    return input;
}

nlohmann::ordered_json metric_report_json(const MetricReport& r) {
    return {{"node_num_acc", r.node_num_acc},
            {"se_f1", r.se_f1},
            {"ve_f1", r.ve_f1},
            {"connect_acc", r.connect_acc},
            {"topology_similarity", r.topology_similarity},
            {"position_acc", r.position_acc},
            {"nodesize_acc", r.nodesize_acc},
            {"accuracy", r.accuracy},
            {"parse_failed", r.parse_failed}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Topological skeleton toolkit: validation, structural scoring, "
                 "batch evaluation, and skeleton-to-minimal-surface decoding"};
    app.require_subcommand(1);

    // validate
    std::string validate_path;
    auto* cmd_validate = app.add_subcommand("validate", "Check a skeleton file");
    cmd_validate->add_option("path", validate_path, "skeleton file (.txt or .json)")->required();

    // score
    std::string score_pred, score_gt, score_topo = "union";
    bool score_csv = false, score_json = false;
    auto* cmd_score = app.add_subcommand("score", "Score a prediction against ground truth");
    cmd_score->add_option("pred", score_pred, "predicted skeleton file")->required();
    cmd_score->add_option("gt", score_gt, "ground-truth skeleton file")->required();
    cmd_score->add_flag("--json", score_json, "JSON output (default)");
    cmd_score->add_flag("--csv", score_csv, "CSV output");
    cmd_score->add_option("--topo-graph", score_topo, "graph for the spectral term")
        ->check(CLI::IsMember({"union", "se", "ve"}));

    // batch-eval
    std::string batch_dir, batch_pattern, batch_report, batch_json_path, batch_manifest;
    std::string batch_topo = "union";
    int batch_parallel = 1;
    auto* cmd_batch = app.add_subcommand("batch-eval", "Evaluate a directory of pred/gt pairs");
    cmd_batch->add_option("dir", batch_dir, "directory of <stem>.pred.txt / <stem>.gt.txt");
    cmd_batch->add_option("--pattern", batch_pattern, "glob filter on stems");
    cmd_batch->add_option("--report", batch_report, "write the CSV report here");
    cmd_batch->add_option("--json", batch_json_path, "write the JSON report here");
    cmd_batch->add_option("--manifest", batch_manifest,
                          "JSONL manifest {name, pred, gt} instead of a directory scan");
    cmd_batch->add_option("--parallel", batch_parallel, "worker threads")
        ->check(CLI::Range(1, 256));
    cmd_batch->add_option("--topo-graph", batch_topo, "graph for the spectral term")
        ->check(CLI::IsMember({"union", "se", "ve"}));

    // decode
    std::string decode_path, decode_out, decode_report;
    DecodeParams decode_params;
    double decode_blend = -1.0, decode_pin = -1.0, decode_offlink = -1.0;
    auto* cmd_decode = app.add_subcommand("decode", "Decode a skeleton to a surface mesh");
    cmd_decode->add_option("skeleton", decode_path, "skeleton file")->required();
    cmd_decode->add_option("-o,--output", decode_out, "mesh output (.obj or .ply)")->required();
    cmd_decode->add_option("--resolution", decode_params.grid_resolution, "grid cells per axis")
        ->check(CLI::Range(16, 512));
    cmd_decode->add_option("--relax-iters", decode_params.relax_iters, "relaxation iterations")
        ->check(CLI::Range(0, 100000));
    cmd_decode->add_option("--relax-step", decode_params.relax_step, "relaxation step in (0,1]");
    cmd_decode->add_option("--blend", decode_blend, "smooth-min blend radius");
    cmd_decode->add_option("--pin-tolerance", decode_pin, "skeletal pin band width");
    cmd_decode->add_option("--offlink-offset", decode_offlink, "OffLink lateral displacement");
    cmd_decode->add_option("--report", decode_report, "write the mesh report JSON here");

    // gen
    uint64_t gen_seed = 0;
    std::string gen_nodes = "2..8", gen_dir = ".", gen_coords = "relative", gen_format = "text";
    int gen_count = 1;
    double gen_ve_fraction = 0.25, gen_bbox = 4.0;
    auto* cmd_gen = app.add_subcommand("gen", "Generate random valid skeletons");
    cmd_gen->add_option("--seed", gen_seed, "base seed")->required();
    cmd_gen->add_option("--nodes", gen_nodes, "node-count range, e.g. 2..8");
    cmd_gen->add_option("--count", gen_count, "number of skeletons")->check(CLI::Range(1, 100000));
    cmd_gen->add_option("--out-dir", gen_dir, "output directory");
    cmd_gen->add_option("--ve-fraction", gen_ve_fraction, "virtual-edge probability")
        ->check(CLI::Range(0.0, 1.0));
    cmd_gen->add_option("--bbox", gen_bbox, "position extent");
    cmd_gen->add_option("--coords", gen_coords, "coordinate system tag")
        ->check(CLI::IsMember({"relative", "camera"}));
    cmd_gen->add_option("--format", gen_format, "file format")
        ->check(CLI::IsMember({"text", "json"}));

    // convert
    std::string convert_path, convert_out, convert_coords_opt, convert_format;
    auto* cmd_convert = app.add_subcommand("convert", "Convert coordinates or file format");
    cmd_convert->add_option("path", convert_path, "skeleton file")->required();
    cmd_convert->add_option("-o,--output", convert_out, "output file")->required();
    cmd_convert->add_option("--coords", convert_coords_opt, "target coordinate system")
        ->check(CLI::IsMember({"relative", "camera"}));
    cmd_convert->add_option("--format", convert_format, "target format (default: by extension)")
        ->check(CLI::IsMember({"text", "json"}));

    // loss
    double loss_accuracy = 0.0, loss_ce = 0.0, loss_beta = -1.0;
    int loss_stage = 0;
    auto* cmd_loss = app.add_subcommand("loss", "Reward-modulated loss from accuracy and beta");
    cmd_loss->add_option("--accuracy", loss_accuracy, "structural accuracy in [0,1]")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    cmd_loss->add_option("--ce", loss_ce, "cross-entropy value")
        ->required()
        ->check(CLI::NonNegativeNumber);
    auto* beta_opt = cmd_loss->add_option("--beta", loss_beta, "penalty strength")
                         ->check(CLI::NonNegativeNumber);
    auto* stage_opt =
        cmd_loss->add_option("--stage", loss_stage, "training stage")->check(CLI::Range(1, 2));
    beta_opt->excludes(stage_opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*cmd_validate) {
            const Skeleton skel = load_skeleton(validate_path);
            const ValidationReport report = validate(skel);
            std::cout << validation_json(report).dump(2) << "\n";
            return report.ok ? kExitOk : kExitData;
        }

        if (*cmd_score) {
            EvalOptions options{parse_topo_mode(score_topo)};
            const std::string pred_text = read_file(score_pred);
            const std::string gt_text = read_file(score_gt);
            const MetricReport report = evaluate_pair(pred_text, gt_text, options);
            if (score_csv && !score_json) {
                BatchSummary single;
                single.reports = {report};
                single.mean = report;
                single.parse_failed_rate = report.parse_failed ? 1.0 : 0.0;
                std::cout << batch_to_csv(single, {fs::path(score_pred).stem().string()});
            } else {
                std::cout << metric_report_json(report).dump(2) << "\n";
            }
            return kExitOk;
        }

        if (*cmd_batch) {
            if (batch_dir.empty() && batch_manifest.empty())
                throw Error("give a directory or --manifest");
            BatchInput input = batch_manifest.empty()
                                   ? collect_pairs_from_dir(batch_dir, batch_pattern)
                                   : collect_pairs_from_manifest(batch_manifest);
            if (input.pairs.empty()) throw Error("no pred/gt pairs found");
            log(LogLevel::Info,
                "evaluating " + std::to_string(input.pairs.size()) + " samples with " +
                    std::to_string(batch_parallel) + " workers");
            EvalOptions options{parse_topo_mode(batch_topo)};
            const BatchSummary summary = evaluate_batch(input.pairs, options, batch_parallel);
            if (!batch_report.empty()) write_file(batch_report, batch_to_csv(summary, input.names));
            if (!batch_json_path.empty())
                write_file(batch_json_path, batch_to_json(summary, input.names));
            std::cout << format_double(summary.mean.accuracy) << "\n";
            return kExitOk;
        }

        if (*cmd_decode) {
            if (decode_blend > 0.0) decode_params.blend_smoothness = decode_blend;
            if (decode_pin >= 0.0) decode_params.pin_tolerance = decode_pin;
            if (decode_offlink >= 0.0) decode_params.offlink_offset = decode_offlink;
            const Skeleton skel = load_skeleton(decode_path);
            log(LogLevel::Info, "decoding " + std::to_string(skel.node_count()) + " nodes at " +
                                    std::to_string(decode_params.grid_resolution) + "^3");
            const TriMesh mesh = decode(skel, decode_params);
            if (has_extension(decode_out, ".ply")) export_ply(mesh, decode_out);
            else export_obj(mesh, decode_out);
            const MeshReport report = check_mesh(mesh);
            const std::string report_json = report.to_json();
            if (!decode_report.empty()) write_file(decode_report, report_json);
            std::cout << report_json;
            return kExitOk;
        }

        if (*cmd_gen) {
            RandomSkeletonConfig cfg;
            const size_t dots = gen_nodes.find("..");
            long long lo, hi;
            if (dots == std::string::npos || !parse_int(gen_nodes.substr(0, dots), lo) ||
                !parse_int(gen_nodes.substr(dots + 2), hi) || lo < 1 || hi < lo) {
                std::cerr << "invalid --nodes range '" << gen_nodes << "'\n";
                return kExitUsage;
            }
            cfg.min_nodes = static_cast<int>(lo);
            cfg.max_nodes = static_cast<int>(hi);
            cfg.ve_fraction = gen_ve_fraction;
            cfg.bbox_extent = gen_bbox;
            fs::create_directories(gen_dir);
            for (int i = 0; i < gen_count; ++i) {
                Skeleton skel = random_skeleton(gen_seed + static_cast<uint64_t>(i), cfg);
                if (gen_coords == "camera") skel.coord_system = CoordSystem::Camera;
                char name[32];
                std::snprintf(name, sizeof(name), "skel_%04d.%s", i,
                              gen_format == "json" ? "json" : "txt");
                const fs::path out = fs::path(gen_dir) / name;
                write_file(out.string(),
                           gen_format == "json" ? serialize_json(skel) : serialize_text(skel));
            }
            log(LogLevel::Info, "wrote " + std::to_string(gen_count) + " skeletons to " + gen_dir);
            return kExitOk;
        }

        if (*cmd_convert) {
            Skeleton skel = load_skeleton(convert_path);
            if (!convert_coords_opt.empty())
                skel = convert_coords(skel, convert_coords_opt == "camera" ? CoordSystem::Camera
                                                                           : CoordSystem::Relative);
            std::string format = convert_format;
            if (format.empty()) format = has_extension(convert_out, ".json") ? "json" : "text";
            write_file(convert_out,
                       format == "json" ? serialize_json(skel) : serialize_text(skel));
            return kExitOk;
        }

        if (*cmd_loss) {
            const double beta = loss_stage != 0 ? stage_beta(loss_stage) : loss_beta;
            if (beta < 0.0) {
                std::cerr << "give --beta or --stage\n";
                return kExitUsage;
            }
            std::cout << format_double(structural_loss({loss_ce, loss_accuracy, beta})) << "\n";
            return kExitOk;
        }
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitUsage;
}
