#include "minsurf/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include <json.hpp>

#include "minsurf/codec.hpp"
#include "minsurf/errors.hpp"
#include "minsurf/hungarian.hpp"
#include "minsurf/num_format.hpp"
#include "minsurf/spectral.hpp"

namespace minsurf {

namespace {

std::vector<Vec3> node_positions(const Skeleton& skel) {
    std::vector<Vec3> positions(skel.nodes.size());
    for (size_t i = 0; i < skel.nodes.size(); ++i) positions[i] = skel.nodes[i].position;
    return positions;
}

double assignment_cost(const std::vector<double>& cost, int n_cols, const std::vector<int>& sol) {
    double total = 0.0;
    for (size_t r = 0; r < sol.size(); ++r) total += cost[r * n_cols + sol[r]];
    return total;
}

// Lexicographically smallest optimal assignment for the rows side. Walks the
// rows in order and, for each, adopts the smallest column that still allows an
// optimal completion. Candidates are pruned with a per-row-minimum lower bound
// before paying for an exact re-solve, so tie-free instances cost little more
// than the initial solve.
std::vector<int> lexicographic_optimal_assignment(const std::vector<double>& cost, int n_rows,
                                                  int n_cols) {
    std::vector<int> ref = solve_assignment(cost, n_rows, n_cols);
    const double optimum = assignment_cost(cost, n_cols, ref);
    const double tol = 1e-9 * (1.0 + std::fabs(optimum));

    std::vector<bool> used(n_cols, false);
    double fixed_cost = 0.0;
    for (int row = 0; row < n_rows; ++row) {
        for (int j = 0; j < ref[row]; ++j) {
            if (used[j]) continue;
            // Lower bound: per-row minima of the remaining submatrix.
            double bound = fixed_cost + cost[static_cast<size_t>(row) * n_cols + j];
            for (int r = row + 1; r < n_rows && bound <= optimum + tol; ++r) {
                double row_min = std::numeric_limits<double>::infinity();
                for (int c = 0; c < n_cols; ++c)
                    if (!used[c] && c != j)
                        row_min = std::min(row_min, cost[static_cast<size_t>(r) * n_cols + c]);
                bound += row_min;
            }
            if (bound > optimum + tol) continue;

            // Exact completion over the remaining rows and columns.
            std::vector<int> free_cols;
            for (int c = 0; c < n_cols; ++c)
                if (!used[c] && c != j) free_cols.push_back(c);
            const int sub_rows = n_rows - row - 1;
            std::vector<double> sub(static_cast<size_t>(sub_rows) * free_cols.size());
            for (int r = 0; r < sub_rows; ++r)
                for (size_t c = 0; c < free_cols.size(); ++c)
                    sub[r * free_cols.size() + c] =
                        cost[static_cast<size_t>(row + 1 + r) * n_cols + free_cols[c]];
            const auto sub_sol =
                solve_assignment(sub, sub_rows, static_cast<int>(free_cols.size()));
            const double candidate = fixed_cost +
                                     cost[static_cast<size_t>(row) * n_cols + j] +
                                     assignment_cost(sub, static_cast<int>(free_cols.size()),
                                                     sub_sol);
            if (std::fabs(candidate - optimum) <= tol) {
                ref[row] = j;
                for (int r = 0; r < sub_rows; ++r) ref[row + 1 + r] = free_cols[sub_sol[r]];
                break;
            }
        }
        used[ref[row]] = true;
        fixed_cost += cost[static_cast<size_t>(row) * n_cols + ref[row]];
    }
    return ref;
}

std::set<EdgePair> edge_set(const Skeleton& skel, EdgeKind kind) {
    std::set<EdgePair> edges;
    if (kind == EdgeKind::Solid) {
        edges.insert(skel.solid_edges.begin(), skel.solid_edges.end());
    } else {
        for (const VirtualEdge& ve : skel.virtual_edges) edges.insert(ve.pair);
    }
    return edges;
}

SimpleGraph topo_graph(const Skeleton& skel, TopologyGraphMode mode) {
    switch (mode) {
        case TopologyGraphMode::SolidOnly: return solid_graph(skel);
        case TopologyGraphMode::VirtualOnly: return virtual_graph(skel);
        case TopologyGraphMode::Union: break;
    }
    return combined_graph(skel);
}

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

Matching match_nodes(const Skeleton& pred, const Skeleton& gt) {
    if (pred.nodes.empty() || gt.nodes.empty()) throw Error("no nodes");

    const auto pred_norm = normalize_bbox(node_positions(pred));
    const auto gt_norm = normalize_bbox(node_positions(gt));
    const int n_pred = pred.node_count();
    const int n_gt = gt.node_count();

    const bool pred_rows = n_pred <= n_gt;
    const int n_rows = pred_rows ? n_pred : n_gt;
    const int n_cols = pred_rows ? n_gt : n_pred;
    const auto& rows_pts = pred_rows ? pred_norm : gt_norm;
    const auto& cols_pts = pred_rows ? gt_norm : pred_norm;

    std::vector<double> cost(static_cast<size_t>(n_rows) * n_cols);
    for (int r = 0; r < n_rows; ++r)
        for (int c = 0; c < n_cols; ++c)
            cost[static_cast<size_t>(r) * n_cols + c] = norm(rows_pts[r] - cols_pts[c]);

    const auto assignment = lexicographic_optimal_assignment(cost, n_rows, n_cols);

    Matching matching;
    matching.pairs.reserve(n_rows);
    std::vector<bool> col_used(n_cols, false);
    for (int r = 0; r < n_rows; ++r) {
        matching.cost += cost[static_cast<size_t>(r) * n_cols + assignment[r]];
        col_used[assignment[r]] = true;
        if (pred_rows) matching.pairs.emplace_back(r, assignment[r]);
        else matching.pairs.emplace_back(assignment[r], r);
    }
    for (int c = 0; c < n_cols; ++c) {
        if (col_used[c]) continue;
        if (pred_rows) matching.unmatched_gt.push_back(c);
        else matching.unmatched_pred.push_back(c);
    }
    return matching;
}

double node_num_acc(const Skeleton& pred, const Skeleton& gt) {
    return pred.node_count() == gt.node_count() ? 1.0 : 0.0;
}

double edge_f1(const Skeleton& pred, const Skeleton& gt, const Matching& matching, EdgeKind kind) {
    const std::set<EdgePair> pred_edges = edge_set(pred, kind);
    const std::set<EdgePair> gt_edges = edge_set(gt, kind);

    if (pred_edges.empty() && gt_edges.empty()) return 1.0;
    if (pred_edges.empty() || gt_edges.empty()) return 0.0;

    std::vector<int> pred_to_gt(pred.node_count(), -1);
    for (const auto& [p, g] : matching.pairs) pred_to_gt[p] = g;

    int tp = 0;
    for (const EdgePair& e : pred_edges) {
        const int a = pred_to_gt[e.a];
        const int b = pred_to_gt[e.b];
        if (a >= 0 && b >= 0 && gt_edges.count(EdgePair(a, b))) ++tp;
    }
    const int fp = static_cast<int>(pred_edges.size()) - tp;
    const int fn = static_cast<int>(gt_edges.size()) - tp;
    const double precision = static_cast<double>(tp) / (tp + fp);
    const double recall = static_cast<double>(tp) / (tp + fn);
    if (precision + recall == 0.0) return 0.0;
    return 2.0 * precision * recall / (precision + recall);
}

double connect_acc(double se_f1, double ve_f1) { return (se_f1 + ve_f1) / 2.0; }

double topology_similarity(const Skeleton& pred, const Skeleton& gt, TopologyGraphMode mode) {
    std::vector<double> pred_spec = laplacian_spectrum(topo_graph(pred, mode));
    std::vector<double> gt_spec = laplacian_spectrum(topo_graph(gt, mode));

    // Zero is every Laplacian's smallest eigenvalue, so padding at the front
    // keeps both vectors aligned in sorted order.
    const size_t n = std::max(pred_spec.size(), gt_spec.size());
    pred_spec.insert(pred_spec.begin(), n - pred_spec.size(), 0.0);
    gt_spec.insert(gt_spec.begin(), n - gt_spec.size(), 0.0);

    const double norm_pred = l2_norm(pred_spec);
    const double norm_gt = l2_norm(gt_spec);
    const double denom = std::max(norm_pred, norm_gt);
    if (denom == 0.0) return 1.0;  // both graphs edgeless

    double diff = 0.0;
    for (size_t i = 0; i < n; ++i) diff += (pred_spec[i] - gt_spec[i]) * (pred_spec[i] - gt_spec[i]);
    const double similarity = 1.0 - std::sqrt(diff) / denom;
    return std::clamp(similarity, 0.0, 1.0);
}

double position_acc(const Skeleton& pred, const Skeleton& gt, const Matching& matching) {
    if (matching.pairs.empty()) return 0.0;
    const auto pred_norm = normalize_bbox(node_positions(pred));
    const auto gt_norm = normalize_bbox(node_positions(gt));
    double err = 0.0;
    for (const auto& [p, g] : matching.pairs) err += norm2(pred_norm[p] - gt_norm[g]);
    err /= static_cast<double>(matching.pairs.size());
    return 1.0 / (1.0 + err);
}

double nodesize_acc(const Skeleton& pred, const Skeleton& gt, const Matching& matching) {
    if (matching.pairs.empty()) return 0.0;
    double s_max = 0.0;
    for (const SkeletonNode& node : pred.nodes) s_max = std::fmax(s_max, node.size);
    for (const SkeletonNode& node : gt.nodes) s_max = std::fmax(s_max, node.size);
    if (s_max == 0.0) return 1.0;

    double mae = 0.0;
    for (const auto& [p, g] : matching.pairs)
        mae += std::fabs(pred.nodes[p].size - gt.nodes[g].size);
    mae /= static_cast<double>(matching.pairs.size());
    return std::fmax(0.0, 1.0 - mae / s_max);
}

double aggregate_accuracy(double node_num, double connect, double topology, double position,
                          double nodesize) {
    return node_num * (0.3 * connect + 0.3 * topology + 0.2 * position + 0.2 * nodesize);
}

double loss_multiplier(double accuracy, double beta) {
    if (!(accuracy >= 0.0 && accuracy <= 1.0)) throw Error("accuracy must lie in [0,1]");
    if (!(beta >= 0.0)) throw Error("beta must be non-negative");
    return 1.0 + beta * (1.0 - accuracy);
}

double structural_loss(const LossInputs& inputs) {
    if (!(inputs.ce_loss >= 0.0)) throw Error("cross-entropy loss must be non-negative");
    return inputs.ce_loss * loss_multiplier(inputs.accuracy, inputs.beta);
}

double stage_beta(int stage) {
    if (stage == 1) return 0.5;
    if (stage == 2) return 1.6;
    throw Error("unknown training stage " + std::to_string(stage));
}

MetricReport evaluate_pair(const std::string& pred_text, const std::string& gt_text,
                           const EvalOptions& options) {
    Skeleton gt;
    try {
        gt = parse_text(gt_text);
    } catch (const Error& e) {
        throw Error(std::string("ground truth does not parse: ") + e.what());
    }

    MetricReport report;
    Skeleton pred;
    try {
        pred = parse_text(pred_text);
    } catch (const Error&) {
        report.parse_failed = true;
        return report;  // all metrics stay 0
    }

    Matching matching;
    if (!pred.nodes.empty() && !gt.nodes.empty()) matching = match_nodes(pred, gt);

    report.node_num_acc = node_num_acc(pred, gt);
    report.se_f1 = edge_f1(pred, gt, matching, EdgeKind::Solid);
    report.ve_f1 = edge_f1(pred, gt, matching, EdgeKind::Virtual);
    report.connect_acc = connect_acc(report.se_f1, report.ve_f1);
    report.topology_similarity = topology_similarity(pred, gt, options.topo_mode);
    report.position_acc = position_acc(pred, gt, matching);
    report.nodesize_acc = nodesize_acc(pred, gt, matching);
    report.empty_matching = matching.pairs.empty();
    report.accuracy = aggregate_accuracy(report.node_num_acc, report.connect_acc,
                                         report.topology_similarity, report.position_acc,
                                         report.nodesize_acc);
    return report;
}

BatchSummary evaluate_batch(const std::vector<std::pair<std::string, std::string>>& pairs,
                            const EvalOptions& options, int threads) {
    if (pairs.empty()) throw Error("empty batch");
    if (threads < 1) threads = 1;

    BatchSummary summary;
    summary.reports.resize(pairs.size());
    std::vector<std::string> errors(pairs.size());

    auto worker = [&](std::atomic<size_t>& next) {
        for (size_t i = next.fetch_add(1); i < pairs.size(); i = next.fetch_add(1)) {
            try {
                summary.reports[i] = evaluate_pair(pairs[i].first, pairs[i].second, options);
            } catch (const Error& e) {
                errors[i] = e.what();
            }
        }
    };

    std::atomic<size_t> next{0};
    if (threads == 1) {
        worker(next);
    } else {
        std::vector<std::thread> pool;
        const int count = std::min<int>(threads, static_cast<int>(pairs.size()));
        pool.reserve(count);
        for (int t = 0; t < count; ++t) pool.emplace_back([&] { worker(next); });
        for (std::thread& t : pool) t.join();
    }

    for (size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty()) throw Error("sample " + std::to_string(i) + ": " + errors[i]);

    double failed = 0.0;
    for (const MetricReport& r : summary.reports) {
        summary.mean.node_num_acc += r.node_num_acc;
        summary.mean.se_f1 += r.se_f1;
        summary.mean.ve_f1 += r.ve_f1;
        summary.mean.connect_acc += r.connect_acc;
        summary.mean.topology_similarity += r.topology_similarity;
        summary.mean.position_acc += r.position_acc;
        summary.mean.nodesize_acc += r.nodesize_acc;
        summary.mean.accuracy += r.accuracy;
        failed += r.parse_failed ? 1.0 : 0.0;
    }
    const double count = static_cast<double>(summary.reports.size());
    summary.mean.node_num_acc /= count;
    summary.mean.se_f1 /= count;
    summary.mean.ve_f1 /= count;
    summary.mean.connect_acc /= count;
    summary.mean.topology_similarity /= count;
    summary.mean.position_acc /= count;
    summary.mean.nodesize_acc /= count;
    summary.mean.accuracy /= count;
    summary.parse_failed_rate = failed / count;
    return summary;
}

namespace {

std::string sample_name(const std::vector<std::string>& names, size_t i) {
    return names.empty() ? std::to_string(i) : names[i];
}

void append_report_csv(std::string& out, const MetricReport& r) {
    out += format_double(r.node_num_acc) + "," + format_double(r.se_f1) + "," +
           format_double(r.ve_f1) + "," + format_double(r.connect_acc) + "," +
           format_double(r.topology_similarity) + "," + format_double(r.position_acc) + "," +
           format_double(r.nodesize_acc) + "," + format_double(r.accuracy);
}

nlohmann::ordered_json report_json(const MetricReport& r, double parse_failed) {
    return {{"node_num_acc", r.node_num_acc},
            {"se_f1", r.se_f1},
            {"ve_f1", r.ve_f1},
            {"connect_acc", r.connect_acc},
            {"topology_similarity", r.topology_similarity},
            {"position_acc", r.position_acc},
            {"nodesize_acc", r.nodesize_acc},
            {"accuracy", r.accuracy},
            {"parse_failed", parse_failed}};
}

}  // namespace

std::string batch_to_csv(const BatchSummary& summary, const std::vector<std::string>& names) {
    if (!names.empty() && names.size() != summary.reports.size())
        throw Error("name count does not match report count");
    std::string out =
        "sample,node_num_acc,se_f1,ve_f1,connect_acc,topology_similarity,position_acc,"
        "nodesize_acc,accuracy,parse_failed\n";
    for (size_t i = 0; i < summary.reports.size(); ++i) {
        const MetricReport& r = summary.reports[i];
        out += sample_name(names, i) + ",";
        append_report_csv(out, r);
        out += r.parse_failed ? ",1\n" : ",0\n";
    }
    out += "MEAN,";
    append_report_csv(out, summary.mean);
    out += "," + format_double(summary.parse_failed_rate) + "\n";
    return out;
}

std::string batch_to_json(const BatchSummary& summary, const std::vector<std::string>& names) {
    if (!names.empty() && names.size() != summary.reports.size())
        throw Error("name count does not match report count");
    nlohmann::ordered_json j;
    auto samples = nlohmann::ordered_json::array();
    for (size_t i = 0; i < summary.reports.size(); ++i) {
        const MetricReport& r = summary.reports[i];
        auto row = report_json(r, r.parse_failed ? 1.0 : 0.0);
        row["sample"] = sample_name(names, i);
        samples.push_back(std::move(row));
    }
    j["samples"] = std::move(samples);
    j["mean"] = report_json(summary.mean, summary.parse_failed_rate);
    return j.dump(2) + "\n";
}

}  // namespace minsurf
