#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "minsurf/skeleton.hpp"

namespace minsurf {

/// One-to-one (partial) correspondence between predicted and ground-truth
/// node indices. `cost` is the sum of Euclidean distances between matched
/// bounding-box-normalized positions.
struct Matching {
    std::vector<std::pair<int, int>> pairs;  // (pred index, gt index), sorted by matched side
    double cost = 0.0;
    std::vector<int> unmatched_pred;
    std::vector<int> unmatched_gt;
};

/// The five per-sample accuracy components plus the gated aggregate.
struct MetricReport {
    double node_num_acc = 0.0;
    double se_f1 = 0.0;
    double ve_f1 = 0.0;
    double connect_acc = 0.0;
    double topology_similarity = 0.0;
    double position_acc = 0.0;
    double nodesize_acc = 0.0;
    double accuracy = 0.0;
    bool parse_failed = false;
    /// Set when position/size scores were forced to 0 by an empty matching.
    bool empty_matching = false;
};

/// Inputs for the reward-modulated loss. The cross-entropy value is supplied
/// by the training loop; nothing here touches model logits.
struct LossInputs {
    double ce_loss = 0.0;
    double accuracy = 0.0;
    double beta = 0.0;
};

/// Which edge families feed the spectral comparison.
enum class TopologyGraphMode : uint8_t { Union, SolidOnly, VirtualOnly };

struct EvalOptions {
    TopologyGraphMode topo_mode = TopologyGraphMode::Union;
};

/// Minimum-total-distance one-to-one matching of the smaller node set into
/// the larger, on bounding-box-normalized coordinates. Ties are broken
/// deterministically: the fully-matched side's assignment list is made
/// lexicographically smallest among all optimal assignments. Throws Error
/// when either skeleton has no nodes.
Matching match_nodes(const Skeleton& pred, const Skeleton& gt);

/// 1 if the node counts agree, else 0.
double node_num_acc(const Skeleton& pred, const Skeleton& gt);

/// F1 of the predicted edge set of one kind against ground truth, with
/// predicted edges mapped through the matching. Edges incident to unmatched
/// nodes count as false positives. Both sets empty scores 1, exactly one
/// empty scores 0.
double edge_f1(const Skeleton& pred, const Skeleton& gt, const Matching& matching, EdgeKind kind);

/// Arithmetic mean of the solid- and virtual-edge F1 scores.
double connect_acc(double se_f1, double ve_f1);

/// Spectral similarity 1 - |lambda_pred - lambda_gt| / max(|lambda_pred|,
/// |lambda_gt|) over sorted Laplacian eigenvalues, the shorter spectrum
/// zero-padded. Two edgeless graphs score 1. Clamped to [0,1].
double topology_similarity(const Skeleton& pred, const Skeleton& gt,
                           TopologyGraphMode mode = TopologyGraphMode::Union);

/// 1 / (1 + mean squared distance) over matched normalized positions.
/// An empty matching scores 0.
double position_acc(const Skeleton& pred, const Skeleton& gt, const Matching& matching);

/// max(0, 1 - MAE / s_max) over matched sizes, s_max taken over every size in
/// both skeletons. All-zero sizes score 1; an empty matching scores 0.
double nodesize_acc(const Skeleton& pred, const Skeleton& gt, const Matching& matching);

/// NodeNumAcc * (0.3 ConnectAcc + 0.3 TopologySimilarity + 0.2 PositionAcc +
/// 0.2 NodesizeAcc).
double aggregate_accuracy(double node_num, double connect, double topology, double position,
                          double nodesize);

/// 1 + beta * (1 - accuracy). Exactly 1 at accuracy 1 and 1 + beta at 0.
double loss_multiplier(double accuracy, double beta);

/// Cross-entropy scaled by the reward multiplier.
double structural_loss(const LossInputs& inputs);

/// Two-stage schedule: beta = 0.5 in stage 1, 1.6 in stage 2.
double stage_beta(int stage);

/// Full per-sample pipeline. A prediction that fails to parse or validate
/// yields an all-zero report with parse_failed set; an unparseable ground
/// truth throws Error.
MetricReport evaluate_pair(const std::string& pred_text, const std::string& gt_text,
                           const EvalOptions& options = {});

struct BatchSummary {
    std::vector<MetricReport> reports;  // input order
    MetricReport mean;                  // column means; bool flags unused
    double parse_failed_rate = 0.0;
};

/// Evaluates every (pred_text, gt_text) pair, optionally across threads.
/// Results are merged in input order, so the summary is identical for any
/// thread count. Throws Error naming the sample index on a bad ground truth.
BatchSummary evaluate_batch(const std::vector<std::pair<std::string, std::string>>& pairs,
                            const EvalOptions& options = {}, int threads = 1);

/// CSV rendering with the fixed header and a trailing MEAN row. `names`, when
/// given, must be one label per report.
std::string batch_to_csv(const BatchSummary& summary,
                         const std::vector<std::string>& names = {});
std::string batch_to_json(const BatchSummary& summary,
                          const std::vector<std::string>& names = {});

}  // namespace minsurf
