#pragma once

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "minsurf/metrics.hpp"
#include "minsurf/skeleton.hpp"

namespace test_helpers {

inline minsurf::Skeleton make_skeleton(std::vector<minsurf::Vec3> positions,
                                       std::vector<double> sizes,
                                       std::vector<std::pair<int, int>> solid,
                                       std::vector<std::pair<int, int>> virt = {}) {
    minsurf::Skeleton skel;
    for (size_t i = 0; i < positions.size(); ++i)
        skel.nodes.push_back({positions[i], i < sizes.size() ? sizes[i] : 0.5});
    for (auto [a, b] : solid) skel.solid_edges.emplace_back(a, b);
    for (auto [a, b] : virt)
        skel.virtual_edges.push_back({minsurf::EdgePair(a, b), minsurf::ConnectionOperator::Link});
    std::sort(skel.solid_edges.begin(), skel.solid_edges.end());
    std::sort(skel.virtual_edges.begin(), skel.virtual_edges.end());
    return skel;
}

/// Exhaustive-permutation assignment oracle: minimum total cost over all
/// injections of the rows into the columns, rows <= cols. Independent of the
/// Hungarian implementation; O(cols! / (cols - rows)!).
inline double brute_force_assignment_cost(const std::vector<double>& cost, int n_rows,
                                          int n_cols) {
    std::vector<int> cols(n_cols);
    std::iota(cols.begin(), cols.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    // Permute all columns; the first n_rows entries define the injection.
    // Sorting the tail canonically avoids revisits only partially, which is
    // fine at the n <= 7 sizes this oracle is used for.
    do {
        double total = 0.0;
        for (int r = 0; r < n_rows; ++r) total += cost[static_cast<size_t>(r) * n_cols + cols[r]];
        best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

/// Matching cost oracle on normalized coordinates, mirroring the production
/// cost construction but solving by enumeration.
inline double brute_force_matching_cost(const minsurf::Skeleton& pred,
                                        const minsurf::Skeleton& gt) {
    std::vector<minsurf::Vec3> pred_pos, gt_pos;
    for (const auto& n : pred.nodes) pred_pos.push_back(n.position);
    for (const auto& n : gt.nodes) gt_pos.push_back(n.position);
    const auto pn = minsurf::normalize_bbox(pred_pos);
    const auto gn = minsurf::normalize_bbox(gt_pos);

    const bool pred_rows = pn.size() <= gn.size();
    const auto& rows = pred_rows ? pn : gn;
    const auto& cols = pred_rows ? gn : pn;
    std::vector<double> cost(rows.size() * cols.size());
    for (size_t r = 0; r < rows.size(); ++r)
        for (size_t c = 0; c < cols.size(); ++c)
            cost[r * cols.size() + c] = minsurf::norm(rows[r] - cols[c]);
    return brute_force_assignment_cost(cost, static_cast<int>(rows.size()),
                                       static_cast<int>(cols.size()));
}

}  // namespace test_helpers
