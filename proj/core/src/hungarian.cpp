#include "minsurf/hungarian.hpp"

#include <limits>

#include "minsurf/errors.hpp"

namespace minsurf {

std::vector<int> solve_assignment(const std::vector<double>& cost, int n_rows, int n_cols) {
    if (n_rows < 0 || n_cols < n_rows) throw Error("assignment needs 0 <= n_rows <= n_cols");
    if (cost.size() != static_cast<size_t>(n_rows) * n_cols)
        throw Error("cost matrix size mismatch");

    constexpr double kInf = std::numeric_limits<double>::infinity();
    // 1-based columns; index 0 is the virtual start column.
    std::vector<double> u(n_rows + 1, 0.0), v(n_cols + 1, 0.0);
    std::vector<int> col_row(n_cols + 1, 0);  // row (1-based) matched to column
    std::vector<int> way(n_cols + 1, 0);

    for (int i = 1; i <= n_rows; ++i) {
        col_row[0] = i;
        int j0 = 0;
        std::vector<double> min_slack(n_cols + 1, kInf);
        std::vector<bool> used(n_cols + 1, false);
        do {
            used[j0] = true;
            const int i0 = col_row[j0];
            double delta = kInf;
            int j1 = -1;
            for (int j = 1; j <= n_cols; ++j) {
                if (used[j]) continue;
                const double slack =
                    cost[static_cast<size_t>(i0 - 1) * n_cols + (j - 1)] - u[i0] - v[j];
                if (slack < min_slack[j]) {
                    min_slack[j] = slack;
                    way[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n_cols; ++j) {
                if (used[j]) {
                    u[col_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_row[j0] != 0);
        do {
            const int j1 = way[j0];
            col_row[j0] = col_row[j1];
            j0 = j1;
        } while (j0);
    }

    std::vector<int> row_col(n_rows, -1);
    for (int j = 1; j <= n_cols; ++j)
        if (col_row[j] > 0) row_col[col_row[j] - 1] = j - 1;
    return row_col;
}

}  // namespace minsurf
