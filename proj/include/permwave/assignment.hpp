#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace permwave {

struct Assignment {
    std::vector<int> row_of_col;  // sigma: column l -> selected row
    double total = 0.0;           // sum_l Y[sigma(l)][l]
};

namespace detail {

/// Kuhn-Munkres (Jonker-Volgenant shortest augmenting path variant) for the
/// min-cost square assignment problem; O(n^3). cost is row-major n x n.
/// Returns row index per column.
inline std::vector<int> solve_min_assignment(const std::vector<double>& cost, int n) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    // 1-based potentials; matched_row[j] = row matched to column j
    std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
    std::vector<int> matched_row(static_cast<std::size_t>(n) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 1; i <= n; ++i) {
        matched_row[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
        std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = matched_row[static_cast<std::size_t>(j0)];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost[static_cast<std::size_t>(i0 - 1) *
                                            static_cast<std::size_t>(n) +
                                        static_cast<std::size_t>(j - 1)] -
                                   u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(matched_row[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (matched_row[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            matched_row[static_cast<std::size_t>(j0)] = matched_row[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_of_col(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        row_of_col[static_cast<std::size_t>(j - 1)] = matched_row[static_cast<std::size_t>(j)] - 1;
    return row_of_col;
}

inline double column_order_total(const std::vector<double>& score, int n,
                                 const std::vector<int>& row_of_col) {
    double total = 0.0;
    for (int j = 0; j < n; ++j)
        total += score[static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(j)]) *
                           static_cast<std::size_t>(n) +
                       static_cast<std::size_t>(j)];
    return total;
}

}  // namespace detail

/// Maximises sum_l Y[sigma(l)][l] over permutations sigma. score is a square
/// row-major matrix. Ties between equal-total assignments are broken towards
/// the lexicographically smallest sigma = (sigma(0), sigma(1), ...): each
/// column is pinned, in order, to the smallest row that still attains the
/// optimum of the remaining subproblem.
inline Assignment assign_max(const std::vector<double>& score, int n) {
    if (n < 1 || score.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw std::domain_error("assign_max needs a non-empty square matrix");

    std::vector<double> cost(score.size());
    for (std::size_t i = 0; i < score.size(); ++i) cost[i] = -score[i];

    const std::vector<int> best = detail::solve_min_assignment(cost, n);
    const double best_total = detail::column_order_total(score, n, best);

    // lexicographic refinement over exactly-equal totals
    std::vector<int> fixed_row_of_col(static_cast<std::size_t>(n), -1);
    std::vector<char> row_used(static_cast<std::size_t>(n), 0);
    double target_total = best_total;
    for (int col = 0; col < n; ++col) {
        bool pinned = false;
        int fallback_row = -1;
        double fallback_total = -std::numeric_limits<double>::infinity();
        for (int row = 0; row < n && !pinned; ++row) {
            if (row_used[static_cast<std::size_t>(row)]) continue;
            // residual problem over free rows/columns with (row, col) pinned
            std::vector<int> free_rows;
            for (int r = 0; r < n; ++r)
                if (!row_used[static_cast<std::size_t>(r)] && r != row) free_rows.push_back(r);
            const int m = static_cast<int>(free_rows.size());
            std::vector<int> candidate(fixed_row_of_col);
            candidate[static_cast<std::size_t>(col)] = row;
            if (m > 0) {
                std::vector<double> sub(static_cast<std::size_t>(m) * static_cast<std::size_t>(m));
                for (int r = 0; r < m; ++r)
                    for (int c = 0; c < m; ++c)
                        sub[static_cast<std::size_t>(r) * static_cast<std::size_t>(m) +
                            static_cast<std::size_t>(c)] =
                            -score[static_cast<std::size_t>(free_rows[static_cast<std::size_t>(
                                       r)]) *
                                       static_cast<std::size_t>(n) +
                                   static_cast<std::size_t>(col + 1 + c)];
                const std::vector<int> sub_rows = detail::solve_min_assignment(sub, m);
                for (int c = 0; c < m; ++c)
                    candidate[static_cast<std::size_t>(col + 1 + c)] =
                        free_rows[static_cast<std::size_t>(sub_rows[static_cast<std::size_t>(c)])];
            }
            const double candidate_total = detail::column_order_total(score, n, candidate);
            if (candidate_total == target_total) {
                fixed_row_of_col[static_cast<std::size_t>(col)] = row;
                row_used[static_cast<std::size_t>(row)] = 1;
                pinned = true;
            } else if (candidate_total > fallback_total) {
                fallback_total = candidate_total;
                fallback_row = row;
            }
        }
        if (!pinned) {
            // rounding separated equal-value optima; keep the best reachable one
            fixed_row_of_col[static_cast<std::size_t>(col)] = fallback_row;
            row_used[static_cast<std::size_t>(fallback_row)] = 1;
            target_total = fallback_total;
        }
    }
    return {fixed_row_of_col,
            detail::column_order_total(score, n, fixed_row_of_col)};
}

}  // namespace permwave
