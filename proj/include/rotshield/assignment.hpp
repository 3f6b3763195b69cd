#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include "rotshield/matrix.hpp"

namespace rotshield {

/// Exact minimum-cost perfect assignment on a square cost matrix
/// (Hungarian algorithm with potentials, O(n^3)). Returns row_to_col:
/// row i is assigned column row_to_col[i]. Deterministic; intended for the
/// small matrices that component alignment and cluster matching produce.
inline std::vector<std::size_t> min_cost_assignment(const Matrix& cost) {
    if (cost.rows == 0 || cost.rows != cost.cols)
        throw std::invalid_argument("min_cost_assignment: need a nonempty square matrix, got " +
                                    shape_string(cost));
    const std::size_t n = cost.rows;
    const double inf = std::numeric_limits<double>::infinity();

    // 1-based arrays; p[j] = row matched to column j (0 = free).
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            std::size_t j1 = 0;
            double delta = inf;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> row_to_col(n, 0);
    for (std::size_t j = 1; j <= n; ++j)
        if (p[j] != 0) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

} // namespace rotshield
