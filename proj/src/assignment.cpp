#include "stereoloc/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "stereoloc/errors.hpp"

namespace stereoloc {

bool CostMatrix::allowed(std::size_t r, std::size_t c) const {
    return std::isfinite((*this)(r, c));
}

double matching_cost(const CostMatrix& cost, const std::vector<std::pair<int, int>>& pairs) {
    double total = 0.0;
    for (const auto& [r, c] : pairs)
        total += cost(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
    return total;
}

namespace {

bool costs_tie(double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

// Minimum-cost perfect assignment of an n x n matrix (n >= 1), rows to columns.
// Classic potentials formulation, O(n^3).
std::vector<int> hungarian_square(const std::vector<double>& a, int n) {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    std::vector<double> minv(n + 1);
    std::vector<char> used(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::fill(minv.begin(), minv.end(), inf);
        std::fill(used.begin(), used.end(), 0);
        do {
            used[j0] = 1;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = a[(i0 - 1) * n + (j - 1)] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
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
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> row_to_col(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j] != 0)
            row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

// Max-cardinality min-cost matching restricted to the given rows and columns.
std::vector<std::pair<int, int>> solve_subset(const CostMatrix& cost, const std::vector<int>& rows,
                                              const std::vector<int>& cols) {
    std::vector<std::pair<int, int>> out;
    if (rows.empty() || cols.empty())
        return out;
    double finite_sum = 0.0;
    bool any = false;
    for (int r : rows)
        for (int c : cols)
            if (cost.allowed(r, c)) {
                finite_sum += std::abs(cost(r, c));
                any = true;
            }
    if (!any)
        return out;
    // Any forbidden pair costs more than every allowed matching combined, so
    // the minimum first maximizes the number of allowed pairs.
    const double big = 2.0 * (finite_sum + 1.0);
    const int n = static_cast<int>(std::max(rows.size(), cols.size()));
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const bool real_row = i < static_cast<int>(rows.size());
            const bool real_col = j < static_cast<int>(cols.size());
            if (real_row && real_col) {
                const double c = cost(rows[i], cols[j]);
                a[i * n + j] = std::isfinite(c) ? c : big;
            }
        }
    const auto row_to_col = hungarian_square(a, n);
    for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
        const int j = row_to_col[i];
        if (j >= 0 && j < static_cast<int>(cols.size()) && cost.allowed(rows[i], cols[j]))
            out.emplace_back(rows[i], cols[j]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

bool better_assignment(const Assignment& a, const Assignment& b) {
    if (a.pairs.size() != b.pairs.size())
        return a.pairs.size() > b.pairs.size();
    if (!costs_tie(a.total_cost, b.total_cost))
        return a.total_cost < b.total_cost;
    return a.pairs < b.pairs;
}

Assignment solve_assignment(const CostMatrix& cost) {
    const int nr = static_cast<int>(cost.rows());
    const int nc = static_cast<int>(cost.cols());
    std::vector<int> all_rows(nr), all_cols(nc);
    for (int i = 0; i < nr; ++i)
        all_rows[i] = i;
    for (int j = 0; j < nc; ++j)
        all_cols[j] = j;

    auto current = solve_subset(cost, all_rows, all_cols);
    const std::size_t best_card = current.size();
    const double best_cost = matching_cost(cost, current);
    if (best_card == 0)
        return {};

    // Canonicalize among optimal matchings: walk rows in order and give each
    // the smallest column that still admits an optimal completion.
    std::vector<std::pair<int, int>> fixed;
    std::vector<char> col_used(nc, 0);
    for (int i = 0; i < nr; ++i) {
        int cur_j = -1;
        for (const auto& [r, c] : current)
            if (r == i)
                cur_j = c;
        const int limit = cur_j >= 0 ? cur_j : nc;
        bool placed = false;
        for (int j = 0; j < limit && !placed; ++j) {
            if (col_used[j] || !cost.allowed(i, j))
                continue;
            std::vector<int> rest_rows, rest_cols;
            for (int r = i + 1; r < nr; ++r)
                rest_rows.push_back(r);
            for (int c = 0; c < nc; ++c)
                if (!col_used[c] && c != j)
                    rest_cols.push_back(c);
            auto rest = solve_subset(cost, rest_rows, rest_cols);
            if (fixed.size() + 1 + rest.size() != best_card)
                continue;
            std::vector<std::pair<int, int>> candidate = fixed;
            candidate.emplace_back(i, j);
            candidate.insert(candidate.end(), rest.begin(), rest.end());
            if (!costs_tie(matching_cost(cost, candidate), best_cost))
                continue;
            current = std::move(candidate);
            fixed.emplace_back(i, j);
            col_used[j] = 1;
            placed = true;
        }
        if (!placed && cur_j >= 0) {
            fixed.emplace_back(i, cur_j);
            col_used[cur_j] = 1;
        }
    }
    return {fixed, matching_cost(cost, fixed)};
}

Assignment brute_force_assignment(const CostMatrix& cost, std::size_t max_small_side) {
    const std::size_t nr = cost.rows();
    const std::size_t nc = cost.cols();
    if (std::min(nr, nc) > max_small_side)
        throw TooLarge("brute-force assignment limited to " + std::to_string(max_small_side) +
                       " items on the smaller side, got " + std::to_string(std::min(nr, nc)));
    const bool by_rows = nr <= nc;
    const std::size_t outer = by_rows ? nr : nc;
    const std::size_t inner = by_rows ? nc : nr;

    Assignment best;
    bool have_best = false;
    std::vector<std::pair<int, int>> chosen;
    std::vector<char> inner_used(inner, 0);

    std::function<void(std::size_t)> recurse = [&](std::size_t k) {
        if (k == outer) {
            Assignment cand;
            cand.pairs = chosen;
            std::sort(cand.pairs.begin(), cand.pairs.end());
            cand.total_cost = matching_cost(cost, cand.pairs);
            if (!have_best || better_assignment(cand, best)) {
                best = std::move(cand);
                have_best = true;
            }
            return;
        }
        recurse(k + 1);
        for (std::size_t m = 0; m < inner; ++m) {
            if (inner_used[m])
                continue;
            const std::size_t r = by_rows ? k : m;
            const std::size_t c = by_rows ? m : k;
            if (!cost.allowed(r, c))
                continue;
            inner_used[m] = 1;
            chosen.emplace_back(static_cast<int>(r), static_cast<int>(c));
            recurse(k + 1);
            chosen.pop_back();
            inner_used[m] = 0;
        }
    };
    recurse(0);
    return best;
}

}  // namespace stereoloc
