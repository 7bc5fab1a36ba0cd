#pragma once

#include <cstddef>
#include <limits>
#include <utility>
#include <vector>

namespace stereoloc {

/// Dense rows x cols cost matrix. Non-finite entries mark forbidden pairs.
class CostMatrix {
public:
    static constexpr double kForbidden = std::numeric_limits<double>::infinity();

    CostMatrix() = default;
    CostMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, kForbidden) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    bool allowed(std::size_t r, std::size_t c) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  ///< (row, col), ascending row
    double total_cost = 0.0;
};

/// Sum of pair costs in ascending-row order.
double matching_cost(const CostMatrix& cost, const std::vector<std::pair<int, int>>& pairs);

/// Ordering shared by the solver and the oracle: more pairs first, then lower
/// total cost (relative tolerance 1e-9), then lexicographically smaller pairs.
bool better_assignment(const Assignment& a, const Assignment& b);

/// Optimal assignment over allowed pairs: maximum cardinality, then minimum
/// total cost, then lexicographic (row, col) order among exact-cost ties.
/// Kuhn-Munkres core plus a lexicographic canonicalization pass.
Assignment solve_assignment(const CostMatrix& cost);

/// Exhaustive enumeration with the same ordering. Throws TooLarge when
/// min(rows, cols) > max_small_side.
Assignment brute_force_assignment(const CostMatrix& cost, std::size_t max_small_side = 8);

}  // namespace stereoloc
