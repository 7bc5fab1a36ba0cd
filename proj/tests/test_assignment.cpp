#include <random>

#include <gtest/gtest.h>

#include "stereoloc/assignment.hpp"
#include "stereoloc/errors.hpp"

namespace stereoloc {
namespace {

using Pairs = std::vector<std::pair<int, int>>;

CostMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    CostMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < rows[r].size(); ++c)
            m(r, c) = rows[r][c];
    return m;
}

constexpr double X = CostMatrix::kForbidden;

TEST(SolveAssignment, Empty) {
    EXPECT_TRUE(solve_assignment(CostMatrix(0, 0)).pairs.empty());
    EXPECT_TRUE(solve_assignment(CostMatrix(3, 0)).pairs.empty());
    EXPECT_TRUE(solve_assignment(from_rows({{X, X}, {X, X}})).pairs.empty());
}

TEST(SolveAssignment, PicksMinimumCost) {
    const auto a = solve_assignment(from_rows({{4, 1, 3}, {2, 0, 5}, {3, 2, 2}}));
    EXPECT_EQ(a.pairs, (Pairs{{0, 1}, {1, 0}, {2, 2}}));
    EXPECT_DOUBLE_EQ(a.total_cost, 5.0);
}

TEST(SolveAssignment, PrefersMorePairsOverLowerCost) {
    // Pairing (0,0) alone costs 0 but leaves row 1 unmatched.
    const auto a = solve_assignment(from_rows({{0, 9}, {7, X}}));
    EXPECT_EQ(a.pairs, (Pairs{{0, 1}, {1, 0}}));
}

TEST(SolveAssignment, RectangularAndForbidden) {
    const auto a = solve_assignment(from_rows({{X, 2, X, 1}, {3, X, X, X}}));
    EXPECT_EQ(a.pairs, (Pairs{{0, 3}, {1, 0}}));
    const auto b = solve_assignment(from_rows({{5}, {1}, {3}}));
    EXPECT_EQ(b.pairs, (Pairs{{1, 0}}));
}

TEST(SolveAssignment, LexicographicTieBreak) {
    const auto a = solve_assignment(from_rows({{1, 1}, {1, 1}}));
    EXPECT_EQ(a.pairs, (Pairs{{0, 0}, {1, 1}}));
    // Row 0 can stay unmatched at equal cost; matching it is lexicographically first.
    const auto b = solve_assignment(from_rows({{2, X}, {2, X}}));
    EXPECT_EQ(b.pairs, (Pairs{{0, 0}}));
}

TEST(BruteForceAssignment, TooLarge) {
    EXPECT_THROW(brute_force_assignment(CostMatrix(9, 9)), TooLarge);
    EXPECT_NO_THROW(brute_force_assignment(CostMatrix(9, 2)));
}

// Integer costs make exact ties frequent, exercising the tie-break path.
TEST(AssignmentProperty, MatchesBruteForce) {
    std::mt19937_64 rng(21);
    std::uniform_int_distribution<int> dim(0, 6), cost(0, 4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 3000; ++trial) {
        const int r = dim(rng), c = dim(rng);
        const bool integral = trial % 2 == 0;
        const double forbid = unit(rng) * 0.7;
        CostMatrix m(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (unit(rng) >= forbid)
                    m(i, j) = integral ? cost(rng) : unit(rng) * 3;
        const auto fast = solve_assignment(m);
        const auto slow = brute_force_assignment(m);
        ASSERT_EQ(fast.pairs, slow.pairs) << "trial " << trial;
        ASSERT_EQ(fast.total_cost, slow.total_cost);
    }
}

}  // namespace
}  // namespace stereoloc
