#include "sgc/hungarian.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "fixtures.hpp"
#include "gtest/gtest.h"
#include "sgc/error.hpp"

namespace sgc {
namespace {

TEST(HungarianTest, Identity) {
  auto r = hungarian_assign({{1, 0}, {0, 1}});
  ASSERT_EQ(r.pairs.size(), 2u);
  EXPECT_EQ(r.pairs[0], (MatchedPair{0, 0, 1.0}));
  EXPECT_EQ(r.pairs[1], (MatchedPair{1, 1, 1.0}));
}

TEST(HungarianTest, ThreeByThree) {
  auto r = hungarian_assign({{0.9, 0.1, 0.2}, {0.2, 0.8, 0.1}, {0.3, 0.2, 0.95}});
  ASSERT_EQ(r.pairs.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(r.pairs[i].target, i);
  EXPECT_NEAR(r.total(), 2.65, 1e-12);
}

TEST(HungarianTest, RectangularLeavesUnmatched) {
  auto r = hungarian_assign({{0.1, 0.9, 0.3}, {0.8, 0.2, 0.4}});
  ASSERT_EQ(r.pairs.size(), 2u);
  EXPECT_EQ(r.pairs[0].target, 1u);
  EXPECT_EQ(r.pairs[1].target, 0u);
  EXPECT_TRUE(r.unmatched_source.empty());
  EXPECT_EQ(r.unmatched_target, std::vector<std::size_t>{2});

  auto t = hungarian_assign({{0.1, 0.8}, {0.9, 0.2}, {0.3, 0.4}});
  ASSERT_EQ(t.pairs.size(), 2u);
  EXPECT_EQ(t.unmatched_source, std::vector<std::size_t>{2});
}

TEST(HungarianTest, EmptyMatrix) {
  auto r = hungarian_assign(SimilarityMatrix{});
  EXPECT_TRUE(r.pairs.empty());
  auto c = hungarian_assign(SimilarityMatrix(0, 3));
  EXPECT_TRUE(c.pairs.empty());
}

TEST(HungarianTest, InvalidScores) {
  for (double bad : {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::infinity(), 1.5}) {
    SimilarityMatrix m(2, 2, 0.5);
    m(1, 0) = bad;
    try {
      hungarian_assign(m);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kInvalidScore);
    }
  }
}

TEST(HungarianTest, TiesBreakLexicographically) {
  auto r = hungarian_assign({{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_EQ(r.pairs[0].target, 0u);
  EXPECT_EQ(r.pairs[1].target, 1u);
  auto all_zero = hungarian_assign(SimilarityMatrix(3, 3, 0.0));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(all_zero.pairs[i].target, i);
  // Two optima {(0,1),(1,0)} and {(0,0),(1,1)} both total 1.0.
  auto two = hungarian_assign({{0.5, 0.5}, {0.5, 0.5}, {0.0, 0.0}});
  EXPECT_EQ(two.pairs[0].target, 0u);
  EXPECT_EQ(two.unmatched_source, std::vector<std::size_t>{2});
}

TEST(HungarianTest, MatchesExhaustiveOracle) {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t rows = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    std::size_t cols = std::uniform_int_distribution<std::size_t>(1, 6)(rng);
    auto m = testing::random_matrix(rng, rows, cols, trial % 3 == 0);
    auto r = hungarian_assign(m);
    EXPECT_EQ(r.total(), testing::brute_force_max_total(m)) << "trial " << trial;
    EXPECT_EQ(r.pairs.size(), std::min(rows, cols));
    EXPECT_EQ(r.pairs.size() + r.unmatched_source.size(), rows);
    EXPECT_EQ(r.pairs.size() + r.unmatched_target.size(), cols);
  }
}

}  // namespace
}  // namespace sgc
