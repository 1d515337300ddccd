#include <gtest/gtest.h>

#include <set>

#include "gridcraft/error.hpp"
#include "gridcraft/voxel.hpp"
#include "support.hpp"

using namespace gridcraft;

TEST(Color, SixBlockColorsAndNames) {
  EXPECT_EQ(kBlockColors.size(), 6u);
  for (Color c : kBlockColors) {
    EXPECT_NE(c, Color::Empty);
    EXPECT_EQ(color_from_name(color_name(c)), c);
  }
  EXPECT_EQ(color_from_name("RED"), Color::Red);
  EXPECT_FALSE(color_from_name("empty"));
  EXPECT_FALSE(color_from_name("cyan"));
}

TEST(Manhattan, Examples) {
  EXPECT_EQ(manhattan_distance({2, 1, 3}, {2, 1, 3}), 0);
  EXPECT_EQ(manhattan_distance({0, 0, 0}, {1, 2, 3}), 6);
  EXPECT_EQ(manhattan_distance({1, 2, 3}, {0, 0, 0}), 6);
}

TEST(Manhattan, IsAMetric) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> v(-20, 20);
  auto pick = [&] { return Coord{v(rng), v(rng), v(rng)}; };
  for (int i = 0; i < 2000; ++i) {
    const Coord a = pick(), b = pick(), c = pick();
    EXPECT_GE(manhattan_distance(a, b), 0);
    EXPECT_EQ(manhattan_distance(a, b) == 0, a == b);
    EXPECT_EQ(manhattan_distance(a, b), manhattan_distance(b, a));
    EXPECT_LE(manhattan_distance(a, c), manhattan_distance(a, b) + manhattan_distance(b, c));
  }
}

TEST(VoxelGrid, DefaultsAndBounds) {
  VoxelGrid g;
  EXPECT_EQ(g.dims(), (Dims{11, 9, 11}));
  EXPECT_EQ(g.count_filled(), 0u);
  EXPECT_EQ(g.at({-1, 0, 0}), Color::Empty);
  EXPECT_THROW(g.set({11, 0, 0}, Color::Red), OutOfZone);
  g.set({1, 2, 3}, Color::Red);
  EXPECT_EQ(g.at({1, 2, 3}), Color::Red);
  EXPECT_EQ(g.count_filled(), 1u);
}

TEST(VoxelGrid, BlocksInLayerOrder) {
  VoxelGrid g;
  g.set({3, 1, 0}, Color::Red);
  g.set({0, 0, 5}, Color::Blue);
  g.set({0, 0, 2}, Color::Green);
  const auto b = g.blocks();
  ASSERT_EQ(b.size(), 3u);
  EXPECT_EQ(b[0].first, (Coord{0, 0, 2}));
  EXPECT_EQ(b[1].first, (Coord{0, 0, 5}));
  EXPECT_EQ(b[2].first, (Coord{3, 1, 0}));
}

TEST(GridDiff, Examples) {
  VoxelGrid cur, tgt;
  EXPECT_TRUE(grid_diff(cur, tgt).empty());

  tgt.set({5, 0, 5}, Color::Blue);
  tgt.set({5, 1, 5}, Color::Blue);
  GridDelta d = grid_diff(cur, tgt);
  EXPECT_EQ(d.to_place.size(), 2u);
  EXPECT_TRUE(d.to_remove.empty());

  VoxelGrid a, b;
  a.set({5, 0, 5}, Color::Blue);
  b.set({5, 0, 5}, Color::Red);
  d = grid_diff(a, b);
  ASSERT_EQ(d.to_remove.size(), 1u);
  ASSERT_EQ(d.to_place.size(), 1u);
  EXPECT_EQ(d.to_remove[0], (Coord{5, 0, 5}));
  EXPECT_EQ(d.to_place[0], (Block{{5, 0, 5}, Color::Red}));
}

TEST(GridDiff, DimensionMismatch) {
  EXPECT_THROW(grid_diff(VoxelGrid({3, 3, 3}), VoxelGrid({3, 4, 3})), DimensionMismatch);
}

// Naive application: clear every removal, then write every placement.
TEST(GridDiff, RoundTripAndMinimality) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    const Dims dims{6, 4, 5};
    const VoxelGrid cur = test_support::random_grid(rng, dims, 0.3);
    const VoxelGrid tgt = test_support::random_grid(rng, dims, 0.3);
    const GridDelta d = grid_diff(cur, tgt);
    VoxelGrid g = cur;
    for (const Coord& c : d.to_remove) g.set(c, Color::Empty);
    for (const auto& [c, color] : d.to_place) g.set(c, color);
    ASSERT_EQ(g, tgt);
    EXPECT_EQ(apply_delta(cur, d), tgt);
    for (const Coord& c : d.to_remove) EXPECT_NE(cur.at(c), tgt.at(c));
    for (const auto& [c, color] : d.to_place) EXPECT_NE(cur.at(c), color);
    std::set<Coord> removed(d.to_remove.begin(), d.to_remove.end());
    EXPECT_EQ(removed.size(), d.to_remove.size());
  }
}

TEST(F1, Examples) {
  VoxelGrid t;
  t.set({0, 0, 0}, Color::Blue);
  t.set({1, 0, 0}, Color::Red);
  t.set({2, 0, 0}, Color::Green);
  t.set({3, 0, 0}, Color::Yellow);

  F1Result r = f1_score(t, t);
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.f1, 1.0);

  r = f1_score(VoxelGrid(), t);
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f1, 0.0);

  VoxelGrid b;
  b.set({0, 0, 0}, Color::Blue);
  b.set({1, 0, 0}, Color::Red);
  b.set({2, 0, 0}, Color::Red);  // colour mismatch counts as wrong
  r = f1_score(b, t);
  EXPECT_EQ(r.correct, 2u);
  EXPECT_DOUBLE_EQ(r.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.recall, 0.5);
  EXPECT_NEAR(r.f1, 4.0 / 7.0, 1e-12);

  r = f1_score(VoxelGrid(), VoxelGrid());
  EXPECT_EQ(r.f1, 0.0);
}

TEST(F1, SwapExchangesPrecisionAndRecall) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 500; ++i) {
    const VoxelGrid a = test_support::random_grid(rng, {5, 3, 5}, 0.25);
    const VoxelGrid b = test_support::random_grid(rng, {5, 3, 5}, 0.25);
    const F1Result ab = f1_score(a, b);
    const F1Result ba = f1_score(b, a);
    EXPECT_EQ(ab.precision, ba.recall);
    EXPECT_EQ(ab.recall, ba.precision);
    EXPECT_DOUBLE_EQ(ab.f1, ba.f1);
  }
}

TEST(F1, MatchesBruteForceCount) {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 1000; ++i) {
    const Dims dims{4, 3, 4};
    const VoxelGrid a = test_support::random_grid(rng, dims, 0.4);
    // Target shares some cells with `a` so that matches actually occur.
    VoxelGrid b = test_support::random_grid(rng, dims, 0.4);
    for (const auto& [c, color] : a.blocks()) {
      if (rng() % 2) b.set(c, color);
    }
    std::size_t correct = 0, built = 0, target = 0;
    for (int x = 0; x < dims.x; ++x) {
      for (int y = 0; y < dims.y; ++y) {
        for (int z = 0; z < dims.z; ++z) {
          const Color ca = a.at({x, y, z});
          const Color cb = b.at({x, y, z});
          built += ca != Color::Empty;
          target += cb != Color::Empty;
          correct += ca != Color::Empty && ca == cb;
        }
      }
    }
    const F1Result r = f1_score(a, b);
    EXPECT_EQ(r.correct, correct);
    EXPECT_EQ(r.built, built);
    EXPECT_EQ(r.target, target);
    const double p = built ? static_cast<double>(correct) / built : 0.0;
    const double q = target ? static_cast<double>(correct) / target : 0.0;
    EXPECT_EQ(r.precision, p);
    EXPECT_EQ(r.recall, q);
    EXPECT_EQ(r.f1, p + q > 0 ? 2 * p * q / (p + q) : 0.0);
  }
}
