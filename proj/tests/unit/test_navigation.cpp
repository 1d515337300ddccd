#include <gtest/gtest.h>

#include <random>

#include "gridcraft/navigation.hpp"
#include "support.hpp"

using namespace gridcraft;

namespace {

AgentPose run(const VoxelGrid& g, AgentPose p, const std::vector<Action>& actions) {
  for (Action a : actions) p = apply_motion(g, p, a);
  return p;
}

// Shortest length by iterative deepening over the same move set.
bool dfs(const VoxelGrid& g, const AgentPose& p, const PoseGoal& goal, int depth) {
  if (goal(p)) return true;
  if (depth == 0) return false;
  for (Action a : {Action::Forward, Action::Back, Action::Left, Action::Right, Action::Jump,
                   Action::TurnLeft, Action::TurnRight}) {
    const AgentPose n = apply_motion(g, p, a);
    if (n != p && dfs(g, n, goal, depth - 1)) return true;
  }
  return false;
}

int iddfs(const VoxelGrid& g, const AgentPose& p, const PoseGoal& goal, int max_depth) {
  for (int d = 0; d <= max_depth; ++d) {
    if (dfs(g, p, goal, d)) return d;
  }
  return -1;
}

}  // namespace

TEST(Navigate, StraightLineAndTurn) {
  VoxelGrid g;
  const AgentPose start{{0, 0, 0}, 0, 0};
  auto path = navigate(g, start, [](const AgentPose& p) { return p.feet == Coord{3, 0, 0}; });
  ASSERT_TRUE(path);
  EXPECT_EQ(path->size(), 3u);

  path = navigate(g, start, [](const AgentPose& p) { return p.feet == Coord{0, 0, 0} && p.yaw == 2; });
  ASSERT_TRUE(path);
  EXPECT_EQ(path->size(), 2u);

  path = navigate(g, start, [](const AgentPose& p) { return p == AgentPose{{0, 0, 0}, 0, 0}; });
  ASSERT_TRUE(path);
  EXPECT_TRUE(path->empty());
}

TEST(Navigate, ClimbsAndEndsAtGoal) {
  VoxelGrid g;
  g.set({1, 0, 0}, Color::Blue);
  g.set({2, 0, 0}, Color::Blue);
  g.set({2, 1, 0}, Color::Blue);
  const AgentPose start{{0, 0, 0}, 0, 0};
  const PoseGoal goal = [](const AgentPose& p) { return p.feet == Coord{2, 2, 0}; };
  auto path = navigate(g, start, goal);
  ASSERT_TRUE(path);
  EXPECT_EQ(path->size(), 2u);
  EXPECT_TRUE(goal(run(g, start, *path)));
}

TEST(Navigate, EnclosedGoalIsUnreachable) {
  VoxelGrid g;
  for (int y = 0; y < 3; ++y) {
    g.set({4, y, 5}, Color::Red);
    g.set({6, y, 5}, Color::Red);
    g.set({5, y, 4}, Color::Red);
    g.set({5, y, 6}, Color::Red);
  }
  auto path = navigate(g, {{0, 0, 0}, 0, 0}, [](const AgentPose& p) { return p.feet == Coord{5, 0, 5}; });
  EXPECT_FALSE(path);
}

TEST(Navigate, MatchesIterativeDeepening) {
  std::mt19937_64 rng(17);
  const Dims dims{6, 4, 6};
  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    VoxelGrid g = test_support::random_grid(rng, {6, 2, 6}, 0.3);
    VoxelGrid world(dims);
    for (const auto& [c, color] : g.blocks()) {
      if (c.y == 0 || world.filled(c.below())) world.set(c, color);
    }
    const auto spawn = find_spawn(world);
    if (!spawn) continue;
    std::uniform_int_distribution<int> coord(0, 5);
    const Coord want{coord(rng), 0, coord(rng)};
    const PoseGoal goal = [&](const AgentPose& p) { return p.feet.x == want.x && p.feet.z == want.z; };
    const auto path = navigate(world, *spawn, goal);
    const int best = iddfs(world, *spawn, goal, 7);
    if (best < 0) {
      if (path) EXPECT_GT(path->size(), 7u);
      continue;
    }
    ASSERT_TRUE(path) << "trial " << trial;
    EXPECT_EQ(static_cast<int>(path->size()), best) << "trial " << trial;
    EXPECT_TRUE(goal(run(world, *spawn, *path)));
    ++checked;
  }
  EXPECT_GT(checked, 10);
}
