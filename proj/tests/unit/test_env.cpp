#include <gtest/gtest.h>

#include <random>

#include "gridcraft/env.hpp"
#include "gridcraft/error.hpp"
#include "gridcraft/policies.hpp"
#include "gridcraft/task_gen.hpp"
#include "support.hpp"

using namespace gridcraft;

namespace {

Task single_block_task() {
  Task t;
  t.id = "one";
  t.target.set({5, 0, 5}, Color::Blue);
  return t;
}

}  // namespace

TEST(Actions, NamesRoundTrip) {
  for (int i = 0; i < kNumActions; ++i) {
    const Action a = static_cast<Action>(i);
    EXPECT_EQ(action_from_name(action_name(a)), a);
  }
  EXPECT_EQ(action_name(Action::Done), "DONE");
  EXPECT_EQ(action_name(Action::Select1), "SELECT_1");
  EXPECT_FALSE(action_from_name("FLY"));
  EXPECT_EQ(select_action(Color::Yellow), Action::Select6);
}

TEST(Targeting, Examples) {
  VoxelGrid g;
  AgentPose pose{{0, 0, 0}, 0, 0};

  // Straight ahead in open air there is nothing to place against.
  EXPECT_FALSE(compute_target_cell(g, pose, TargetMode::Place));
  EXPECT_FALSE(compute_target_cell(g, pose, TargetMode::Break));

  pose.pitch = 1;
  EXPECT_EQ(compute_target_cell(g, pose, TargetMode::Place), (Coord{1, 0, 0}));

  pose.pitch = -2;
  g.set({0, 2, 0}, Color::Red);
  EXPECT_EQ(compute_target_cell(g, pose, TargetMode::Break), (Coord{0, 2, 0}));
  // Placement would land in the head cell.
  EXPECT_FALSE(compute_target_cell(g, pose, TargetMode::Place));

  // Looking down with headroom: the feet cell, lifting the agent.
  g = VoxelGrid();
  pose.pitch = 2;
  EXPECT_EQ(compute_target_cell(g, pose, TargetMode::Place), (Coord{0, 0, 0}));
  g.set({0, 2, 0}, Color::Red);
  EXPECT_FALSE(compute_target_cell(g, pose, TargetMode::Place));

  // A block three ahead is in reach; four is not.
  g = VoxelGrid();
  pose = AgentPose{{0, 0, 0}, 0, 0};
  g.set({3, 1, 0}, Color::Green);
  EXPECT_EQ(compute_target_cell(g, pose, TargetMode::Break), (Coord{3, 1, 0}));
  EXPECT_EQ(compute_target_cell(g, pose, TargetMode::Place), (Coord{2, 1, 0}));
  g = VoxelGrid();
  g.set({4, 1, 0}, Color::Green);
  EXPECT_FALSE(compute_target_cell(g, pose, TargetMode::Break));
}

TEST(Motion, GravityAndClimbing) {
  VoxelGrid g;
  EXPECT_EQ(settle(g, {2, 4, 2}), (Coord{2, 0, 2}));
  g.set({1, 0, 0}, Color::Blue);
  AgentPose pose{{0, 0, 0}, 0, 0};
  // Walking into a block is blocked; JUMP climbs one.
  EXPECT_EQ(apply_motion(g, pose, Action::Forward).feet, (Coord{0, 0, 0}));
  pose = apply_motion(g, pose, Action::Jump);
  EXPECT_EQ(pose.feet, (Coord{1, 1, 0}));
  // Walking off the edge drops to the ground.
  EXPECT_EQ(apply_motion(g, pose, Action::Forward).feet, (Coord{2, 0, 0}));
  EXPECT_EQ(apply_motion(g, pose, Action::TurnLeft).yaw, 3);
  pose.pitch = 2;
  EXPECT_EQ(apply_motion(g, pose, Action::LookDown).pitch, 2);
}

TEST(Env, NoopsHitTheStepLimit) {
  GridworldEnv env;
  const Task task = single_block_task();
  env.reset(task, plan_subtasks(task.start, task.target), 1);
  StepResult r;
  for (int i = 0; i < 500; ++i) {
    ASSERT_FALSE(env.done());
    r = env.step(Action::Noop);
  }
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.info.termination, Termination::StepLimit);
  EXPECT_EQ(env.steps_used(), 500);
  EXPECT_THROW(env.step(Action::Noop), EpisodeError);
}

TEST(Env, BreakingTheSupportDropsTheAgent) {
  Task task;
  task.start.set({1, 0, 0}, Color::Blue);
  EnvConfig cfg;
  cfg.step_limit = 0;
  GridworldEnv env(cfg);
  env.reset(task, plan_subtasks(task.start, task.target), 1);
  EXPECT_EQ(env.pose().feet, (Coord{0, 0, 0}));
  env.step(Action::Jump);
  EXPECT_EQ(env.pose().feet, (Coord{1, 1, 0}));
  env.step(Action::LookDown);
  env.step(Action::LookDown);
  const StepResult r = env.step(Action::Break);
  EXPECT_EQ(r.info.acted_cell, (Coord{1, 0, 0}));
  EXPECT_EQ(env.pose().feet, (Coord{1, 0, 0}));
  EXPECT_EQ(r.reward, 1.0);
  env.step(Action::Done);
  EXPECT_EQ(env.termination(), Termination::Complete);
}

TEST(Env, PillarLiftsTheAgent) {
  Task task;
  task.target.set({0, 0, 0}, Color::Green);
  GridworldEnv env;
  env.reset(task, plan_subtasks(task.start, task.target), 1);
  env.step(Action::Select2);
  env.step(Action::LookDown);
  env.step(Action::LookDown);
  const StepResult r = env.step(Action::Place);
  EXPECT_TRUE(r.info.under_feet);
  EXPECT_EQ(env.pose().feet, (Coord{0, 1, 0}));
  EXPECT_EQ(r.reward, 1.5);
}

TEST(Env, DoneAdvancesOnlyWhenSatisfied) {
  GridworldEnv env;
  const Task task = single_block_task();
  env.reset(task, plan_subtasks(task.start, task.target), 1);
  StepResult r = env.step(Action::Done);
  EXPECT_EQ(r.reward, -0.05);
  EXPECT_EQ(r.info.subtask_index, 0u);

  // Walk to (3,0,5) facing +x and place two ahead at ground level.
  AgentPose pose = env.pose();
  ASSERT_EQ(pose.feet, (Coord{0, 0, 0}));
  env.step(Action::TurnRight);
  for (int i = 0; i < 5; ++i) env.step(Action::Forward);
  env.step(Action::TurnLeft);
  for (int i = 0; i < 3; ++i) env.step(Action::Forward);
  ASSERT_EQ(env.pose().feet, (Coord{3, 0, 5}));
  env.step(Action::LookDown);
  // Pitch 1 from (3,0,5) reaches (4,0,5); step once more.
  env.step(Action::Forward);
  r = env.step(Action::Place);
  EXPECT_EQ(r.info.acted_cell, (Coord{5, 0, 5}));
  EXPECT_EQ(r.reward, 1.0);
  r = env.step(Action::Done);
  EXPECT_EQ(r.reward, 1.0);
  EXPECT_TRUE(r.info.subtask_advanced);
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.info.termination, Termination::Complete);
  EXPECT_EQ(env.record().f1, 1.0);
}

TEST(Env, WrongColourEarnsNothingAndCanBeUndone) {
  GridworldEnv env;
  const Task task = single_block_task();
  env.reset(task, plan_subtasks(task.start, task.target), 1);
  env.step(Action::Select3);
  env.step(Action::LookDown);
  StepResult r = env.step(Action::Place);
  ASSERT_EQ(r.info.acted_cell, (Coord{1, 0, 0}));
  EXPECT_EQ(r.reward, 0.0);
  r = env.step(Action::Break);
  EXPECT_EQ(r.reward, 0.0);

  env.step(Action::Select1);
  const double placed = env.step(Action::Place).reward;
  const double broken = env.step(Action::Break).reward;
  EXPECT_EQ(placed, placement_reward({1, 0, 0}, *env.current_subtask(), false));
  EXPECT_EQ(placed + broken, 0.0);
}

TEST(Env, ResetErrors) {
  GridworldEnv env;
  Task task = single_block_task();
  EXPECT_THROW(env.reset(task.target, VoxelGrid({3, 3, 3}), BuildPlan{}, 1), EpisodeError);
  // The plan must produce the target.
  EXPECT_THROW(env.reset(task, BuildPlan{}, 1), EpisodeError);
  Task full({1, 2, 1});
  full.start.set({0, 0, 0}, Color::Red);
  full.start.set({0, 1, 0}, Color::Red);
  full.target = full.start;
  EXPECT_THROW(env.reset(full, BuildPlan{}, 1), EpisodeError);
}

TEST(Env, EmptyPlanCompletesAtReset) {
  GridworldEnv env;
  Task task;
  env.reset(task, BuildPlan{}, 1);
  EXPECT_EQ(env.termination(), Termination::Complete);
}

TEST(Env, ObservationSubtaskTensor) {
  GridworldEnv env;
  Task task;
  task.start.set({2, 0, 2}, Color::Red);
  const Observation obs = env.reset(task, plan_subtasks(task.start, task.target), 1);
  EXPECT_EQ(obs.subtask_value(), -1);
  const auto vox = obs.subtask_voxel();
  EXPECT_EQ(vox.size(), 11u * 9u * 11u);
  int nonzero = 0;
  for (auto v : vox) nonzero += v != 0;
  EXPECT_EQ(nonzero, 1);
  EXPECT_EQ(vox[(0 * 11 + 2) * 11 + 2], -1);
}

// Random walks keep the agent inside the zone, out of blocks and supported,
// and conserve blocks when the inventory is finite.
TEST(Env, RandomPolicyInvariants) {
  EnvConfig cfg;
  cfg.finite_inventory = true;
  cfg.random_spawn = true;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GenParams gp;
    gp.seed = seed;
    gp.flying_fraction = 0.5;
    gp.start_mode = StartMode::PartialWithStrays;
    const Task task = generate_task(gp);
    GridworldEnv env(cfg);
    RandomPolicy policy;
    policy.begin_episode(seed);
    Observation obs = env.reset(task, plan_subtasks(task.start, task.target), seed);
    const std::size_t total = task.start.count_filled() + 6 * 20;
    while (!env.done()) {
      obs = env.step(policy.act(obs)).observation;
      const Coord feet = env.pose().feet;
      ASSERT_TRUE(body_fits(env.grid(), feet));
      ASSERT_TRUE(feet.y == 0 || env.grid().filled(feet.below()));
      std::size_t held = 0;
      for (int n : env.inventory()) {
        ASSERT_GE(n, 0);
        held += static_cast<std::size_t>(n);
      }
      ASSERT_EQ(held + env.grid().count_filled(), total);
    }
  }
}

TEST(Env, ReplayIsDeterministic) {
  GenParams gp;
  gp.seed = 9;
  gp.flying_fraction = 1.0;
  const Task task = generate_task(gp);
  const BuildPlan plan = plan_subtasks(task.start, task.target);
  EnvConfig cfg;
  cfg.random_spawn = true;
  GridworldEnv env(cfg);
  RandomPolicy policy;
  policy.begin_episode(3);
  Observation obs = env.reset(task, plan, 3);
  std::vector<Action> actions;
  while (!env.done()) {
    actions.push_back(policy.act(obs));
    obs = env.step(actions.back()).observation;
  }
  const EpisodeRecord again = replay(cfg, task, plan, 3, actions);
  EXPECT_EQ(again.to_json().dump(), env.record().to_json().dump());
  const EpisodeRecord parsed = EpisodeRecord::from_json(nlohmann::json::parse(again.to_json().dump()));
  EXPECT_EQ(parsed.to_json().dump(), again.to_json().dump());
}

TEST(Render, LayersTopDown) {
  VoxelGrid g({3, 2, 2});
  g.set({1, 0, 1}, Color::Orange);
  EXPECT_EQ(render_ascii(g, Coord{0, 1, 0}), "y=1\nA..\n...\ny=0\n...\n.o.\n");
}
