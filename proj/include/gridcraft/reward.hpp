#pragma once

#include <array>
#include <filesystem>

#include <nlohmann/json.hpp>

#include "gridcraft/planner.hpp"
#include "gridcraft/voxel.hpp"

namespace gridcraft {

// Reward by Manhattan distance between an acted-on cell and the subtask
// cell. Distances 0..5 are tabulated; beyond that the reward falls
// linearly: -tail_slope * (d - 5).
struct RewardTable {
  std::array<double, 6> anchors = {1.0, 0.25, 0.05, 0.001, -0.0001, -0.001};
  double tail_slope = 0.01;

  double operator()(int distance) const {
    if (distance < static_cast<int>(anchors.size())) return anchors[distance];
    return -tail_slope * (distance - 5);
  }
};

struct RewardConfig {
  double under_feet_bonus = 0.5;
  double done_success = 1.0;
  double done_failure = -0.05;
  RewardTable table;
};

// Missing keys keep their defaults.
RewardConfig reward_config_from_json(const nlohmann::json& j);
RewardConfig load_reward_config(const std::filesystem::path& path);

// Table value at the distance from `acted` to the subtask cell, plus the
// under-feet bonus for an exact hit. Placements are scored against Place
// subtasks and breaks against Break subtasks.
double placement_reward(Coord acted, const Subtask& subtask, bool under_feet,
                        const RewardConfig& config = {});

// An action of the opposite kind (a break during a Place subtask, or a
// placement during a Break subtask) takes back what the matching action at
// that cell would have earned, so place/break cycles net zero. `under_feet`
// marks a broken block the agent was standing on.
double reversal_reward(Coord acted, const Subtask& subtask, bool under_feet,
                       const RewardConfig& config = {});

double done_action_reward(bool subtask_complete, const RewardConfig& config = {});

}  // namespace gridcraft
