#include "gridcraft/reward.hpp"

#include "gridcraft/error.hpp"
#include "gridcraft/task_io.hpp"

namespace gridcraft {

RewardConfig reward_config_from_json(const nlohmann::json& j) {
  RewardConfig cfg;
  if (!j.is_object()) throw ConfigError("reward config must be a JSON object");
  cfg.under_feet_bonus = j.value("under_feet_bonus", cfg.under_feet_bonus);
  cfg.done_success = j.value("done_success", cfg.done_success);
  cfg.done_failure = j.value("done_failure", cfg.done_failure);
  cfg.table.tail_slope = j.value("tail_slope", cfg.table.tail_slope);
  if (j.contains("table")) {
    const auto& t = j.at("table");
    if (!t.is_array() || t.size() != cfg.table.anchors.size()) {
      throw ConfigError("reward table must list rewards for distances 0..5");
    }
    for (std::size_t i = 0; i < cfg.table.anchors.size(); ++i) cfg.table.anchors[i] = t[i].get<double>();
  }
  return cfg;
}

RewardConfig load_reward_config(const std::filesystem::path& path) {
  try {
    return reward_config_from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

double placement_reward(Coord acted, const Subtask& subtask, bool under_feet,
                        const RewardConfig& config) {
  const int d = manhattan_distance(acted, subtask.pos);
  double r = config.table(d);
  if (under_feet && d == 0) r += config.under_feet_bonus;
  return r;
}

double reversal_reward(Coord acted, const Subtask& subtask, bool under_feet,
                       const RewardConfig& config) {
  return -placement_reward(acted, subtask, under_feet, config);
}

double done_action_reward(bool subtask_complete, const RewardConfig& config) {
  return subtask_complete ? config.done_success : config.done_failure;
}

}  // namespace gridcraft
