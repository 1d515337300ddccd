#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridcraft/env.hpp"
#include "gridcraft/policies.hpp"
#include "gridcraft/task_gen.hpp"

namespace gridcraft {

struct EpisodeOutcome {
  EpisodeRecord record;
  F1Result f1;
  bool stuck = false;  // the oracle found no vantage for some subtask
};

// Plans the task, runs `policy` until the episode ends and scores the final
// grid. Throws PlanError when no plan exists.
EpisodeOutcome run_episode(Policy& policy, const Task& task, const EnvConfig& config,
                           std::uint64_t seed);
EpisodeOutcome run_episode(Policy& policy, const Task& task, const BuildPlan& plan,
                           const EnvConfig& config, std::uint64_t seed);

// Fraction of single-subtask episodes that end with the subtask satisfied
// and DONE as the final action.
double evaluate_success_rate(Policy& policy, const std::vector<CurriculumItem>& curriculum,
                             const EnvConfig& config, std::uint64_t seed);

struct TaskScore {
  std::string id;
  std::vector<std::string> tags;
  F1Result f1;
  Termination termination = Termination::None;
  int steps = 0;
};

struct EvalReport {
  std::vector<TaskScore> tasks;
  // Mean F1 over tasks carrying each tag; absent when no task has it.
  std::map<std::string, double> per_tag;
  double all = 0.0;
  std::optional<double> success_rate;

  nlohmann::ordered_json to_json() const;
};

EvalReport evaluate_f1_dataset(Policy& policy, const std::vector<Task>& tasks,
                               const EnvConfig& config, std::uint64_t seed);

}  // namespace gridcraft
