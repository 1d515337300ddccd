#include "gridcraft/evaluation.hpp"

#include "gridcraft/error.hpp"
#include "gridcraft/format.hpp"
#include "gridcraft/task_io.hpp"

namespace gridcraft {

EpisodeOutcome run_episode(Policy& policy, const Task& task, const BuildPlan& plan,
                           const EnvConfig& config, std::uint64_t seed) {
  GridworldEnv env(config);
  Observation obs = env.reset(task, plan, seed);
  policy.begin_episode(seed);
  bool stuck = false;
  while (!env.done()) {
    obs = env.step(policy.act(obs)).observation;
    if (auto* oracle = dynamic_cast<OraclePolicy*>(&policy); oracle && oracle->stuck()) {
      stuck = true;
      // The oracle cannot make progress; without a step cap it would spin.
      if (config.step_limit == 0) break;
    }
  }
  EpisodeOutcome out{env.record(), f1_score(env.grid(), task.target), stuck};
  return out;
}

EpisodeOutcome run_episode(Policy& policy, const Task& task, const EnvConfig& config,
                           std::uint64_t seed) {
  return run_episode(policy, task, plan_subtasks(task.start, task.target), config, seed);
}

double evaluate_success_rate(Policy& policy, const std::vector<CurriculumItem>& curriculum,
                             const EnvConfig& config, std::uint64_t seed) {
  if (curriculum.empty()) return 0.0;
  EnvConfig ec = config;
  ec.end_when_plan_exhausted = true;
  std::size_t successes = 0;
  for (std::size_t i = 0; i < curriculum.size(); ++i) {
    const CurriculumItem& item = curriculum[i];
    Task task(item.start.dims());
    task.start = item.start;
    task.target = curriculum_target(item);
    const EpisodeOutcome out =
        run_episode(policy, task, curriculum_plan(item), ec, derive_seed(seed, i));
    const bool pressed_done =
        !out.record.steps.empty() && out.record.steps.back().action == Action::Done;
    if (out.record.termination == Termination::Complete && pressed_done &&
        item.subtask.satisfied_by(out.record.final_grid)) {
      ++successes;
    }
  }
  return static_cast<double>(successes) / static_cast<double>(curriculum.size());
}

nlohmann::ordered_json EvalReport::to_json() const {
  nlohmann::ordered_json j;
  nlohmann::ordered_json tags = nlohmann::ordered_json::object();
  for (std::string_view tag : kTaskTags) {
    auto it = per_tag.find(std::string(tag));
    if (it == per_tag.end()) {
      tags[std::string(tag)] = nullptr;
    } else {
      tags[std::string(tag)] = round_real(it->second);
    }
  }
  j["per_tag"] = std::move(tags);
  j["all"] = round_real(all);
  if (success_rate) j["success_rate"] = round_real(*success_rate);
  auto rows = nlohmann::ordered_json::array();
  for (const TaskScore& t : tasks) {
    nlohmann::ordered_json row;
    row["id"] = t.id;
    row["tags"] = t.tags;
    row["f1"] = round_real(t.f1.f1);
    row["precision"] = round_real(t.f1.precision);
    row["recall"] = round_real(t.f1.recall);
    row["termination"] = std::string(termination_name(t.termination));
    row["steps"] = t.steps;
    rows.push_back(std::move(row));
  }
  j["tasks"] = std::move(rows);
  return j;
}

EvalReport evaluate_f1_dataset(Policy& policy, const std::vector<Task>& tasks,
                               const EnvConfig& config, std::uint64_t seed) {
  EvalReport report;
  std::map<std::string, std::pair<double, int>> sums;
  double total = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& task = tasks[i];
    TaskScore score{task.id, task.tags, {}, Termination::None, 0};
    try {
      const EpisodeOutcome out = run_episode(policy, task, config, derive_seed(seed, i));
      score.f1 = out.f1;
      score.termination = out.record.termination;
      score.steps = static_cast<int>(out.record.steps.size());
    } catch (const PlanError&) {
      score.f1 = f1_score(task.start, task.target);
    }
    total += score.f1.f1;
    for (const std::string& tag : task.tags) {
      auto& [sum, count] = sums[tag];
      sum += score.f1.f1;
      ++count;
    }
    report.tasks.push_back(std::move(score));
  }
  for (const auto& [tag, entry] : sums) report.per_tag[tag] = entry.first / entry.second;
  report.all = tasks.empty() ? 0.0 : total / static_cast<double>(tasks.size());
  return report;
}

}  // namespace gridcraft
