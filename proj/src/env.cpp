#include "gridcraft/env.hpp"

#include <algorithm>
#include <cstdlib>

#include "gridcraft/error.hpp"
#include "gridcraft/format.hpp"

namespace gridcraft {

namespace {

constexpr std::array<std::string_view, kNumActions> kActionNames = {
    "NOOP",     "FORWARD",  "BACK",     "LEFT",     "RIGHT",    "JUMP",
    "TURN_LEFT", "TURN_RIGHT", "LOOK_UP", "LOOK_DOWN", "PLACE",  "BREAK",
    "SELECT_1", "SELECT_2", "SELECT_3", "SELECT_4", "SELECT_5", "SELECT_6",
    "DONE"};

const Coord kUp{0, 1, 0};

}  // namespace

std::string_view action_name(Action a) {
  const auto i = static_cast<std::size_t>(a);
  return i < kActionNames.size() ? kActionNames[i] : std::string_view{"?"};
}

std::optional<Action> action_from_name(std::string_view name) {
  for (int i = 0; i < kNumActions; ++i) {
    if (action_name(static_cast<Action>(i)) == name) return static_cast<Action>(i);
  }
  return std::nullopt;
}

Coord yaw_vector(int yaw) {
  switch (((yaw % 4) + 4) % 4) {
    case 0: return {1, 0, 0};
    case 1: return {0, 0, 1};
    case 2: return {-1, 0, 0};
    default: return {0, 0, -1};
  }
}

Coord AgentPose::forward() const { return yaw_vector(yaw); }
Coord AgentPose::right() const { return yaw_vector(yaw + 1); }

bool body_fits(const VoxelGrid& grid, Coord feet) {
  return grid.in_zone(feet) && grid.in_zone(feet.above()) && !grid.filled(feet) &&
         !grid.filled(feet.above());
}

Coord settle(const VoxelGrid& grid, Coord feet) {
  while (feet.y > 0 && !grid.filled(feet.below())) --feet.y;
  return feet;
}

bool is_supported_stand(const VoxelGrid& grid, Coord feet) {
  return body_fits(grid, feet) && (feet.y == 0 || grid.filled(feet.below()));
}

AgentPose apply_motion(const VoxelGrid& grid, const AgentPose& pose, Action action) {
  AgentPose next = pose;
  auto walk = [&](Coord delta) {
    Coord dest = pose.feet + delta;
    if (body_fits(grid, dest)) next.feet = settle(grid, dest);
  };
  switch (action) {
    case Action::Forward: walk(pose.forward()); break;
    case Action::Back: walk(-1 * pose.forward()); break;
    case Action::Left: walk(-1 * pose.right()); break;
    case Action::Right: walk(pose.right()); break;
    case Action::Jump: walk(pose.forward() + kUp); break;
    case Action::TurnLeft: next.yaw = (pose.yaw + 3) % 4; break;
    case Action::TurnRight: next.yaw = (pose.yaw + 1) % 4; break;
    case Action::LookUp: next.pitch = std::max(-2, pose.pitch - 1); break;
    case Action::LookDown: next.pitch = std::min(2, pose.pitch + 1); break;
    default: break;
  }
  return next;
}

std::optional<Coord> compute_target_cell(const VoxelGrid& grid, const AgentPose& pose,
                                         TargetMode mode) {
  const bool vertical = std::abs(pose.pitch) == 2;
  const Coord fwd = pose.forward();
  const Coord dir{vertical ? 0 : fwd.x, pose.pitch > 0 ? -1 : (pose.pitch < 0 ? 1 : 0),
                  vertical ? 0 : fwd.z};
  const Coord eye = pose.eye();

  auto accept = [&](std::optional<Coord> cell) -> std::optional<Coord> {
    if (!cell || *cell == pose.head()) return std::nullopt;
    if (*cell == pose.feet) {
      const Coord above_head = pose.head().above();
      if (pose.pitch != 2 || !grid.in_zone(above_head) || grid.filled(above_head)) {
        return std::nullopt;
      }
    }
    return cell;
  };

  std::optional<Coord> previous;
  std::optional<Coord> resting;
  for (int k = 1; k <= kReach; ++k) {
    const Coord c = eye + k * dir;
    if (c.y < 0) {
      if (mode == TargetMode::Break) return std::nullopt;
      return accept(previous);
    }
    if (!grid.in_zone(c)) break;
    if (grid.filled(c)) {
      if (mode == TargetMode::Break) return c;
      return accept(previous);
    }
    previous = c;
    if (!resting && (c.y == 0 || grid.filled(c.below()))) resting = c;
  }
  if (mode == TargetMode::Break) return std::nullopt;
  return accept(resting);
}

bool is_structure_complete(const VoxelGrid& grid, const VoxelGrid& target) {
  require_same_dims(grid, target, "is_structure_complete");
  return grid == target;
}

std::optional<AgentPose> find_spawn(const VoxelGrid& grid) {
  const Dims& d = grid.dims();
  for (int ring = 0; ring <= d.x + d.z - 2; ++ring) {
    for (int x = 0; x <= ring && x < d.x; ++x) {
      const int z = ring - x;
      if (z >= d.z) continue;
      for (int y = 0; y < d.y; ++y) {
        if (is_supported_stand(grid, {x, y, z})) return AgentPose{{x, y, z}, 0, 0};
      }
    }
  }
  return std::nullopt;
}

int Observation::subtask_value() const {
  if (!subtask) return 0;
  return subtask->kind == SubtaskKind::Place ? color_index(subtask->color) : -1;
}

std::vector<std::int8_t> Observation::subtask_voxel() const {
  const Dims& d = grid.dims();
  std::vector<std::int8_t> out(d.volume(), 0);
  if (subtask && grid.in_zone(subtask->pos)) {
    const Coord p = subtask->pos;
    out[(static_cast<std::size_t>(p.y) * d.x + p.x) * d.z + p.z] =
        static_cast<std::int8_t>(subtask_value());
  }
  return out;
}

std::string_view termination_name(Termination t) {
  switch (t) {
    case Termination::Complete: return "complete";
    case Termination::StepLimit: return "step_limit";
    default: return "running";
  }
}

nlohmann::ordered_json EpisodeRecord::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["task"] = task_id;
  const Dims& d = final_grid.dims();
  j["dims"] = {d.x, d.y, d.z};
  auto actions = nlohmann::ordered_json::array();
  auto rewards = nlohmann::ordered_json::array();
  for (const StepRecord& s : steps) {
    actions.push_back(std::string(action_name(s.action)));
    rewards.push_back(round_real(s.reward));
  }
  j["actions"] = std::move(actions);
  j["rewards"] = std::move(rewards);
  j["termination"] = std::string(termination_name(termination));
  j["final_blocks"] = blocks_to_json(final_grid);
  j["f1"] = round_real(f1);
  return j;
}

EpisodeRecord EpisodeRecord::from_json(const nlohmann::json& j) {
  EpisodeRecord r;
  r.seed = j.at("seed").get<std::uint64_t>();
  r.task_id = j.value("task", std::string{});
  Dims dims = kDefaultDims;
  if (j.contains("dims")) {
    const auto& d = j.at("dims");
    dims = {d.at(0).get<int>(), d.at(1).get<int>(), d.at(2).get<int>()};
  }
  r.final_grid = VoxelGrid(dims);
  blocks_from_json(j.at("final_blocks"), r.final_grid, "final_blocks");
  const auto& actions = j.at("actions");
  const auto& rewards = j.at("rewards");
  if (actions.size() != rewards.size()) throw ConfigError("actions and rewards differ in length");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    auto a = action_from_name(actions[i].get<std::string>());
    if (!a) throw ConfigError("unknown action '" + actions[i].get<std::string>() + "'");
    r.steps.push_back({*a, rewards[i].get<double>(), i + 1 == actions.size()});
  }
  const std::string term = j.at("termination").get<std::string>();
  r.termination = term == "complete"     ? Termination::Complete
                  : term == "step_limit" ? Termination::StepLimit
                                         : Termination::None;
  r.f1 = j.value("f1", 0.0);
  return r;
}

GridworldEnv::GridworldEnv(EnvConfig config) : config_(std::move(config)) {}

Observation GridworldEnv::reset(const VoxelGrid& target, const VoxelGrid& start, BuildPlan plan,
                                std::uint64_t seed, std::string task_id) {
  if (target.dims() != start.dims()) throw EpisodeError("start and target dims differ");
  const ValidationReport report = validate_plan(start, target, plan);
  if (!report.ok()) {
    std::string why = report.violations.empty()
                          ? std::string("plan does not produce the target")
                          : "subtask " + std::to_string(report.violations.front().index) + ": " +
                                report.violations.front().message;
    throw EpisodeError("invalid plan: " + why);
  }
  target_ = target;
  grid_ = start;
  plan_ = std::move(plan);
  subtask_index_ = 0;
  selected_ = Color::Blue;
  steps_used_ = 0;
  termination_ = Termination::None;
  rng_.seed(seed);
  inventory_ = config_.finite_inventory ? config_.initial_inventory : std::array<int, 6>{};

  std::optional<AgentPose> spawn;
  if (config_.random_spawn) {
    std::vector<Coord> stands;
    const Dims& d = grid_.dims();
    for (int x = 0; x < d.x; ++x)
      for (int z = 0; z < d.z; ++z)
        for (int y = 0; y < d.y; ++y)
          if (is_supported_stand(grid_, {x, y, z})) stands.push_back({x, y, z});
    if (!stands.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, stands.size() - 1);
      std::uniform_int_distribution<int> yaw(0, 3);
      const Coord feet = stands[pick(rng_)];
      spawn = AgentPose{feet, yaw(rng_), 0};
    }
  } else {
    spawn = find_spawn(grid_);
  }
  if (!spawn) throw EpisodeError("no free spawn cell in the build zone");
  pose_ = *spawn;

  record_ = EpisodeRecord{};
  record_.seed = seed;
  record_.task_id = std::move(task_id);
  record_.final_grid = grid_;
  update_termination();
  record_.termination = termination_;
  record_.f1 = f1_score(grid_, target_).f1;
  return observe();
}

Observation GridworldEnv::reset(const Task& task, BuildPlan plan, std::uint64_t seed) {
  return reset(task.target, task.start, std::move(plan), seed, task.id);
}

const Subtask* GridworldEnv::current_subtask() const noexcept {
  return subtask_index_ < plan_.size() ? &plan_.subtasks[subtask_index_] : nullptr;
}

Observation GridworldEnv::observe() const {
  Observation obs{grid_, pose_, inventory_, config_.finite_inventory, selected_, std::nullopt,
                  steps_used_};
  if (const Subtask* s = current_subtask()) obs.subtask = *s;
  return obs;
}

void GridworldEnv::update_termination() {
  const bool plan_done = subtask_index_ >= plan_.size();
  if (plan_done && (config_.end_when_plan_exhausted || grid_ == target_)) {
    termination_ = Termination::Complete;
  } else if (config_.step_limit > 0 && steps_used_ >= config_.step_limit) {
    termination_ = Termination::StepLimit;
  }
}

StepResult GridworldEnv::step(Action action) {
  if (done()) throw EpisodeError("step() called on a finished episode");
  StepResult result;
  StepInfo& info = result.info;
  const Subtask* subtask = current_subtask();
  double reward = 0.0;

  switch (action) {
    case Action::Place: {
      auto cell = compute_target_cell(grid_, pose_, TargetMode::Place);
      const std::size_t slot = static_cast<std::size_t>(color_index(selected_)) - 1;
      if (!cell || (config_.finite_inventory && inventory_[slot] <= 0)) break;
      if (*cell == pose_.feet) {
        pose_.feet = pose_.feet.above();
        info.under_feet = true;
      }
      grid_.set(*cell, selected_);
      if (config_.finite_inventory) --inventory_[slot];
      info.acted_cell = cell;
      if (subtask && subtask->kind == SubtaskKind::Place) {
        // Only blocks of the wanted colour are scored.
        if (selected_ == subtask->color) {
          reward += placement_reward(*cell, *subtask, info.under_feet, config_.reward);
        }
      } else if (subtask) {
        reward += reversal_reward(*cell, *subtask, false, config_.reward);
      }
      break;
    }
    case Action::Break: {
      auto cell = compute_target_cell(grid_, pose_, TargetMode::Break);
      if (!cell) break;
      const Color broken = grid_.at(*cell);
      grid_.set(*cell, Color::Empty);
      if (config_.finite_inventory) ++inventory_[static_cast<std::size_t>(color_index(broken)) - 1];
      info.acted_cell = cell;
      if (subtask && subtask->kind == SubtaskKind::Break) {
        reward += placement_reward(*cell, *subtask, false, config_.reward);
      } else if (subtask && broken == subtask->color) {
        reward += reversal_reward(*cell, *subtask, *cell == pose_.feet.below(), config_.reward);
      }
      break;
    }
    case Action::Select1:
    case Action::Select2:
    case Action::Select3:
    case Action::Select4:
    case Action::Select5:
    case Action::Select6:
      selected_ = kBlockColors[static_cast<std::size_t>(action) -
                               static_cast<std::size_t>(Action::Select1)];
      break;
    case Action::Done: {
      const bool complete = subtask && subtask->satisfied_by(grid_);
      reward += done_action_reward(complete, config_.reward);
      if (complete) {
        ++subtask_index_;
        info.subtask_advanced = true;
      }
      break;
    }
    default:
      pose_ = apply_motion(grid_, pose_, action);
      break;
  }
  pose_.feet = settle(grid_, pose_.feet);

  ++steps_used_;
  update_termination();
  info.termination = termination_;
  info.subtask_index = subtask_index_;
  result.reward = reward;
  result.done = done();
  result.observation = observe();

  record_.steps.push_back({action, reward, result.done});
  record_.final_grid = grid_;
  record_.termination = termination_;
  record_.f1 = f1_score(grid_, target_).f1;
  return result;
}

EpisodeRecord replay(const EnvConfig& config, const Task& task, const BuildPlan& plan,
                     std::uint64_t seed, const std::vector<Action>& actions) {
  GridworldEnv env(config);
  env.reset(task, plan, seed);
  for (Action a : actions) {
    if (env.done()) break;
    env.step(a);
  }
  return env.record();
}

std::string render_ascii(const VoxelGrid& grid, std::optional<Coord> agent_feet) {
  const Dims& d = grid.dims();
  std::string out;
  for (int y = d.y - 1; y >= 0; --y) {
    out += "y=" + std::to_string(y) + "\n";
    for (int z = 0; z < d.z; ++z) {
      for (int x = 0; x < d.x; ++x) {
        const Coord c{x, y, z};
        out += (agent_feet && *agent_feet == c) ? 'A' : color_glyph(grid.at(c));
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace gridcraft
