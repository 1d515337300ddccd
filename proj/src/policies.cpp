#include "gridcraft/policies.hpp"

#include <cstdlib>

#include "gridcraft/navigation.hpp"

namespace gridcraft {

namespace {

constexpr int kMaxLift = 3;

// Pitch that reaches the subtask cell from `p`, nearest `current`.
std::optional<int> aim(const VoxelGrid& grid, const AgentPose& p, const Subtask& subtask,
                       int current) {
  const TargetMode mode =
      subtask.kind == SubtaskKind::Place ? TargetMode::Place : TargetMode::Break;
  std::optional<int> best;
  for (int pitch = -2; pitch <= 2; ++pitch) {
    AgentPose probe = p;
    probe.pitch = pitch;
    if (compute_target_cell(grid, probe, mode) != subtask.pos) continue;
    if (!best || std::abs(pitch - current) < std::abs(*best - current)) best = pitch;
  }
  return best;
}

void look(std::vector<Action>& out, int from, int to) {
  for (int p = from; p < to; ++p) out.push_back(Action::LookDown);
  for (int p = from; p > to; --p) out.push_back(Action::LookUp);
}

void turn(std::vector<Action>& out, int from, int to) {
  const int steps = ((to - from) % 4 + 4) % 4;
  if (steps == 3) {
    out.push_back(Action::TurnLeft);
  } else {
    for (int i = 0; i < steps; ++i) out.push_back(Action::TurnRight);
  }
}

AgentPose walk(const VoxelGrid& grid, AgentPose pose, const std::vector<Action>& path) {
  for (Action a : path) pose = apply_motion(grid, pose, a);
  return pose;
}

// Grid with a pillar of `lift` helper blocks under `feet`, if the agent can
// raise itself that far there without touching the subtask cell.
std::optional<VoxelGrid> pillar(const VoxelGrid& grid, Coord feet, int lift, Coord keep) {
  for (int i = 0; i <= lift + 1; ++i) {
    const Coord c{feet.x, feet.y + i, feet.z};
    if (!grid.in_zone(c) || grid.filled(c) || c == keep) return std::nullopt;
  }
  // Each PLACE needs a free cell above the head at that moment.
  if (!grid.in_zone({feet.x, feet.y + lift + 1, feet.z})) return std::nullopt;
  VoxelGrid raised = grid;
  for (int i = 0; i < lift; ++i) raised.set({feet.x, feet.y + i, feet.z}, Color::Blue);
  return raised;
}

// Yaw from which the raised agent at `feet` can act on the subtask cell.
std::optional<int> raised_yaw(const VoxelGrid& raised, Coord feet, int yaw,
                              const Subtask& subtask) {
  for (int turn_count : {0, 1, 3, 2}) {
    const AgentPose probe{feet, (yaw + turn_count) % 4, 0};
    if (aim(raised, probe, subtask, 2)) return probe.yaw;
  }
  return std::nullopt;
}

}  // namespace

std::optional<SubtaskScript> plan_subtask_actions(const VoxelGrid& grid, const AgentPose& pose,
                                                  const Subtask& subtask) {
  const Action act = subtask.kind == SubtaskKind::Place ? Action::Place : Action::Break;
  SubtaskScript script;
  if (auto path = navigate(grid, pose, [&](const AgentPose& p) {
        return aim(grid, p, subtask, pose.pitch).has_value();
      })) {
    const AgentPose end = walk(grid, pose, *path);
    script.approach = std::move(*path);
    look(script.approach, end.pitch, *aim(grid, end, subtask, end.pitch));
    script.approach.push_back(act);
    return script;
  }

  for (int lift = 1; lift <= kMaxLift; ++lift) {
    auto usable = [&](const AgentPose& p) {
      const auto raised = pillar(grid, p.feet, lift, subtask.pos);
      if (!raised) return false;
      const Coord top{p.feet.x, p.feet.y + lift, p.feet.z};
      return raised_yaw(*raised, top, p.yaw, subtask).has_value();
    };
    auto path = navigate(grid, pose, usable);
    if (!path) continue;
    const AgentPose end = walk(grid, pose, *path);
    const VoxelGrid raised = *pillar(grid, end.feet, lift, subtask.pos);
    const Coord top{end.feet.x, end.feet.y + lift, end.feet.z};
    const int yaw = *raised_yaw(raised, top, end.yaw, subtask);
    const int pitch = *aim(raised, AgentPose{top, yaw, 0}, subtask, 2);

    script.approach = std::move(*path);
    look(script.approach, end.pitch, 2);
    for (int i = 0; i < lift; ++i) script.approach.push_back(Action::Place);
    turn(script.approach, end.yaw, yaw);
    look(script.approach, 2, pitch);
    script.approach.push_back(act);

    look(script.cleanup, pitch, 2);
    for (int i = 0; i < lift; ++i) script.cleanup.push_back(Action::Break);
    return script;
  }
  return std::nullopt;
}

void OraclePolicy::begin_episode(std::uint64_t) {
  queue_.clear();
  cleanup_.clear();
  planned_for_.reset();
  stuck_ = false;
}

Action OraclePolicy::act(const Observation& obs) {
  if (!obs.subtask) return Action::Noop;
  const Subtask& s = *obs.subtask;
  if (s.satisfied_by(obs.grid)) {
    queue_.clear();
    if (!cleanup_.empty() && planned_for_ == s) {
      const Action next = cleanup_.front();
      cleanup_.pop_front();
      return next;
    }
    cleanup_.clear();
    planned_for_.reset();
    return Action::Done;
  }
  if (s.kind == SubtaskKind::Place && obs.selected != s.color) return select_action(s.color);
  if (queue_.empty() || planned_for_ != s) {
    queue_.clear();
    cleanup_.clear();
    auto script = plan_subtask_actions(obs.grid, obs.pose, s);
    if (!script) {
      stuck_ = true;
      return Action::Noop;
    }
    queue_.assign(script->approach.begin(), script->approach.end());
    cleanup_.assign(script->cleanup.begin(), script->cleanup.end());
    planned_for_ = s;
  }
  const Action next = queue_.front();
  queue_.pop_front();
  return next;
}

Action RandomPolicy::act(const Observation&) {
  return static_cast<Action>(std::uniform_int_distribution<int>(0, kNumActions - 1)(rng_));
}

}  // namespace gridcraft
