#include "gridcraft/navigation.hpp"

#include <array>
#include <deque>

namespace gridcraft {

namespace {

constexpr std::array<Action, 7> kMoves = {Action::Forward,  Action::Back,     Action::Left,
                                          Action::Right,    Action::Jump,     Action::TurnLeft,
                                          Action::TurnRight};

}  // namespace

std::optional<std::vector<Action>> navigate(const VoxelGrid& grid, const AgentPose& from,
                                            const PoseGoal& goal) {
  const Dims& d = grid.dims();
  if (!grid.in_zone(from.feet)) return std::nullopt;
  auto key = [&](const AgentPose& p) {
    return ((static_cast<std::size_t>(p.feet.y) * d.x + p.feet.x) * d.z + p.feet.z) * 4 +
           static_cast<std::size_t>(p.yaw);
  };
  struct Parent {
    std::size_t prev;
    Action action;
  };
  constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
  std::vector<Parent> parent(d.volume() * 4, {kUnseen, Action::Noop});
  std::deque<AgentPose> frontier;

  const std::size_t start = key(from);
  parent[start] = {start, Action::Noop};
  frontier.push_back(from);
  while (!frontier.empty()) {
    const AgentPose pose = frontier.front();
    frontier.pop_front();
    if (goal(pose)) {
      std::vector<Action> path;
      for (std::size_t k = key(pose); k != start; k = parent[k].prev) {
        path.push_back(parent[k].action);
      }
      return std::vector<Action>(path.rbegin(), path.rend());
    }
    const std::size_t here = key(pose);
    for (Action a : kMoves) {
      const AgentPose next = apply_motion(grid, pose, a);
      const std::size_t k = key(next);
      if (parent[k].prev != kUnseen) continue;
      parent[k] = {here, a};
      frontier.push_back(next);
    }
  }
  return std::nullopt;
}

}  // namespace gridcraft
