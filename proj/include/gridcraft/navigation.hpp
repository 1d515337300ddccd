#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "gridcraft/env.hpp"

namespace gridcraft {

using PoseGoal = std::function<bool(const AgentPose&)>;

// Breadth-first search over (feet cell, yaw) with the walking actions and
// turns. Every move settles under gravity, so drops of any height are
// edges while climbing happens one JUMP at a time. Pitch is carried over
// from `from` unchanged. Returns a shortest action sequence ending in a pose
// that satisfies `goal`, or nullopt if none is reachable.
std::optional<std::vector<Action>> navigate(const VoxelGrid& grid, const AgentPose& from,
                                            const PoseGoal& goal);

}  // namespace gridcraft
