#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridcraft/planner.hpp"
#include "gridcraft/reward.hpp"
#include "gridcraft/task_io.hpp"
#include "gridcraft/voxel.hpp"

namespace gridcraft {

enum class Action : std::uint8_t {
  Noop,
  Forward,
  Back,
  Left,
  Right,
  Jump,
  TurnLeft,
  TurnRight,
  LookUp,
  LookDown,
  Place,
  Break,
  Select1,
  Select2,
  Select3,
  Select4,
  Select5,
  Select6,
  Done,
};

// Movement, camera, place/break and the six colour selections, plus DONE.
inline constexpr int kNumBaseActions = 18;
inline constexpr int kNumActions = kNumBaseActions + 1;
inline constexpr int kReach = 3;
inline constexpr int kDefaultStepLimit = 500;

std::string_view action_name(Action a);
std::optional<Action> action_from_name(std::string_view name);
inline Action select_action(Color c) {
  return static_cast<Action>(static_cast<int>(Action::Select1) + color_index(c) - 1);
}

// Cell-aligned embodied pose. The body fills `feet` and the cell above it;
// the eye sits in the upper cell.
struct AgentPose {
  Coord feet;
  int yaw = 0;    // quarter turns: 0 = +x, 1 = +z, 2 = -x, 3 = -z
  int pitch = 0;  // 45 degree steps in [-2, 2]; positive looks down

  Coord head() const { return feet.above(); }
  Coord eye() const { return head(); }
  Coord forward() const;
  Coord right() const;

  friend bool operator==(const AgentPose&, const AgentPose&) = default;
};

Coord yaw_vector(int yaw);

// ---- physics shared by the environment and the planners -----------------

bool body_fits(const VoxelGrid& grid, Coord feet);
// Drops the feet until they rest on a block or the ground.
Coord settle(const VoxelGrid& grid, Coord feet);
bool is_supported_stand(const VoxelGrid& grid, Coord feet);

// Pose after a movement, turn or look action; blocked moves leave it as is.
AgentPose apply_motion(const VoxelGrid& grid, const AgentPose& pose, Action action);

enum class TargetMode { Place, Break };

// Casts up to kReach cells from the eye along the pose's direction.
// Break: the first filled cell. Place: the last empty cell before the first
// filled cell or the floor; failing that, the first empty cell resting on a
// block or the ground. A body cell is never a placement target, except the
// feet cell when looking straight down with headroom above: that placement
// lifts the agent one cell and puts the block under its feet.
std::optional<Coord> compute_target_cell(const VoxelGrid& grid, const AgentPose& pose,
                                         TargetMode mode);

bool is_structure_complete(const VoxelGrid& grid, const VoxelGrid& target);

// First standable cell nearest the (0, 0, 0) corner.
std::optional<AgentPose> find_spawn(const VoxelGrid& grid);

// ---- observations and records ------------------------------------------

struct Observation {
  VoxelGrid grid;
  AgentPose pose;
  std::array<int, 6> inventory{};
  bool finite_inventory = false;
  Color selected = Color::Blue;
  std::optional<Subtask> subtask;
  int steps_used = 0;

  // +colour index at a placement cell, -1 at a break cell, 0 without a subtask.
  int subtask_value() const;
  // Dense subtask tensor in the grid's (y, x, z) layout; at most one nonzero.
  std::vector<std::int8_t> subtask_voxel() const;
};

enum class Termination { None, Complete, StepLimit };
std::string_view termination_name(Termination t);

struct StepInfo {
  Termination termination = Termination::None;
  std::size_t subtask_index = 0;
  bool subtask_advanced = false;
  std::optional<Coord> acted_cell;
  bool under_feet = false;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

struct StepRecord {
  Action action = Action::Noop;
  double reward = 0.0;
  bool done = false;
};

struct EpisodeRecord {
  std::uint64_t seed = 0;
  std::string task_id;
  std::vector<StepRecord> steps;
  VoxelGrid final_grid{kDefaultDims};
  Termination termination = Termination::None;
  double f1 = 0.0;

  nlohmann::ordered_json to_json() const;
  static EpisodeRecord from_json(const nlohmann::json& j);
};

struct EnvConfig {
  int step_limit = kDefaultStepLimit;  // 0 disables the cap
  RewardConfig reward;
  bool finite_inventory = false;
  std::array<int, 6> initial_inventory = {20, 20, 20, 20, 20, 20};
  bool random_spawn = false;
  // Single-subtask episodes end on the DONE that completes the plan, even
  // if the rest of the grid differs from the target.
  bool end_when_plan_exhausted = false;
};

// Single-owner episode state machine.
class GridworldEnv {
 public:
  explicit GridworldEnv(EnvConfig config = {});

  // Throws EpisodeError on a dims mismatch, an invalid plan or no spawn.
  Observation reset(const VoxelGrid& target, const VoxelGrid& start, BuildPlan plan,
                    std::uint64_t seed, std::string task_id = {});
  Observation reset(const Task& task, BuildPlan plan, std::uint64_t seed);

  // Throws EpisodeError once the episode is over.
  StepResult step(Action action);

  Observation observe() const;
  bool done() const noexcept { return termination_ != Termination::None; }
  Termination termination() const noexcept { return termination_; }
  const VoxelGrid& grid() const noexcept { return grid_; }
  const VoxelGrid& target() const noexcept { return target_; }
  const AgentPose& pose() const noexcept { return pose_; }
  Color selected() const noexcept { return selected_; }
  const BuildPlan& plan() const noexcept { return plan_; }
  std::size_t subtask_index() const noexcept { return subtask_index_; }
  const Subtask* current_subtask() const noexcept;
  int steps_used() const noexcept { return steps_used_; }
  const std::array<int, 6>& inventory() const noexcept { return inventory_; }
  const EnvConfig& config() const noexcept { return config_; }
  const EpisodeRecord& record() const noexcept { return record_; }

 private:
  void update_termination();

  EnvConfig config_;
  VoxelGrid target_;
  VoxelGrid grid_;
  BuildPlan plan_;
  std::size_t subtask_index_ = 0;
  AgentPose pose_;
  Color selected_ = Color::Blue;
  std::array<int, 6> inventory_{};
  int steps_used_ = 0;
  Termination termination_ = Termination::None;
  std::mt19937_64 rng_;
  EpisodeRecord record_;
};

// Re-runs an action sequence from the same initial conditions.
EpisodeRecord replay(const EnvConfig& config, const Task& task, const BuildPlan& plan,
                     std::uint64_t seed, const std::vector<Action>& actions);

// One text layer per y level (top to bottom), rows along z, columns along
// x; glyphs ".bgropy", 'A' at the agent's feet.
std::string render_ascii(const VoxelGrid& grid, std::optional<Coord> agent_feet = std::nullopt);

}  // namespace gridcraft
