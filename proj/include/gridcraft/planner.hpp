#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridcraft/voxel.hpp"

namespace gridcraft {

enum class SubtaskKind { Place, Break };

enum class Purpose { Target, Scaffold, ScaffoldRemoval, AuxTower, AuxRemoval, ExtraneousRemoval };

std::string_view purpose_name(Purpose p);

// One single-block instruction issued to the policy.
struct Subtask {
  SubtaskKind kind = SubtaskKind::Place;
  Coord pos;
  Color color = Color::Empty;  // non-empty iff kind == Place
  Purpose purpose = Purpose::Target;

  static Subtask place(Coord pos, Color color, Purpose purpose) {
    return {SubtaskKind::Place, pos, color, purpose};
  }
  static Subtask brk(Coord pos, Purpose purpose) {
    return {SubtaskKind::Break, pos, Color::Empty, purpose};
  }

  // Whether `grid` already shows the state this subtask asks for.
  bool satisfied_by(const VoxelGrid& grid) const {
    return kind == SubtaskKind::Place ? grid.at(pos) == color : grid.at(pos) == Color::Empty;
  }

  friend bool operator==(const Subtask&, const Subtask&) = default;
};

struct BuildPlan {
  std::vector<Subtask> subtasks;

  std::size_t size() const { return subtasks.size(); }
  bool empty() const { return subtasks.empty(); }
  const Subtask& operator[](std::size_t i) const { return subtasks[i]; }
};

struct PlannerConfig {
  Color scaffold_color = Color::Blue;
};

// Orders the work of turning `current` into `target`:
//   1. removals of extraneous and recoloured cells, top-down;
//   2. placements whose support exists, in (y, x, z) order;
//   3. one scaffolded group per column that holds a flying target block.
// Throws DimensionMismatch, or PlanError if no auxiliary tower can be sited.
BuildPlan plan_subtasks(const VoxelGrid& current, const VoxelGrid& target,
                        const PlannerConfig& config = {});

// Subtasks for one column whose target blocks lack support. `current` is
// the world at the time the group starts; `target_cells` lists the (y,
// colour) blocks still missing in the column.
std::vector<Subtask> plan_flying_column(const VoxelGrid& current, std::pair<int, int> column,
                                        const std::vector<std::pair<int, Color>>& target_cells,
                                        const PlannerConfig& config = {});

struct PlanViolation {
  std::size_t index = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<PlanViolation> violations;
  bool final_equals_target = false;
  VoxelGrid final_grid;

  bool ok() const { return violations.empty() && final_equals_target; }
};

// Replays the plan as pure grid rewrites. A placement needs an empty cell
// resting on ground or on a block; a break needs a filled cell.
ValidationReport validate_plan(const VoxelGrid& current, const VoxelGrid& target,
                               const BuildPlan& plan);

// Grid after applying the first `count` subtasks as rewrites.
VoxelGrid apply_subtasks(const VoxelGrid& grid, const BuildPlan& plan, std::size_t count);

nlohmann::ordered_json subtask_to_json(const Subtask& s, std::size_t index);
Subtask subtask_from_json(const nlohmann::json& j);
// One JSON object per line, newline-terminated.
std::string plan_to_jsonl(const BuildPlan& plan);
BuildPlan plan_from_jsonl(std::string_view text);

}  // namespace gridcraft
