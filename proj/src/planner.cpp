#include "gridcraft/planner.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <optional>

#include "gridcraft/error.hpp"

namespace gridcraft {

namespace {

constexpr std::array<std::string_view, 6> kPurposeNames = {
    "target", "scaffold", "scaffold_removal", "aux_tower", "aux_removal", "extraneous_removal"};

bool supported(const VoxelGrid& grid, Coord c) { return c.y == 0 || grid.filled(c.below()); }

// Auxiliary tower of `height` blocks next to (x, z), with standing room on
// top. Face neighbours first, then diagonals.
std::optional<std::pair<int, int>> site_aux_tower(const VoxelGrid& grid, int x, int z,
                                                  int height) {
  static constexpr std::array<std::pair<int, int>, 8> kOffsets = {
      {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};
  const Dims& d = grid.dims();
  for (auto [dx, dz] : kOffsets) {
    const int ax = x + dx;
    const int az = z + dz;
    if (ax < 0 || ax >= d.x || az < 0 || az >= d.z || height + 1 >= d.y) continue;
    bool free = true;
    for (int y = 0; y <= height + 1 && free; ++y) free = !grid.filled({ax, y, az});
    if (free) return std::make_pair(ax, az);
  }
  return std::nullopt;
}

}  // namespace

std::string_view purpose_name(Purpose p) { return kPurposeNames[static_cast<std::size_t>(p)]; }

std::vector<Subtask> plan_flying_column(const VoxelGrid& current, std::pair<int, int> column,
                                        const std::vector<std::pair<int, Color>>& target_cells,
                                        const PlannerConfig& config) {
  std::vector<Subtask> out;
  if (target_cells.empty()) return out;
  const auto [x, z] = column;
  std::map<int, Color> wanted(target_cells.begin(), target_cells.end());
  const int top = wanted.rbegin()->first;
  int start = wanted.begin()->first;
  while (start > 0 && !current.filled({x, start - 1, z})) --start;

  std::vector<Coord> scaffold;
  for (int y = start; y <= top; ++y) {
    Coord c{x, y, z};
    if (auto it = wanted.find(y); it != wanted.end()) {
      out.push_back(Subtask::place(c, it->second, Purpose::Target));
    } else if (!current.filled(c)) {
      out.push_back(Subtask::place(c, config.scaffold_color, Purpose::Scaffold));
      scaffold.push_back(c);
    }
  }
  if (scaffold.empty()) return out;

  // Tall enough that the agent standing on top can break the highest
  // scaffold cell.
  const int aux_height = scaffold.back().y;
  std::optional<std::pair<int, int>> site;
  if (aux_height > 0) {
    site = site_aux_tower(current, x, z, aux_height);
    if (!site) {
      throw PlanError("no free column next to (" + std::to_string(x) + "," + std::to_string(z) +
                      ") for an auxiliary tower of height " + std::to_string(aux_height));
    }
    for (int y = 0; y < aux_height; ++y) {
      out.push_back(Subtask::place({site->first, y, site->second}, config.scaffold_color,
                                   Purpose::AuxTower));
    }
  }
  for (auto it = scaffold.rbegin(); it != scaffold.rend(); ++it) {
    out.push_back(Subtask::brk(*it, Purpose::ScaffoldRemoval));
  }
  if (site) {
    for (int y = aux_height - 1; y >= 0; --y) {
      out.push_back(Subtask::brk({site->first, y, site->second}, Purpose::AuxRemoval));
    }
  }
  return out;
}

BuildPlan plan_subtasks(const VoxelGrid& current, const VoxelGrid& target,
                        const PlannerConfig& config) {
  require_same_dims(current, target, "plan_subtasks");
  const Dims& d = current.dims();
  BuildPlan plan;
  VoxelGrid work = current;

  // Phase 1: clear cells that must end empty or change colour, top-down.
  for (int y = d.y - 1; y >= 0; --y)
    for (int x = 0; x < d.x; ++x)
      for (int z = 0; z < d.z; ++z) {
        Coord c{x, y, z};
        if (work.filled(c) && work.at(c) != target.at(c)) {
          plan.subtasks.push_back(Subtask::brk(c, Purpose::ExtraneousRemoval));
          work.set(c, Color::Empty);
        }
      }

  // Phase 2: everything that can rest on ground or on an earlier block.
  // Cells are visited bottom-up, so a cell's support is decided before it.
  std::map<std::pair<int, int>, std::vector<std::pair<int, Color>>> flying;
  for (int y = 0; y < d.y; ++y)
    for (int x = 0; x < d.x; ++x)
      for (int z = 0; z < d.z; ++z) {
        Coord c{x, y, z};
        Color want = target.at(c);
        if (want == Color::Empty || work.at(c) == want) continue;
        if (supported(work, c)) {
          plan.subtasks.push_back(Subtask::place(c, want, Purpose::Target));
          work.set(c, want);
        } else {
          flying[{x, z}].emplace_back(y, want);
        }
      }

  // Phase 3: flying columns, (x, z) ascending.
  for (const auto& [column, cells] : flying) {
    auto group = plan_flying_column(work, column, cells, config);
    for (const Subtask& s : group) {
      work.set(s.pos, s.kind == SubtaskKind::Place ? s.color : Color::Empty);
      plan.subtasks.push_back(s);
    }
  }
  return plan;
}

ValidationReport validate_plan(const VoxelGrid& current, const VoxelGrid& target,
                               const BuildPlan& plan) {
  require_same_dims(current, target, "validate_plan");
  ValidationReport report{{}, false, current};
  VoxelGrid& grid = report.final_grid;
  auto violation = [&](std::size_t i, std::string msg) {
    report.violations.push_back({i, std::move(msg)});
  };
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const Subtask& s = plan[i];
    if (!grid.in_zone(s.pos)) {
      violation(i, "cell outside the build zone");
      continue;
    }
    if (s.kind == SubtaskKind::Place) {
      if (s.color == Color::Empty) {
        violation(i, "placement without a color");
        continue;
      }
      if (grid.filled(s.pos)) {
        violation(i, "placement into an occupied cell");
        continue;
      }
      if (!supported(grid, s.pos)) violation(i, "unsupported placement");
      grid.set(s.pos, s.color);
    } else {
      if (!grid.filled(s.pos)) {
        violation(i, "break of an empty cell");
        continue;
      }
      grid.set(s.pos, Color::Empty);
    }
  }
  report.final_equals_target = grid == target;
  return report;
}

VoxelGrid apply_subtasks(const VoxelGrid& grid, const BuildPlan& plan, std::size_t count) {
  VoxelGrid out = grid;
  for (std::size_t i = 0; i < count && i < plan.size(); ++i) {
    const Subtask& s = plan[i];
    out.set(s.pos, s.kind == SubtaskKind::Place ? s.color : Color::Empty);
  }
  return out;
}

nlohmann::ordered_json subtask_to_json(const Subtask& s, std::size_t index) {
  nlohmann::ordered_json j;
  j["i"] = index;
  j["kind"] = s.kind == SubtaskKind::Place ? "place" : "break";
  j["pos"] = {s.pos.x, s.pos.y, s.pos.z};
  if (s.kind == SubtaskKind::Place) {
    j["color"] = std::string(color_name(s.color));
  } else {
    j["color"] = nullptr;
  }
  j["purpose"] = std::string(purpose_name(s.purpose));
  return j;
}

Subtask subtask_from_json(const nlohmann::json& j) {
  Subtask s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "place") {
    s.kind = SubtaskKind::Place;
  } else if (kind == "break") {
    s.kind = SubtaskKind::Break;
  } else {
    throw ConfigError("unknown subtask kind '" + kind + "'");
  }
  const auto& p = j.at("pos");
  s.pos = {p.at(0).get<int>(), p.at(1).get<int>(), p.at(2).get<int>()};
  if (s.kind == SubtaskKind::Place) {
    auto color = color_from_name(j.at("color").get<std::string>());
    if (!color) throw ConfigError("unknown color in subtask");
    s.color = *color;
  }
  const std::string purpose = j.at("purpose").get<std::string>();
  auto it = std::find(kPurposeNames.begin(), kPurposeNames.end(), purpose);
  if (it == kPurposeNames.end()) throw ConfigError("unknown purpose '" + purpose + "'");
  s.purpose = static_cast<Purpose>(it - kPurposeNames.begin());
  return s;
}

std::string plan_to_jsonl(const BuildPlan& plan) {
  std::string out;
  for (std::size_t i = 0; i < plan.size(); ++i) {
    out += subtask_to_json(plan[i], i).dump();
    out += '\n';
  }
  return out;
}

BuildPlan plan_from_jsonl(std::string_view text) {
  BuildPlan plan;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) {
      plan.subtasks.push_back(subtask_from_json(nlohmann::json::parse(line)));
    }
    start = end + 1;
  }
  return plan;
}

}  // namespace gridcraft
