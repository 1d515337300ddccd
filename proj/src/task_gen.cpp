#include "gridcraft/task_gen.hpp"

#include <algorithm>
#include <array>
#include <random>

#include "gridcraft/error.hpp"

namespace gridcraft {

namespace {

using Rng = std::mt19937_64;

int draw(Rng& rng, IntRange r) { return std::uniform_int_distribution<int>(r.lo, r.hi)(rng); }

bool coin(Rng& rng, double p) {
  return p > 0.0 && std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

Color draw_color(Rng& rng, const GenParams& p) {
  if (p.color_policy == ColorPolicy::Fixed) return p.fixed_color;
  return kBlockColors[std::uniform_int_distribution<std::size_t>(0, 5)(rng)];
}

Coord yaw_step(Rng& rng) {
  static constexpr std::array<Coord, 4> kSteps = {{{1, 0, 0}, {-1, 0, 0}, {0, 0, 1}, {0, 0, -1}}};
  return kSteps[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
}

struct Tower {
  int x;
  int z;
  int height;
};

std::vector<Tower> sample_towers(Rng& rng, const GenParams& p) {
  const int n = draw(rng, p.n_towers);
  auto jitter = [&] {
    const int mag = draw(rng, p.center_jitter);
    return std::uniform_int_distribution<int>(0, 1)(rng) ? mag : -mag;
  };
  const int cx = p.dims.x / 2 + jitter();
  const int cz = p.dims.z / 2 + jitter();

  std::vector<Tower> towers;
  towers.push_back({cx, cz, draw(rng, p.tower_height)});
  std::uniform_int_distribution<int> offset(-p.cluster_radius, p.cluster_radius);
  while (static_cast<int>(towers.size()) < n) {
    const int x = cx + offset(rng);
    const int z = cz + offset(rng);
    const bool taken = std::any_of(towers.begin(), towers.end(),
                                   [&](const Tower& t) { return t.x == x && t.z == z; });
    if (taken) continue;  // resample
    towers.push_back({x, z, draw(rng, p.tower_height)});
  }
  return towers;
}

VoxelGrid build(Rng& rng, const GenParams& p, const std::vector<Tower>& towers) {
  VoxelGrid grid(p.dims);
  for (const Tower& t : towers) {
    for (int y = 0; y < t.height; ++y) grid.set({t.x, y, t.z}, draw_color(rng, p));
  }
  return grid;
}

bool plannable(const VoxelGrid& target) {
  try {
    const VoxelGrid empty(target.dims());
    return validate_plan(empty, target, plan_subtasks(empty, target)).ok();
  } catch (const PlanError&) {
    return false;
  }
}

VoxelGrid flying_structure(Rng& rng, const GenParams& p) {
  for (;;) {
    std::vector<Tower> towers = sample_towers(rng, p);
    const std::size_t lift =
        std::uniform_int_distribution<std::size_t>(0, towers.size() - 1)(rng);
    Tower& t = towers[lift];
    t.height = std::max(t.height, 2);
    VoxelGrid grid = build(rng, p, towers);
    const int gap = std::uniform_int_distribution<int>(1, t.height - 1)(rng);
    for (int y = 0; y < gap; ++y) grid.set({t.x, y, t.z}, Color::Empty);

    // Sometimes an overhang beside the top of another tower as well.
    if (coin(rng, 0.5)) {
      const Tower& host = towers[std::uniform_int_distribution<std::size_t>(0, towers.size() - 1)(rng)];
      const Coord side = Coord{host.x, host.height - 1, host.z} + yaw_step(rng);
      if (host.height >= 2 && grid.in_zone(side) && !grid.filled({side.x, 0, side.z})) {
        bool column_clear = true;
        for (int y = 0; y < p.dims.y; ++y) column_clear = column_clear && !grid.filled({side.x, y, side.z});
        if (column_clear) grid.set(side, draw_color(rng, p));
      }
    }
    if (plannable(grid)) return grid;
  }
}

}  // namespace

void validate_gen_params(const GenParams& p) {
  auto check = [](IntRange r, int min_lo, const char* name) {
    if (r.lo < min_lo || r.hi < r.lo) throw ConfigError(std::string("invalid range for ") + name);
  };
  check(p.n_towers, 1, "n_towers");
  check(p.tower_height, 1, "tower_height");
  check(p.center_jitter, 0, "center_jitter");
  if (p.cluster_radius < 0) throw ConfigError("cluster_radius must be non-negative");
  if (p.tower_height.hi > p.dims.y) {
    throw ConfigError("tower height exceeds the zone height");
  }
  const int reach = p.center_jitter.hi + p.cluster_radius;
  if (p.dims.x / 2 - reach < 0 || p.dims.x / 2 + reach >= p.dims.x || p.dims.z / 2 - reach < 0 ||
      p.dims.z / 2 + reach >= p.dims.z) {
    throw ConfigError("jitter plus cluster radius leaves the build zone");
  }
  const int side = 2 * p.cluster_radius + 1;
  if (p.n_towers.hi > side * side) throw ConfigError("more towers than cluster cells");
  if (p.flying_fraction > 0.0 && p.dims.y < 3) {
    throw ConfigError("flying structures need a zone at least 3 cells tall");
  }
}

VoxelGrid generate_random_structure(const GenParams& params) {
  validate_gen_params(params);
  Rng rng(params.seed);
  return build(rng, params, sample_towers(rng, params));
}

VoxelGrid generate_flying_structure(const GenParams& params) {
  validate_gen_params(params);
  if (params.tower_height.hi < 2) throw ConfigError("flying structures need towers of height 2+");
  Rng rng(params.seed);
  return flying_structure(rng, params);
}

std::vector<std::string> auto_tags(const VoxelGrid& target, const VoxelGrid& start) {
  bool flat = true;
  bool tall = false;
  bool flying = false;
  for (const auto& [c, color] : target.blocks()) {
    if (c.y > 0) flat = false;
    if (c.y >= 3) tall = true;
    if (c.y > 0 && !target.filled(c.below())) flying = true;
  }
  std::vector<std::string> tags;
  if (flat && target.count_filled() > 0) tags.emplace_back("flat");
  if (flying) tags.emplace_back("flying");
  if (start.count_filled() > 0) tags.emplace_back("tricky");
  if (tall) tags.emplace_back("tall");
  return tags;
}

Task generate_task(const GenParams& params) {
  validate_gen_params(params);
  Rng rng(params.seed);
  const bool fly = params.tower_height.hi >= 2 && coin(rng, params.flying_fraction);
  Task task(params.dims);
  task.id = "gen-" + std::to_string(params.seed);
  task.target = fly ? flying_structure(rng, params) : build(rng, params, sample_towers(rng, params));

  if (params.start_mode == StartMode::PartialWithStrays) {
    const VoxelGrid empty(params.dims);
    const BuildPlan plan = plan_subtasks(empty, task.target);
    const std::size_t prefix =
        std::uniform_int_distribution<std::size_t>(0, plan.size())(rng);
    task.start = apply_subtasks(empty, plan, prefix);

    // Recolour one built block, then drop a few strays resting on ground or
    // on existing blocks.
    auto built = task.start.blocks();
    if (!built.empty() && coin(rng, 0.5)) {
      auto& [c, color] = built[std::uniform_int_distribution<std::size_t>(0, built.size() - 1)(rng)];
      Color other = color;
      while (other == color) other = kBlockColors[std::uniform_int_distribution<std::size_t>(0, 5)(rng)];
      task.start.set(c, other);
    }
    const int strays = std::uniform_int_distribution<int>(0, 3)(rng);
    std::uniform_int_distribution<int> sx(0, params.dims.x - 1);
    std::uniform_int_distribution<int> sz(0, params.dims.z - 1);
    for (int i = 0; i < strays; ++i) {
      const int x = sx(rng);
      const int z = sz(rng);
      if (x + z <= 1) continue;  // keep the spawn corner open
      int y = 0;
      while (y < params.dims.y && task.start.filled({x, y, z})) ++y;
      if (y + 2 < params.dims.y) task.start.set({x, y, z}, draw_color(rng, params));
    }
  }
  task.tags = auto_tags(task.target, task.start);
  return task;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  // splitmix64 over the pair
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

GenParams curriculum_gen_params(Dims dims) {
  GenParams gp;
  gp.dims = dims;
  const int half = std::min(dims.x, dims.z) / 2;
  gp.tower_height = {1, std::min(dims.y, 5)};
  gp.cluster_radius = std::min(1, half);
  gp.center_jitter = {0, std::max(0, half - 2)};
  const int side = 2 * gp.cluster_radius + 1;
  gp.n_towers = {1, std::min(3, side * side)};
  return gp;
}

std::vector<CurriculumItem> generate_subtask_curriculum(const GenParams& params, int count,
                                                        std::uint64_t seed,
                                                        CurriculumFilter filter) {
  if (count < 1) throw ConfigError("curriculum count must be at least 1");
  validate_gen_params(params);
  std::vector<CurriculumItem> items;
  items.reserve(static_cast<std::size_t>(count));
  const VoxelGrid empty(params.dims);
  for (std::uint64_t s = 0; static_cast<int>(items.size()) < count; ++s) {
    GenParams p = params;
    p.seed = derive_seed(seed, s);
    p.start_mode = StartMode::Empty;
    const Task task = generate_task(p);
    const BuildPlan plan = plan_subtasks(empty, task.target);
    VoxelGrid world = empty;
    for (const Subtask& st : plan.subtasks) {
      if (static_cast<int>(items.size()) >= count) break;
      if (filter == CurriculumFilter::All || st.kind == SubtaskKind::Place) {
        items.push_back({world, st});
      }
      world.set(st.pos, st.kind == SubtaskKind::Place ? st.color : Color::Empty);
    }
  }
  return items;
}

VoxelGrid curriculum_target(const CurriculumItem& item) {
  return item.start.with(item.subtask.pos, item.subtask.kind == SubtaskKind::Place
                                               ? item.subtask.color
                                               : Color::Empty);
}

BuildPlan curriculum_plan(const CurriculumItem& item) { return BuildPlan{{item.subtask}}; }

}  // namespace gridcraft
