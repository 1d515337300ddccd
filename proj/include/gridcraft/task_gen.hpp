#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gridcraft/planner.hpp"
#include "gridcraft/task_io.hpp"
#include "gridcraft/voxel.hpp"

namespace gridcraft {

struct IntRange {
  int lo = 0;
  int hi = 0;
};

enum class ColorPolicy { Fixed, RandomPerBlock };

enum class StartMode {
  Empty,
  // A prefix of the target plus stray and recoloured blocks.
  PartialWithStrays,
};

struct GenParams {
  Dims dims = kDefaultDims;
  IntRange n_towers{1, 4};
  IntRange tower_height{1, 6};
  IntRange center_jitter{0, 3};  // per-axis offset of the cluster centre
  int cluster_radius = 2;        // Chebyshev radius of tower cells around the centre
  ColorPolicy color_policy = ColorPolicy::RandomPerBlock;
  Color fixed_color = Color::Blue;
  // Fraction of structures that get a floating segment (0 disables).
  double flying_fraction = 0.0;
  StartMode start_mode = StartMode::Empty;
  std::uint64_t seed = 0;
};

// Independent per-index seed derived from a base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

// Throws ConfigError for empty ranges or structures that cannot fit.
void validate_gen_params(const GenParams& params);

// Vertical towers on distinct columns around the jittered zone centre. The
// first tower stands on the centre itself.
VoxelGrid generate_random_structure(const GenParams& params);

// As above, with one tower forced to float above a gap.
VoxelGrid generate_flying_structure(const GenParams& params);

// "flat", "tall" and "flying" from simple height/support rules.
std::vector<std::string> auto_tags(const VoxelGrid& target, const VoxelGrid& start);

// Full task for `params.seed`: structure (flying per flying_fraction),
// start grid per start_mode, and tags.
Task generate_task(const GenParams& params);

struct CurriculumItem {
  VoxelGrid start;
  Subtask subtask;
};

enum class CurriculumFilter { All, PlaceOnly };

// Small clustered towers sized for a zone; used for training curricula.
GenParams curriculum_gen_params(Dims dims);

// Walks the plans of successive generated structures and emits one item per
// plan step: the world just before the step plus the step itself.
std::vector<CurriculumItem> generate_subtask_curriculum(const GenParams& params, int count,
                                                        std::uint64_t seed,
                                                        CurriculumFilter filter = CurriculumFilter::All);

// Target of a single-subtask episode.
VoxelGrid curriculum_target(const CurriculumItem& item);
BuildPlan curriculum_plan(const CurriculumItem& item);

}  // namespace gridcraft
