#include "gridcraft/voxel.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <string>

#include "gridcraft/error.hpp"

namespace gridcraft {

namespace {

constexpr std::array<std::string_view, 7> kNames = {"empty",  "blue",   "green", "red",
                                                    "orange", "purple", "yellow"};
constexpr std::string_view kGlyphs = ".bgropy";

std::string describe(Coord c) {
  return "(" + std::to_string(c.x) + "," + std::to_string(c.y) + "," + std::to_string(c.z) + ")";
}

}  // namespace

std::string_view color_name(Color c) { return kNames[static_cast<std::size_t>(c)]; }

std::optional<Color> color_from_name(std::string_view name) {
  for (Color c : kBlockColors) {
    std::string_view candidate = color_name(c);
    if (candidate.size() == name.size() &&
        std::equal(name.begin(), name.end(), candidate.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) == b;
        })) {
      return c;
    }
  }
  return std::nullopt;
}

char color_glyph(Color c) { return kGlyphs[static_cast<std::size_t>(c)]; }

int manhattan_distance(Coord a, Coord b) {
  return std::abs(a.x - b.x) + std::abs(a.y - b.y) + std::abs(a.z - b.z);
}

VoxelGrid::VoxelGrid(Dims dims) : dims_(dims) {
  if (dims.x <= 0 || dims.y <= 0 || dims.z <= 0) {
    throw DimensionMismatch("zone dimensions must be positive");
  }
  cells_.assign(dims.volume(), Color::Empty);
}

Color VoxelGrid::at(Coord c) const noexcept {
  return in_zone(c) ? cells_[index(c)] : Color::Empty;
}

void VoxelGrid::set(Coord c, Color color) {
  if (!in_zone(c)) {
    throw OutOfZone("cell " + describe(c) + " is outside the build zone", 0);
  }
  cells_[index(c)] = color;
}

VoxelGrid VoxelGrid::with(Coord c, Color color) const {
  VoxelGrid copy = *this;
  copy.set(c, color);
  return copy;
}

std::size_t VoxelGrid::count_filled() const {
  return static_cast<std::size_t>(
      std::count_if(cells_.begin(), cells_.end(), [](Color c) { return c != Color::Empty; }));
}

std::vector<Block> VoxelGrid::blocks() const {
  std::vector<Block> out;
  for (int y = 0; y < dims_.y; ++y)
    for (int x = 0; x < dims_.x; ++x)
      for (int z = 0; z < dims_.z; ++z) {
        Color c = cells_[index({x, y, z})];
        if (c != Color::Empty) out.emplace_back(Coord{x, y, z}, c);
      }
  return out;
}

void require_same_dims(const VoxelGrid& a, const VoxelGrid& b, std::string_view what) {
  if (a.dims() != b.dims()) {
    throw DimensionMismatch(std::string(what) + ": grid dimensions differ");
  }
}

GridDelta grid_diff(const VoxelGrid& current, const VoxelGrid& target) {
  require_same_dims(current, target, "grid_diff");
  GridDelta delta;
  const Dims& d = current.dims();
  for (int y = 0; y < d.y; ++y)
    for (int x = 0; x < d.x; ++x)
      for (int z = 0; z < d.z; ++z) {
        Coord c{x, y, z};
        Color have = current.at(c);
        Color want = target.at(c);
        if (have == want) continue;
        if (have != Color::Empty) delta.to_remove.push_back(c);
        if (want != Color::Empty) delta.to_place.emplace_back(c, want);
      }
  return delta;
}

VoxelGrid apply_delta(const VoxelGrid& grid, const GridDelta& delta) {
  VoxelGrid out = grid;
  for (const Coord& c : delta.to_remove) out.set(c, Color::Empty);
  for (const auto& [c, color] : delta.to_place) out.set(c, color);
  return out;
}

F1Result f1_score(const VoxelGrid& built, const VoxelGrid& target) {
  require_same_dims(built, target, "f1_score");
  F1Result r;
  const auto& b = built.cells();
  const auto& t = target.cells();
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i] != Color::Empty) ++r.built;
    if (t[i] != Color::Empty) ++r.target;
    if (b[i] != Color::Empty && b[i] == t[i]) ++r.correct;
  }
  r.precision = r.built ? static_cast<double>(r.correct) / static_cast<double>(r.built) : 0.0;
  r.recall = r.target ? static_cast<double>(r.correct) / static_cast<double>(r.target) : 0.0;
  const double denom = r.precision + r.recall;
  r.f1 = denom > 0.0 ? 2.0 * r.precision * r.recall / denom : 0.0;
  return r;
}

}  // namespace gridcraft
