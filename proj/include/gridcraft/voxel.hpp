#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace gridcraft {

enum class Color : std::uint8_t { Empty = 0, Blue, Green, Red, Orange, Purple, Yellow };

inline constexpr std::array<Color, 6> kBlockColors = {Color::Blue,   Color::Green,  Color::Red,
                                                      Color::Orange, Color::Purple, Color::Yellow};

std::string_view color_name(Color c);
// Case-insensitive. Never returns Color::Empty.
std::optional<Color> color_from_name(std::string_view name);
char color_glyph(Color c);
inline int color_index(Color c) { return static_cast<int>(c); }

// y is vertical; y = 0 is ground level.
struct Coord {
  int x = 0;
  int y = 0;
  int z = 0;

  friend auto operator<=>(const Coord&, const Coord&) = default;
  friend Coord operator+(Coord a, Coord b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Coord operator-(Coord a, Coord b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Coord operator*(int k, Coord a) { return {k * a.x, k * a.y, k * a.z}; }
  Coord above() const { return {x, y + 1, z}; }
  Coord below() const { return {x, y - 1, z}; }
};

// Orders cells bottom-to-top, then by x, then by z.
inline bool layer_order(const Coord& a, const Coord& b) {
  return std::tie(a.y, a.x, a.z) < std::tie(b.y, b.x, b.z);
}

int manhattan_distance(Coord a, Coord b);

struct Dims {
  int x = 11;
  int y = 9;
  int z = 11;

  friend bool operator==(const Dims&, const Dims&) = default;
  std::size_t volume() const { return static_cast<std::size_t>(x) * y * z; }
  bool contains(Coord c) const {
    return c.x >= 0 && c.x < x && c.y >= 0 && c.y < y && c.z >= 0 && c.z < z;
  }
};

inline constexpr Dims kDefaultDims{11, 9, 11};

using Block = std::pair<Coord, Color>;

// Dense colour grid over the build zone.
class VoxelGrid {
 public:
  explicit VoxelGrid(Dims dims = kDefaultDims);

  const Dims& dims() const noexcept { return dims_; }
  bool in_zone(Coord c) const noexcept { return dims_.contains(c); }

  // Out-of-zone reads return Empty.
  Color at(Coord c) const noexcept;
  bool filled(Coord c) const noexcept { return at(c) != Color::Empty; }
  // Throws OutOfZone for cells outside the zone.
  void set(Coord c, Color color);
  VoxelGrid with(Coord c, Color color) const;

  std::size_t count_filled() const;
  // Non-empty cells in (y, x, z) order.
  std::vector<Block> blocks() const;

  const std::vector<Color>& cells() const noexcept { return cells_; }

  friend bool operator==(const VoxelGrid&, const VoxelGrid&) = default;

 private:
  std::size_t index(Coord c) const noexcept {
    return (static_cast<std::size_t>(c.y) * dims_.x + c.x) * dims_.z + c.z;
  }

  Dims dims_;
  std::vector<Color> cells_;
};

struct GridDelta {
  std::vector<Coord> to_remove;
  std::vector<Block> to_place;

  bool empty() const { return to_remove.empty() && to_place.empty(); }
};

// Cells that differ between `current` and `target`, in (y, x, z) order.
GridDelta grid_diff(const VoxelGrid& current, const VoxelGrid& target);
VoxelGrid apply_delta(const VoxelGrid& grid, const GridDelta& delta);

struct F1Result {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t correct = 0;
  std::size_t built = 0;
  std::size_t target = 0;
};

// Strict matching: a built cell counts only if position and colour agree.
F1Result f1_score(const VoxelGrid& built, const VoxelGrid& target);

void require_same_dims(const VoxelGrid& a, const VoxelGrid& b, std::string_view what);

}  // namespace gridcraft
