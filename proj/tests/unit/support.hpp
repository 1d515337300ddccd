#pragma once

#include <random>
#include <string>

#include "gridcraft/voxel.hpp"

namespace gridcraft::test_support {

inline std::string fixture(const std::string& name) {
  return std::string(GRIDCRAFT_DATA_DIR) + "/fixtures/" + name + ".json";
}

inline std::string fixtures_dir() { return std::string(GRIDCRAFT_DATA_DIR) + "/fixtures"; }

// Random grid with roughly `density` of the cells filled, colours uniform.
inline VoxelGrid random_grid(std::mt19937_64& rng, Dims dims, double density) {
  VoxelGrid g(dims);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> c(0, 5);
  for (int y = 0; y < dims.y; ++y) {
    for (int x = 0; x < dims.x; ++x) {
      for (int z = 0; z < dims.z; ++z) {
        if (u(rng) < density) g.set({x, y, z}, kBlockColors[static_cast<std::size_t>(c(rng))]);
      }
    }
  }
  return g;
}

}  // namespace gridcraft::test_support
