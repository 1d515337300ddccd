#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridcraft/voxel.hpp"

namespace gridcraft {

inline constexpr std::array<std::string_view, 5> kTaskTags = {"flat", "flying", "diagonal",
                                                              "tricky", "tall"};

// One building task: a target structure plus an optional starting world.
struct Task {
  std::string id;
  VoxelGrid target;
  VoxelGrid start;
  std::vector<std::string> tags;

  explicit Task(Dims dims = kDefaultDims) : target(dims), start(dims) {}
};

// Task file format:
//   {"dims":[X,Y,Z], "blocks":[[x,y,z,"color"],...],
//    "start_blocks":[...], "tags":[...]}
// `dims` may be omitted, in which case `default_dims` applies.
Task task_from_json(const nlohmann::json& j, std::string id = {}, Dims default_dims = kDefaultDims);
nlohmann::ordered_json task_to_json(const Task& task);
Task load_task(const std::filesystem::path& path, Dims default_dims = kDefaultDims);
void save_task(const Task& task, const std::filesystem::path& path);
// Every *.json file of a directory, sorted by file name.
std::vector<Task> load_task_dir(const std::filesystem::path& dir, Dims default_dims = kDefaultDims);

nlohmann::ordered_json blocks_to_json(const VoxelGrid& grid);
void blocks_from_json(const nlohmann::json& blocks, VoxelGrid& grid, std::string_view field);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace gridcraft
