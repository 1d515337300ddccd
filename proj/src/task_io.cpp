#include "gridcraft/task_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "gridcraft/error.hpp"

namespace gridcraft {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << contents;
}

void blocks_from_json(const nlohmann::json& blocks, VoxelGrid& grid, std::string_view field) {
  if (!blocks.is_array()) throw ConfigError(std::string(field) + " must be an array");
  for (const auto& b : blocks) {
    if (!b.is_array() || b.size() != 4 || !b[0].is_number_integer() ||
        !b[1].is_number_integer() || !b[2].is_number_integer() || !b[3].is_string()) {
      throw ConfigError(std::string(field) + ": each block must be [x,y,z,\"color\"]");
    }
    Coord c{b[0].get<int>(), b[1].get<int>(), b[2].get<int>()};
    auto color = color_from_name(b[3].get<std::string>());
    if (!color) throw ConfigError("unknown color '" + b[3].get<std::string>() + "'");
    if (!grid.in_zone(c)) throw ConfigError(std::string(field) + ": block outside zone");
    grid.set(c, *color);
  }
}

nlohmann::ordered_json blocks_to_json(const VoxelGrid& grid) {
  auto out = nlohmann::ordered_json::array();
  for (const auto& [c, color] : grid.blocks()) {
    out.push_back({c.x, c.y, c.z, std::string(color_name(color))});
  }
  return out;
}

Task task_from_json(const nlohmann::json& j, std::string id, Dims default_dims) {
  if (!j.is_object()) throw ConfigError("task must be a JSON object");
  Dims dims = default_dims;
  if (j.contains("dims")) {
    const auto& d = j.at("dims");
    if (!d.is_array() || d.size() != 3) throw ConfigError("dims must be [X,Y,Z]");
    dims = {d[0].get<int>(), d[1].get<int>(), d[2].get<int>()};
    if (dims.x <= 0 || dims.y <= 0 || dims.z <= 0) throw ConfigError("dims must be positive");
  }
  Task task(dims);
  task.id = j.value("id", std::move(id));
  if (!j.contains("blocks")) throw ConfigError("task has no \"blocks\" field");
  blocks_from_json(j.at("blocks"), task.target, "blocks");
  if (j.contains("start_blocks")) blocks_from_json(j.at("start_blocks"), task.start, "start_blocks");
  if (j.contains("tags")) {
    for (const auto& t : j.at("tags")) {
      auto tag = t.get<std::string>();
      if (std::find(kTaskTags.begin(), kTaskTags.end(), tag) == kTaskTags.end()) {
        throw ConfigError("unknown tag '" + tag + "'");
      }
      task.tags.push_back(tag);
    }
  }
  return task;
}

nlohmann::ordered_json task_to_json(const Task& task) {
  nlohmann::ordered_json j;
  if (!task.id.empty()) j["id"] = task.id;
  const Dims& d = task.target.dims();
  j["dims"] = {d.x, d.y, d.z};
  j["blocks"] = blocks_to_json(task.target);
  j["start_blocks"] = blocks_to_json(task.start);
  j["tags"] = task.tags;
  return j;
}

Task load_task(const fs::path& path, Dims default_dims) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON: " + e.what());
  }
  return task_from_json(j, path.stem().string(), default_dims);
}

void save_task(const Task& task, const fs::path& path) {
  write_file(path, task_to_json(task).dump(2) + "\n");
}

std::vector<Task> load_task_dir(const fs::path& dir, Dims default_dims) {
  if (!fs::is_directory(dir)) throw ConfigError(dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Task> tasks;
  tasks.reserve(files.size());
  for (const auto& f : files) tasks.push_back(load_task(f, default_dims));
  return tasks;
}

}  // namespace gridcraft
