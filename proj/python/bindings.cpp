#include <pybind11/pybind11.h>
#include <pybind11/operators.h>
#include <pybind11/stl.h>

#include "gridcraft/command_dsl.hpp"
#include "gridcraft/error.hpp"
#include "gridcraft/evaluation.hpp"
#include "gridcraft/learner.hpp"
#include "gridcraft/planner.hpp"
#include "gridcraft/reward.hpp"
#include "gridcraft/task_io.hpp"

namespace py = pybind11;
using namespace gridcraft;

namespace {

using Triple = std::tuple<int, int, int>;

Dims to_dims(const Triple& t) { return {std::get<0>(t), std::get<1>(t), std::get<2>(t)}; }
Coord to_coord(const Triple& t) { return {std::get<0>(t), std::get<1>(t), std::get<2>(t)}; }
Triple from_coord(Coord c) { return {c.x, c.y, c.z}; }

Color to_color(const std::string& name) {
  if (auto c = color_from_name(name)) return *c;
  throw ConfigError("unknown color '" + name + "'");
}

py::object to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Action to_action(const py::object& a) {
  if (py::isinstance<py::int_>(a)) {
    const int i = a.cast<int>();
    if (i < 0 || i >= kNumActions) throw ConfigError("action index out of range");
    return static_cast<Action>(i);
  }
  const std::string name = a.cast<std::string>();
  if (auto act = action_from_name(name)) return *act;
  throw ConfigError("unknown action '" + name + "'");
}

py::dict observation_dict(const Observation& obs) {
  py::dict d;
  d["feet"] = from_coord(obs.pose.feet);
  d["yaw"] = obs.pose.yaw;
  d["pitch"] = obs.pose.pitch;
  d["selected"] = std::string(color_name(obs.selected));
  d["steps_used"] = obs.steps_used;
  d["inventory"] = obs.inventory;
  if (obs.subtask) {
    d["subtask"] = to_py(subtask_to_json(*obs.subtask, 0));
  } else {
    d["subtask"] = py::none();
  }
  d["subtask_voxel"] = obs.subtask_voxel();
  d["grid"] = obs.grid;
  return d;
}

std::unique_ptr<Policy> make_policy(const std::string& name, const std::string& policy_file) {
  if (name == "oracle") return std::make_unique<OraclePolicy>();
  if (name == "random") return std::make_unique<RandomPolicy>();
  if (name == "noop") return std::make_unique<NoopPolicy>();
  if (name == "trained") return std::make_unique<TabularPolicy>(TabularPolicy::load(policy_file));
  throw ConfigError("unknown policy '" + name + "'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Voxel gridworld builder toolkit";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  py::class_<VoxelGrid>(m, "Grid")
      .def(py::init([](const Triple& dims) { return VoxelGrid(to_dims(dims)); }),
           py::arg("dims") = Triple{kDefaultDims.x, kDefaultDims.y, kDefaultDims.z})
      .def_property_readonly("dims",
                             [](const VoxelGrid& g) {
                               return Triple{g.dims().x, g.dims().y, g.dims().z};
                             })
      .def("get", [](const VoxelGrid& g, int x, int y, int z) {
        return std::string(color_name(g.at({x, y, z})));
      })
      .def("set", [](VoxelGrid& g, int x, int y, int z, const std::string& color) {
        g.set({x, y, z}, color == "empty" ? Color::Empty : to_color(color));
      })
      .def("count_filled", &VoxelGrid::count_filled)
      .def("blocks",
           [](const VoxelGrid& g) {
             std::vector<std::tuple<int, int, int, std::string>> out;
             for (const auto& [c, color] : g.blocks()) {
               out.emplace_back(c.x, c.y, c.z, std::string(color_name(color)));
             }
             return out;
           })
      .def("render", [](const VoxelGrid& g) { return render_ascii(g); })
      .def(py::self == py::self);

  m.def("f1_score", [](const VoxelGrid& built, const VoxelGrid& target) {
    const F1Result r = f1_score(built, target);
    py::dict d;
    d["precision"] = r.precision;
    d["recall"] = r.recall;
    d["f1"] = r.f1;
    return d;
  });

  m.def("normalize_commands", [](const std::string& text) { return emit_commands(parse_commands(text)); },
        "Parse a command script and emit it in canonical form.");
  m.def(
      "voxelize",
      [](const std::string& text, std::optional<Triple> anchor, const Triple& dims) {
        const Dims d = to_dims(dims);
        return voxelize(parse_commands(text), anchor ? to_coord(*anchor) : default_anchor(d), d);
      },
      py::arg("text"), py::arg("anchor") = py::none(),
      py::arg("dims") = Triple{kDefaultDims.x, kDefaultDims.y, kDefaultDims.z});

  py::class_<Task>(m, "Task")
      .def_readonly("id", &Task::id)
      .def_readonly("tags", &Task::tags)
      .def_readonly("target", &Task::target)
      .def_readonly("start", &Task::start);
  m.def("load_task", [](const std::string& path) { return load_task(path); });
  m.def("load_task_dir", [](const std::string& path) { return load_task_dir(path); });

  m.def("plan_subtasks", [](const VoxelGrid& start, const VoxelGrid& target) {
    const BuildPlan plan = plan_subtasks(start, target);
    py::list out;
    for (std::size_t i = 0; i < plan.size(); ++i) out.append(to_py(subtask_to_json(plan.subtasks[i], i)));
    return out;
  });
  m.def("validate_plan", [](const VoxelGrid& start, const VoxelGrid& target) {
    const ValidationReport r = validate_plan(start, target, plan_subtasks(start, target));
    py::dict d;
    d["violations"] = r.violations.size();
    d["final_equals_target"] = r.final_equals_target;
    return d;
  });

  m.def(
      "placement_reward",
      [](const Triple& acted, const Triple& target, bool under_feet) {
        return placement_reward(to_coord(acted),
                                Subtask::place(to_coord(target), Color::Blue, Purpose::Target),
                                under_feet);
      },
      py::arg("acted"), py::arg("target"), py::arg("under_feet") = false);
  m.def("done_action_reward", [](bool complete) { return done_action_reward(complete); });

  m.attr("ACTIONS") = [] {
    std::vector<std::string> names;
    for (int i = 0; i < kNumActions; ++i) names.emplace_back(action_name(static_cast<Action>(i)));
    return names;
  }();

  py::class_<GridworldEnv>(m, "Env")
      .def(py::init([](int step_limit) {
             EnvConfig c;
             c.step_limit = step_limit;
             return GridworldEnv(c);
           }),
           py::arg("step_limit") = kDefaultStepLimit)
      .def("reset",
           [](GridworldEnv& env, const Task& task, std::uint64_t seed) {
             return observation_dict(env.reset(task, plan_subtasks(task.start, task.target), seed));
           },
           py::arg("task"), py::arg("seed") = 0)
      .def("step",
           [](GridworldEnv& env, const py::object& action) {
             const StepResult r = env.step(to_action(action));
             py::dict info;
             info["termination"] = std::string(termination_name(r.info.termination));
             info["subtask_index"] = r.info.subtask_index;
             info["under_feet"] = r.info.under_feet;
             return py::make_tuple(observation_dict(r.observation), r.reward, r.done, info);
           })
      .def_property_readonly("done", &GridworldEnv::done)
      .def_property_readonly("grid", &GridworldEnv::grid)
      .def("record", [](const GridworldEnv& env) { return to_py(env.record().to_json()); });

  m.def(
      "run_episode",
      [](const Task& task, const std::string& policy, std::uint64_t seed, int steps,
         const std::string& policy_file) {
        EnvConfig c;
        c.step_limit = steps;
        auto p = make_policy(policy, policy_file);
        return to_py(run_episode(*p, task, c, seed).record.to_json());
      },
      py::arg("task"), py::arg("policy") = "oracle", py::arg("seed") = 0,
      py::arg("steps") = kDefaultStepLimit, py::arg("policy_file") = "");

  m.def(
      "evaluate",
      [](const std::vector<Task>& tasks, const std::string& policy, std::uint64_t seed, int steps) {
        EnvConfig c;
        c.step_limit = steps;
        auto p = make_policy(policy, "");
        return to_py(evaluate_f1_dataset(*p, tasks, c, seed).to_json());
      },
      py::arg("tasks"), py::arg("policy") = "oracle", py::arg("seed") = 0,
      py::arg("steps") = kDefaultStepLimit);

  m.def(
      "preprocess_dialog",
      [](const std::string& jsonl, int context_k, bool augment) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const TrainingPair& pair : preprocess_dialog(parse_dialog_jsonl(jsonl), context_k)) {
          if (!augment) {
            out.emplace_back(pair.input, pair.output);
            continue;
          }
          for (const TrainingPair& p : permute_colors(pair)) out.emplace_back(p.input, p.output);
        }
        return out;
      },
      py::arg("jsonl"), py::arg("context_k") = 3, py::arg("augment") = false);
}
