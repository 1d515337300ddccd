#include "gridcraft/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "gridcraft/command_dsl.hpp"
#include "gridcraft/error.hpp"
#include "gridcraft/evaluation.hpp"
#include "gridcraft/format.hpp"
#include "gridcraft/learner.hpp"
#include "gridcraft/planner.hpp"
#include "gridcraft/reward.hpp"
#include "gridcraft/task_io.hpp"

namespace gridcraft {

namespace {

struct Options {
  std::string task;
  std::string tasks_dir;
  std::string record;
  std::string policy = "oracle";
  std::string policy_file;
  std::optional<std::uint64_t> seed;
  int steps = kDefaultStepLimit;
  std::string out;
  std::string curve;
  std::string reward_config;
  std::string input;
  bool augment_colors = false;
  int context_k = 3;
  std::string zone = "11,9,11";
  bool zone_given = false;
  long total_steps = 500'000;
  int curriculum = 1000;
  double learning_rate = LearnerConfig{}.learning_rate;
};

Dims parse_zone(const std::string& text) {
  Dims d{};
  char c1 = 0;
  char c2 = 0;
  std::istringstream in(text);
  if (!(in >> d.x >> c1 >> d.y >> c2 >> d.z) || c1 != ',' || c2 != ',' || !(in >> std::ws).eof()) {
    throw ConfigError("--zone expects X,Y,Z, got '" + text + "'");
  }
  if (d.x <= 0 || d.y <= 0 || d.z <= 0) throw ConfigError("--zone dimensions must be positive");
  return d;
}

std::uint64_t require_seed(const Options& o) {
  if (o.seed) return *o.seed;
  if (const char* env = std::getenv("GRIDCRAFT_SEED")) {
    try {
      std::size_t used = 0;
      const std::uint64_t s = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return s;
    } catch (const std::exception&) {
    }
    throw ConfigError(std::string("GRIDCRAFT_SEED is not an unsigned integer: ") + env);
  }
  throw ConfigError("a seed is required (--seed or GRIDCRAFT_SEED)");
}

EnvConfig env_config(const Options& o) {
  if (o.steps < 0) throw ConfigError("--steps must be non-negative");
  EnvConfig ec;
  ec.step_limit = o.steps;
  if (!o.reward_config.empty()) ec.reward = load_reward_config(o.reward_config);
  return ec;
}

void check_zone(const Options& o, const Task& task) {
  if (o.zone_given && !(task.target.dims() == parse_zone(o.zone))) {
    throw DimensionMismatch("task " + task.id + " does not match --zone " + o.zone);
  }
}

std::unique_ptr<Policy> make_policy(const Options& o) {
  if (o.policy == "oracle") return std::make_unique<OraclePolicy>();
  if (o.policy == "random") return std::make_unique<RandomPolicy>();
  if (o.policy == "trained") {
    if (o.policy_file.empty()) throw ConfigError("--policy trained needs --policy-file");
    return std::make_unique<TabularPolicy>(TabularPolicy::load(o.policy_file));
  }
  throw ConfigError("unknown policy '" + o.policy + "' (oracle, trained or random)");
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
  }
}

int cmd_plan(const Options& o, std::ostream& out) {
  const Task task = load_task(o.task, parse_zone(o.zone));
  check_zone(o, task);
  const BuildPlan plan = plan_subtasks(task.start, task.target);
  const ValidationReport report = validate_plan(task.start, task.target, plan);
  if (!o.out.empty()) write_file(o.out, plan_to_jsonl(plan));
  out << plan.size() << " subtasks\n";
  for (const PlanViolation& v : report.violations) {
    out << "violation at subtask " << v.index << ": " << v.message << "\n";
  }
  out << report.violations.size() << " violations\n";
  out << "final equals target: " << (report.final_equals_target ? "yes" : "no") << "\n";
  if (o.out.empty()) out << plan_to_jsonl(plan);
  return report.ok() ? 0 : 1;
}

int cmd_run(const Options& o, std::ostream& out) {
  const std::uint64_t seed = require_seed(o);
  const Task task = load_task(o.task, parse_zone(o.zone));
  check_zone(o, task);
  std::unique_ptr<Policy> policy = make_policy(o);
  const EpisodeOutcome outcome = run_episode(*policy, task, env_config(o), seed);
  if (!o.out.empty()) write_file(o.out, outcome.record.to_json().dump(2) + "\n");
  out << render_ascii(outcome.record.final_grid);
  out << "termination: " << termination_name(outcome.record.termination)
      << "\nsteps: " << outcome.record.steps.size() << "\nf1: " << format_real(outcome.f1.f1)
      << "\n";
  return 0;
}

int cmd_train(const Options& o, std::ostream& out) {
  const std::uint64_t seed = require_seed(o);
  if (o.out.empty()) throw ConfigError("train needs --out for the policy file");
  const GenParams gp = curriculum_gen_params(parse_zone(o.zone));
  const auto curriculum =
      generate_subtask_curriculum(gp, o.curriculum, seed, CurriculumFilter::PlaceOnly);
  LearnerConfig lc;
  lc.learning_rate = o.learning_rate;
  lc.total_steps = o.total_steps;
  EnvConfig ec = env_config(o);
  ec.end_when_plan_exhausted = true;
  const TrainResult result = train_desk_policy(ec, curriculum, lc, seed);
  result.policy.save(o.out);
  if (!o.curve.empty()) write_file(o.curve, curve_to_csv(result.curve));
  const double last = result.curve.empty() ? 0.0 : result.curve.back().moving_average;
  out << "episodes: " << result.curve.size() << "\nenv steps: " << result.env_steps
      << "\nstates: " << result.policy.state_count() << "\nfinal moving average: "
      << format_real(last) << "\n";
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const std::uint64_t seed = require_seed(o);
  const std::vector<Task> tasks = load_task_dir(o.tasks_dir, parse_zone(o.zone));
  if (tasks.empty()) throw ConfigError(o.tasks_dir + " holds no task files");
  for (const Task& t : tasks) check_zone(o, t);
  std::unique_ptr<Policy> policy = make_policy(o);
  const EvalReport report = evaluate_f1_dataset(*policy, tasks, env_config(o), seed);
  const std::string text = report.to_json().dump(2) + "\n";
  if (!o.out.empty()) write_file(o.out, text);
  out << "tasks: " << tasks.size() << "\nall: " << format_real(report.all) << "\n";
  return 0;
}

int cmd_preprocess(const Options& o, std::ostream& out) {
  if (o.context_k < 0) throw ConfigError("--context-k must be non-negative");
  const auto turns = parse_dialog_jsonl(read_file(o.input));
  std::string text;
  std::size_t lines = 0;
  for (const TrainingPair& pair : preprocess_dialog(turns, o.context_k)) {
    if (o.augment_colors) {
      for (const TrainingPair& p : permute_colors(pair)) {
        text += training_pair_to_json_line(p) + "\n";
        ++lines;
      }
    } else {
      text += training_pair_to_json_line(pair) + "\n";
      ++lines;
    }
  }
  if (o.out.empty()) {
    out << text;
  } else {
    write_file(o.out, text);
    out << lines << " pairs\n";
  }
  return 0;
}

int cmd_render(const Options& o, std::ostream& out) {
  if (o.task.empty() == o.record.empty()) throw ConfigError("render needs exactly one of --task or --record");
  std::string text;
  if (!o.task.empty()) {
    const Task task = load_task(o.task, parse_zone(o.zone));
    text = "target\n" + render_ascii(task.target);
    if (task.start.count_filled() > 0) text += "start\n" + render_ascii(task.start);
  } else {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(o.record));
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(o.record + ": malformed JSON: " + e.what());
    }
    text = render_ascii(EpisodeRecord::from_json(j).final_grid);
  }
  emit(o, text, out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Voxel gridworld builder toolkit", "gridcraft"};
  app.require_subcommand(1);
  Options o;

  auto add_zone = [&](CLI::App* sub) {
    sub->add_option("--zone", o.zone, "Build zone X,Y,Z")->default_str("11,9,11");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", o.seed, "Seed (falls back to GRIDCRAFT_SEED)");
  };
  auto add_env = [&](CLI::App* sub) {
    sub->add_option("--steps", o.steps, "Step cap per episode, 0 for none")->capture_default_str();
    sub->add_option("--reward-config", o.reward_config, "Reward config JSON")->check(CLI::ExistingFile);
  };
  auto add_policy = [&](CLI::App* sub) {
    sub->add_option("--policy", o.policy, "oracle, trained or random")->capture_default_str();
    sub->add_option("--policy-file", o.policy_file, "Trained policy JSON")->check(CLI::ExistingFile);
  };

  CLI::App* plan = app.add_subcommand("plan", "Plan subtasks for a task and validate the plan");
  plan->add_option("--task", o.task, "Task JSON")->required()->check(CLI::ExistingFile);
  plan->add_option("--out", o.out, "Plan JSONL output");
  add_zone(plan);

  CLI::App* run = app.add_subcommand("run", "Run one episode and write its record");
  run->add_option("--task", o.task, "Task JSON")->required()->check(CLI::ExistingFile);
  run->add_option("--out", o.out, "Episode record JSON output");
  add_policy(run);
  add_seed(run);
  add_env(run);
  add_zone(run);

  CLI::App* train = app.add_subcommand("train", "Train the tabular policy on a placement curriculum");
  train->add_option("--out", o.out, "Policy JSON output")->required();
  train->add_option("--curve", o.curve, "Learning curve CSV output");
  train->add_option("--total-steps", o.total_steps, "Environment step budget")->capture_default_str();
  train->add_option("--curriculum", o.curriculum, "Number of curriculum items")->capture_default_str();
  train->add_option("--learning-rate", o.learning_rate, "Policy learning rate")->capture_default_str();
  add_seed(train);
  add_env(train);
  add_zone(train);

  CLI::App* eval = app.add_subcommand("eval", "Score a policy over a directory of tasks");
  eval->add_option("--tasks-dir", o.tasks_dir, "Directory of task JSON files")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--out", o.out, "Report JSON output");
  add_policy(eval);
  add_seed(eval);
  add_env(eval);
  add_zone(eval);

  CLI::App* pre = app.add_subcommand("preprocess", "Turn a dialog JSONL into training pairs");
  pre->add_option("--input", o.input, "Dialog JSONL")->required()->check(CLI::ExistingFile);
  pre->add_option("--out", o.out, "Training-pair JSONL output");
  pre->add_flag("--augment-colors", o.augment_colors, "Emit all 720 colour permutations per pair");
  pre->add_option("--context-k", o.context_k, "Previous pairs kept as context")->capture_default_str();

  CLI::App* render = app.add_subcommand("render", "Print a task or episode record as text layers");
  render->add_option("--task", o.task, "Task JSON")->check(CLI::ExistingFile);
  render->add_option("--record", o.record, "Episode record JSON")->check(CLI::ExistingFile);
  render->add_option("--out", o.out, "Text output");
  add_zone(render);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    for (CLI::App* sub : {plan, run, train, eval, render}) {
      if (sub->parsed() && sub->get_option("--zone")->count() > 0) o.zone_given = true;
    }
    if (plan->parsed()) return cmd_plan(o, out);
    if (run->parsed()) return cmd_run(o, out);
    if (train->parsed()) return cmd_train(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (pre->parsed()) return cmd_preprocess(o, out);
    if (render->parsed()) return cmd_render(o, out);
  } catch (const std::exception& e) {
    err << "gridcraft: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace gridcraft
