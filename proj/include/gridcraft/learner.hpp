#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridcraft/env.hpp"
#include "gridcraft/policies.hpp"
#include "gridcraft/task_gen.hpp"

namespace gridcraft {

// Compact symbolic view of an observation used by the tabular learner:
// offset from the agent's feet to the subtask cell in the agent's frame
// (forward, right, up; each clipped to +-5), pitch, subtask kind, wanted
// colour (until selected), whether the selected colour matches, and what the
// subtask cell holds now.
struct Digest {
  int forward = 0;
  int right = 0;
  int up = 0;
  int pitch = 0;
  int kind = 0;  // 0 none, 1 place, 2 break
  int color = 0;
  bool color_match = false;
  int cell = 0;  // 0 empty, 1 as the subtask wants, 2 some other block

  std::uint32_t key() const;
  static Digest from_key(std::uint32_t key);
  friend bool operator==(const Digest&, const Digest&) = default;
};

inline constexpr int kDigestClip = 5;

Digest digest_observation(const Observation& obs);

using ActionRow = std::array<double, kNumActions>;

// Softmax policy with one logit row per digest.
class TabularPolicy : public Policy {
 public:
  enum class Mode { Sample, Greedy };

  explicit TabularPolicy(Mode mode = Mode::Greedy) : mode_(mode) {}

  std::string_view name() const override { return "trained"; }
  void begin_episode(std::uint64_t seed) override { rng_.seed(seed); }
  Action act(const Observation& obs) override;

  void set_mode(Mode mode) { mode_ = mode; }
  ActionRow probabilities(std::uint32_t key) const;
  ActionRow& logits(std::uint32_t key) { return table_[key]; }
  std::size_t state_count() const { return table_.size(); }

  nlohmann::ordered_json to_json() const;
  static TabularPolicy from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static TabularPolicy load(const std::filesystem::path& path);

 private:
  Mode mode_;
  std::unordered_map<std::uint32_t, ActionRow> table_;
  std::mt19937_64 rng_;
};

struct LearnerConfig {
  double learning_rate = 0.5;  // 0 freezes the policy
  double value_learning_rate = 0.1;
  double clip = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double entropy_coef = 0.001;
  int rollout_steps = 2048;
  int epochs = 4;
  int minibatch_size = 256;
  int max_episode_steps = 100;
  long total_steps = 500'000;
  int moving_window = 200;

  // Throws ConfigError.
  void validate() const;
};

struct CurvePoint {
  long episode = 0;
  bool success = false;
  double moving_average = 0.0;
  long env_steps = 0;  // cumulative, at the end of this episode
};

struct TrainResult {
  TabularPolicy policy;
  std::vector<CurvePoint> curve;
  long env_steps = 0;
};

// On-policy training with the clipped probability-ratio objective and
// generalized advantage estimation over single-subtask episodes sampled
// from `curriculum`. Deterministic for a given seed.
TrainResult train_desk_policy(const EnvConfig& env_config,
                              const std::vector<CurriculumItem>& curriculum,
                              const LearnerConfig& config, std::uint64_t seed);

// Cumulative env steps at the first episode whose full-window moving
// average reaches `threshold`, or -1.
long steps_to_reach(const std::vector<CurvePoint>& curve, double threshold, int window);

// "episode_index,success,moving_average" rows.
std::string curve_to_csv(const std::vector<CurvePoint>& curve);

}  // namespace gridcraft
