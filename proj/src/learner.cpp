#include "gridcraft/learner.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>

#include "gridcraft/error.hpp"
#include "gridcraft/format.hpp"
#include "gridcraft/task_io.hpp"

namespace gridcraft {

namespace {

constexpr int kSpan = 2 * kDigestClip + 1;

int clip(int v) { return std::clamp(v, -kDigestClip, kDigestClip); }

int dot_xz(Coord a, Coord b) { return a.x * b.x + a.z * b.z; }

ActionRow softmax(const ActionRow& logits) {
  ActionRow p;
  const double peak = *std::max_element(logits.begin(), logits.end());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(logits[i] - peak);
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

int sample_index(const ActionRow& probs, std::mt19937_64& rng) {
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return kNumActions - 1;
}

}  // namespace

std::uint32_t Digest::key() const {
  std::uint32_t k = static_cast<std::uint32_t>(forward + kDigestClip);
  k = k * kSpan + static_cast<std::uint32_t>(right + kDigestClip);
  k = k * kSpan + static_cast<std::uint32_t>(up + kDigestClip);
  k = k * 5 + static_cast<std::uint32_t>(pitch + 2);
  k = k * 3 + static_cast<std::uint32_t>(kind);
  k = k * 7 + static_cast<std::uint32_t>(color);
  k = k * 2 + (color_match ? 1U : 0U);
  k = k * 3 + static_cast<std::uint32_t>(cell);
  return k;
}

Digest Digest::from_key(std::uint32_t k) {
  Digest d;
  d.cell = static_cast<int>(k % 3);
  k /= 3;
  d.color_match = k % 2;
  k /= 2;
  d.color = static_cast<int>(k % 7);
  k /= 7;
  d.kind = static_cast<int>(k % 3);
  k /= 3;
  d.pitch = static_cast<int>(k % 5) - 2;
  k /= 5;
  d.up = static_cast<int>(k % kSpan) - kDigestClip;
  k /= kSpan;
  d.right = static_cast<int>(k % kSpan) - kDigestClip;
  k /= kSpan;
  d.forward = static_cast<int>(k) - kDigestClip;
  return d;
}

Digest digest_observation(const Observation& obs) {
  Digest d;
  d.pitch = obs.pose.pitch;
  if (!obs.subtask) return d;
  const Subtask& s = *obs.subtask;
  const Coord offset = s.pos - obs.pose.feet;
  d.forward = clip(dot_xz(offset, obs.pose.forward()));
  d.right = clip(dot_xz(offset, obs.pose.right()));
  d.up = clip(offset.y);
  d.kind = s.kind == SubtaskKind::Place ? 1 : 2;
  d.color_match = s.kind == SubtaskKind::Break || obs.selected == s.color;
  // The wanted colour only matters until it is selected.
  d.color = d.color_match ? 0 : color_index(s.color);
  if (s.satisfied_by(obs.grid)) {
    d.cell = 1;
  } else if (obs.grid.filled(s.pos)) {
    d.cell = 2;
  }
  return d;
}

ActionRow TabularPolicy::probabilities(std::uint32_t key) const {
  auto it = table_.find(key);
  return softmax(it == table_.end() ? ActionRow{} : it->second);
}

Action TabularPolicy::act(const Observation& obs) {
  const ActionRow p = probabilities(digest_observation(obs).key());
  if (mode_ == Mode::Sample) return static_cast<Action>(sample_index(p, rng_));
  return static_cast<Action>(std::max_element(p.begin(), p.end()) - p.begin());
}

nlohmann::ordered_json TabularPolicy::to_json() const {
  std::map<std::uint32_t, const ActionRow*> sorted;
  for (const auto& [k, row] : table_) sorted.emplace(k, &row);
  nlohmann::ordered_json states = nlohmann::ordered_json::object();
  for (const auto& [k, row] : sorted) {
    auto values = nlohmann::ordered_json::array();
    for (double v : *row) values.push_back(round_real(v));
    states[std::to_string(k)] = std::move(values);
  }
  nlohmann::ordered_json j;
  j["kind"] = "tabular_ppo";
  j["actions"] = kNumActions;
  j["states"] = std::move(states);
  return j;
}

TabularPolicy TabularPolicy::from_json(const nlohmann::json& j) {
  if (j.value("kind", std::string{}) != "tabular_ppo") throw ConfigError("not a tabular policy file");
  TabularPolicy policy;
  for (const auto& [k, values] : j.at("states").items()) {
    if (!values.is_array() || values.size() != kNumActions) {
      throw ConfigError("policy row must hold one logit per action");
    }
    ActionRow row;
    for (std::size_t i = 0; i < row.size(); ++i) row[i] = values[i].get<double>();
    policy.table_[static_cast<std::uint32_t>(std::stoul(k))] = row;
  }
  return policy;
}

void TabularPolicy::save(const std::filesystem::path& path) const {
  write_file(path, to_json().dump() + "\n");
}

TabularPolicy TabularPolicy::load(const std::filesystem::path& path) {
  try {
    return from_json(nlohmann::json::parse(read_file(path)));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void LearnerConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw ConfigError("learning rate must be non-negative");
  if (!(value_learning_rate >= 0.0)) throw ConfigError("value learning rate must be non-negative");
  if (!(clip > 0.0 && clip < 1.0)) throw ConfigError("clip range must lie in (0, 1)");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("discount must lie in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw ConfigError("GAE lambda must lie in [0, 1]");
  if (rollout_steps < 1 || epochs < 1 || minibatch_size < 1) {
    throw ConfigError("rollout, epoch and minibatch sizes must be positive");
  }
  if (max_episode_steps < 1 || max_episode_steps > kDefaultStepLimit) {
    throw ConfigError("episode length must lie in [1, 500]");
  }
  if (total_steps < 1 || moving_window < 1) throw ConfigError("step budget must be positive");
}

TrainResult train_desk_policy(const EnvConfig& env_config,
                              const std::vector<CurriculumItem>& curriculum,
                              const LearnerConfig& config, std::uint64_t seed) {
  config.validate();
  if (curriculum.empty()) throw ConfigError("curriculum is empty");

  std::mt19937_64 rng(seed);
  EnvConfig ec = env_config;
  ec.step_limit = config.max_episode_steps;
  ec.end_when_plan_exhausted = true;
  GridworldEnv env(ec);

  TrainResult result{TabularPolicy(TabularPolicy::Mode::Sample), {}, 0};
  TabularPolicy& policy = result.policy;
  std::unordered_map<std::uint32_t, double> values;

  struct Transition {
    std::uint32_t key;
    int action;
    double log_prob;
    double reward;
    bool terminal;
    double value;
  };
  std::vector<Transition> batch;
  std::vector<double> advantages;
  std::vector<double> returns;
  std::deque<bool> window;
  int window_successes = 0;
  long episodes = 0;
  bool active = false;
  Observation obs;
  std::uniform_int_distribution<std::size_t> pick(0, curriculum.size() - 1);

  while (result.env_steps < config.total_steps) {
    batch.clear();
    while (static_cast<int>(batch.size()) < config.rollout_steps &&
           result.env_steps < config.total_steps) {
      if (!active) {
        const CurriculumItem& item = curriculum[pick(rng)];
        obs = env.reset(curriculum_target(item), item.start, curriculum_plan(item),
                        derive_seed(seed, static_cast<std::uint64_t>(episodes)));
        active = true;
      }
      const std::uint32_t key = digest_observation(obs).key();
      const ActionRow probs = policy.probabilities(key);
      const int a = sample_index(probs, rng);
      StepResult step = env.step(static_cast<Action>(a));
      ++result.env_steps;
      batch.push_back({key, a, std::log(probs[a]), step.reward, step.done, values[key]});
      obs = std::move(step.observation);
      if (step.done) {
        const bool success = step.info.termination == Termination::Complete &&
                             static_cast<Action>(a) == Action::Done;
        window.push_back(success);
        window_successes += success;
        if (static_cast<int>(window.size()) > config.moving_window) {
          window_successes -= window.front();
          window.pop_front();
        }
        result.curve.push_back({episodes, success,
                                static_cast<double>(window_successes) / window.size(),
                                result.env_steps});
        ++episodes;
        active = false;
      }
    }

    // Generalized advantage estimation, bootstrapping an unfinished episode.
    const std::size_t n = batch.size();
    advantages.assign(n, 0.0);
    returns.assign(n, 0.0);
    double next_value = active ? values[digest_observation(obs).key()] : 0.0;
    double running = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      const Transition& t = batch[i];
      const double live = t.terminal ? 0.0 : 1.0;
      const double delta = t.reward + config.gamma * next_value * live - t.value;
      running = delta + config.gamma * config.gae_lambda * live * running;
      advantages[i] = running;
      returns[i] = running + t.value;
      next_value = t.value;
    }
    const double mean = std::accumulate(advantages.begin(), advantages.end(), 0.0) / n;
    double var = 0.0;
    for (double a : advantages) var += (a - mean) * (a - mean);
    const double scale = 1.0 / (std::sqrt(var / n) + 1e-8);
    for (double& a : advantages) a = (a - mean) * scale;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t begin = 0; begin < n; begin += config.minibatch_size) {
        const std::size_t end = std::min(n, begin + config.minibatch_size);
        // Per-state mean ascent direction of the clipped surrogate plus entropy.
        std::map<std::uint32_t, std::pair<ActionRow, int>> grads;
        for (std::size_t idx = begin; idx < end; ++idx) {
          const std::size_t i = order[idx];
          const Transition& t = batch[i];
          const ActionRow probs = policy.probabilities(t.key);
          auto& [grad, count] = grads[t.key];
          ++count;
          const double ratio = std::exp(std::log(probs[t.action]) - t.log_prob);
          const double adv = advantages[i];
          const bool clipped = (adv > 0.0 && ratio > 1.0 + config.clip) ||
                               (adv < 0.0 && ratio < 1.0 - config.clip);
          double entropy = 0.0;
          for (double p : probs) entropy -= p > 0.0 ? p * std::log(p) : 0.0;
          for (int j = 0; j < kNumActions; ++j) {
            const double onehot = j == t.action ? 1.0 : 0.0;
            if (!clipped) grad[j] += ratio * adv * (onehot - probs[j]);
            if (probs[j] > 0.0) {
              grad[j] -= config.entropy_coef * probs[j] * (std::log(probs[j]) + entropy);
            }
          }
          double& v = values[t.key];
          v += config.value_learning_rate * (returns[i] - v);
        }
        if (config.learning_rate == 0.0) continue;
        for (auto& [key, entry] : grads) {
          ActionRow& row = policy.logits(key);
          for (int j = 0; j < kNumActions; ++j) {
            row[j] += config.learning_rate * entry.first[j] / entry.second;
          }
        }
      }
    }
  }
  policy.set_mode(TabularPolicy::Mode::Greedy);
  return result;
}

long steps_to_reach(const std::vector<CurvePoint>& curve, double threshold, int window) {
  for (const CurvePoint& p : curve) {
    if (p.episode + 1 >= window && p.moving_average >= threshold) return p.env_steps;
  }
  return -1;
}

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "episode_index,success,moving_average\n";
  for (const CurvePoint& p : curve) {
    out += std::to_string(p.episode) + "," + (p.success ? "1" : "0") + "," +
           format_real(p.moving_average) + "\n";
  }
  return out;
}

}  // namespace gridcraft
