#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string_view>

#include "gridcraft/env.hpp"

namespace gridcraft {

class Policy {
 public:
  virtual ~Policy() = default;
  virtual std::string_view name() const = 0;
  // Called before every episode.
  virtual void begin_episode(std::uint64_t /*seed*/) {}
  virtual Action act(const Observation& obs) = 0;
};

// Scripted builder that executes every subtask it is given: walk to a
// vantage pose, aim, select the colour, act, then press DONE.
class OraclePolicy : public Policy {
 public:
  std::string_view name() const override { return "oracle"; }
  void begin_episode(std::uint64_t seed) override;
  Action act(const Observation& obs) override;

  // Set when no vantage pose for the current subtask is reachable.
  bool stuck() const noexcept { return stuck_; }

 private:
  std::deque<Action> queue_;
  std::deque<Action> cleanup_;
  std::optional<Subtask> planned_for_;
  bool stuck_ = false;
};

struct SubtaskScript {
  // Walk, aim and act; ends with the PLACE or BREAK itself.
  std::vector<Action> approach;
  // Undo helper blocks placed under the agent's feet on the way up.
  std::vector<Action> cleanup;
};

// Actions that carry out `subtask` from `pose`. When no vantage is reachable
// on foot the agent pillars up (PLACE under its feet) by up to three cells
// and breaks the pillar again afterwards. Does not include colour selection.
std::optional<SubtaskScript> plan_subtask_actions(const VoxelGrid& grid, const AgentPose& pose,
                                                  const Subtask& subtask);

class RandomPolicy : public Policy {
 public:
  std::string_view name() const override { return "random"; }
  void begin_episode(std::uint64_t seed) override { rng_.seed(seed); }
  Action act(const Observation& obs) override;

 private:
  std::mt19937_64 rng_;
};

class NoopPolicy : public Policy {
 public:
  std::string_view name() const override { return "noop"; }
  Action act(const Observation&) override { return Action::Noop; }
};

}  // namespace gridcraft
