#include <gtest/gtest.h>

#include <filesystem>

#include "gridcraft/error.hpp"
#include "gridcraft/evaluation.hpp"
#include "gridcraft/learner.hpp"

using namespace gridcraft;

namespace {

constexpr Dims kDesk{5, 3, 5};

std::vector<CurriculumItem> desk_curriculum(std::uint64_t seed) {
  return generate_subtask_curriculum(curriculum_gen_params(kDesk), 1000, seed,
                                     CurriculumFilter::PlaceOnly);
}

double mean_success(const std::vector<CurvePoint>& curve, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += curve[i].success;
  return s / static_cast<double>(to - from);
}

}  // namespace

TEST(Digest, KeyRoundTrip) {
  for (int f = -5; f <= 5; f += 2) {
    for (int up = -5; up <= 5; up += 5) {
      for (int pitch = -2; pitch <= 2; ++pitch) {
        for (int color = 0; color < 7; ++color) {
          Digest d{f, -f, up, pitch, 1 + (color % 2), color, color == 0, color % 3};
          EXPECT_EQ(Digest::from_key(d.key()), d);
        }
      }
    }
  }
}

TEST(Digest, FrameAndMasking) {
  Observation obs{VoxelGrid(kDesk), AgentPose{{0, 0, 0}, 1, 0}, {}, false, Color::Blue,
                  Subtask::place({1, 0, 3}, Color::Red, Purpose::Target), 0};
  Digest d = digest_observation(obs);
  EXPECT_EQ(d.forward, 3);   // facing +z
  EXPECT_EQ(d.right, -1);    // right of +z is -x
  EXPECT_EQ(d.kind, 1);
  EXPECT_EQ(d.color, color_index(Color::Red));
  EXPECT_FALSE(d.color_match);
  obs.selected = Color::Red;
  d = digest_observation(obs);
  EXPECT_EQ(d.color, 0);
  EXPECT_TRUE(d.color_match);
  obs.grid.set({1, 0, 3}, Color::Green);
  EXPECT_EQ(digest_observation(obs).cell, 2);
  obs.grid.set({1, 0, 3}, Color::Red);
  EXPECT_EQ(digest_observation(obs).cell, 1);
}

TEST(Learner, ConfigErrors) {
  LearnerConfig c;
  c.learning_rate = -0.1;
  EXPECT_THROW(c.validate(), ConfigError);
  c = LearnerConfig();
  c.clip = 0.0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = LearnerConfig();
  c.gamma = 1.5;
  EXPECT_THROW(c.validate(), ConfigError);
  c = LearnerConfig();
  c.minibatch_size = 0;
  EXPECT_THROW(c.validate(), ConfigError);
  c = LearnerConfig();
  c.learning_rate = 0.0;
  EXPECT_NO_THROW(c.validate());
  EXPECT_THROW(train_desk_policy(EnvConfig{}, {}, LearnerConfig{}, 1), ConfigError);
}

TEST(Learner, DeterministicAndSerializable) {
  LearnerConfig c;
  c.total_steps = 20'000;
  const auto items = desk_curriculum(4);
  const TrainResult a = train_desk_policy(EnvConfig{}, items, c, 4);
  const TrainResult b = train_desk_policy(EnvConfig{}, items, c, 4);
  EXPECT_EQ(a.policy.to_json().dump(), b.policy.to_json().dump());
  EXPECT_EQ(curve_to_csv(a.curve), curve_to_csv(b.curve));
  const auto reloaded = TabularPolicy::from_json(nlohmann::json::parse(a.policy.to_json().dump()));
  EXPECT_EQ(reloaded.to_json().dump(), a.policy.to_json().dump());
  EXPECT_EQ(curve_to_csv({{0, true, 1.0, 10}}).substr(0, 32), "episode_index,success,moving_ave");
}

TEST(Learner, ZeroLearningRateLeavesLogitsAlone) {
  LearnerConfig c;
  c.learning_rate = 0.0;
  c.total_steps = 20'000;
  const TrainResult r = train_desk_policy(EnvConfig{}, desk_curriculum(2), c, 2);
  for (const auto& [key, row] : r.policy.to_json()["states"].items()) {
    for (double v : row) EXPECT_EQ(v, 0.0) << key;
  }
  EXPECT_LT(mean_success(r.curve, 0, r.curve.size()), 0.2);
}

TEST(Learner, ImprovesOnTheDesk) {
  const LearnerConfig c;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const TrainResult r = train_desk_policy(EnvConfig{}, desk_curriculum(seed), c, seed);
    const std::size_t n = r.curve.size();
    ASSERT_GT(n, 100u);
    EXPECT_GT(mean_success(r.curve, n - n / 10, n), mean_success(r.curve, 0, n / 10)) << seed;
  }
}

TEST(Learner, StepsToReach) {
  std::vector<CurvePoint> curve;
  for (int i = 0; i < 10; ++i) curve.push_back({i, i >= 5, 0.0, 10L * (i + 1)});
  for (std::size_t i = 0; i < curve.size(); ++i) {
    double s = 0;
    const std::size_t lo = i + 1 >= 4 ? i + 1 - 4 : 0;
    for (std::size_t k = lo; k <= i; ++k) s += curve[k].success;
    curve[i].moving_average = s / static_cast<double>(i + 1 - lo);
  }
  EXPECT_EQ(steps_to_reach(curve, 1.0, 4), 90);
  EXPECT_EQ(steps_to_reach(curve, 1.1, 4), -1);
}
