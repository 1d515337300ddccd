#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "gridcraft/cli.hpp"
#include "gridcraft/env.hpp"
#include "gridcraft/task_io.hpp"
#include "support.hpp"

using namespace gridcraft;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "gridcraft_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST(Cli, PlanReportsNoViolations) {
  const CliResult r = cli({"plan", "--task", test_support::fixture("flying_floater")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("0 violations"), std::string::npos);
  EXPECT_NE(r.out.find("final equals target: yes"), std::string::npos);
}

TEST(Cli, RunOracleOnFlyingFixture) {
  const fs::path out = scratch("run.json");
  const CliResult r = cli({"run", "--task", test_support::fixture("flying_bridge"), "--policy", "oracle",
                           "--seed", "3", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const EpisodeRecord rec = EpisodeRecord::from_json(nlohmann::json::parse(read_file(out)));
  EXPECT_EQ(rec.termination, Termination::Complete);
  EXPECT_EQ(rec.f1, 1.0);
  EXPECT_EQ(rec.steps.back().action, Action::Done);

  const CliResult shown = cli({"render", "--record", out.string()});
  EXPECT_EQ(shown.code, 0);
  EXPECT_NE(shown.out.find("y=0"), std::string::npos);
}

TEST(Cli, PreprocessAugmentsEveryPermutation) {
  const std::string dialog = std::string(GRIDCRAFT_DATA_DIR) + "/dialogs/one_pair.jsonl";
  const fs::path out = scratch("pairs.jsonl");
  CliResult r = cli({"preprocess", "--input", dialog, "--augment-colors", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(read_file(out)), 720u);
  r = cli({"preprocess", "--input", dialog});
  EXPECT_EQ(count_lines(r.out), 1u);
}

TEST(Cli, EvalWritesReport) {
  const fs::path out = scratch("eval.json");
  const CliResult r = cli({"eval", "--tasks-dir", test_support::fixtures_dir(), "--policy", "oracle",
                           "--seed", "1", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(read_file(out));
  EXPECT_EQ(j["all"].get<double>(), 1.0);
  EXPECT_EQ(j["tasks"].size(), 15u);
}

TEST(Cli, Errors) {
  EXPECT_NE(cli({}).code, 0);
  EXPECT_NE(cli({"fly"}).code, 0);
  EXPECT_NE(cli({"plan"}).code, 0);
  EXPECT_NE(cli({"run", "--task", test_support::fixture("single_block"), "--policy", "oracle"}).code, 0)
      << "a seed is required";
  CliResult r = cli({"run", "--task", test_support::fixture("single_block"), "--policy", "trained",
                     "--seed", "1"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("gridcraft: error:"), std::string::npos);
  r = cli({"run", "--task", test_support::fixture("single_block"), "--seed", "1", "--zone", "5,3,5"});
  EXPECT_EQ(r.code, 1);
}
