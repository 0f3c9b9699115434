// Copyright 2026 The mglab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mglab/harness.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_util.hpp"

namespace mglab {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class HarnessTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("mglab_harness_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  static ExperimentConfig Load(const std::string& text) {
    return LoadExperimentConfig(ConfigMap::FromString(text, "exp.cfg"));
  }

  fs::path root_;
};

int ConfigErrorLine(const std::string& text) {
  try {
    LoadExperimentConfig(ConfigMap::FromString(text, "exp.cfg"));
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(ConfigTest, ErrorsPointAtTheOffendingLine) {
  EXPECT_EQ(ConfigErrorLine("learner.K = 10\nlearner.delta = 2\n"), 2);
  EXPECT_EQ(ConfigErrorLine("# comment\n\nlearner.K = ten\n"), 3);
  EXPECT_EQ(ConfigErrorLine("learner.K = 10\nlerner.eta = 0.5\n"), 2);
  EXPECT_EQ(ConfigErrorLine("algorithm = qlearning\n"), 1);
  EXPECT_EQ(ConfigErrorLine("learner.K = 10\nopponent.switch_at = 4, 3\n"), 2);
  EXPECT_EQ(ConfigErrorLine("game.horizon = 2\ngame.states = 1, 2, 3\n"), 2);
  EXPECT_EQ(ConfigErrorLine("learner.K = 5\nno equals sign here\n"), 2);
  EXPECT_EQ(ConfigErrorLine("learner.K = 5\nlearner.K = 6\n"), 2);
}

TEST(ConfigTest, ParsesValues) {
  const auto c = LoadExperimentConfig(ConfigMap::FromString(
      "game.horizon = 4\ngame.states = 1, 2, 2, 3\nlearner.K = 100\nlearner.eta = 1/H\n"
      "learner.checkpoints = 10, 50, 100\nopponent.kind = switching\nopponent.switch_period = 30\n"
      "seeds = 2..4\nalgorithm = adaptive_meta   # trailing comment\n"));
  EXPECT_EQ(c.dims.states, (std::vector<int>{1, 2, 2, 3, 1}));
  EXPECT_DOUBLE_EQ(c.Eta(), 0.25);
  EXPECT_EQ(c.checkpoints, (std::vector<std::int64_t>{10, 50, 100}));
  EXPECT_EQ(c.switch_at, (std::vector<std::int64_t>{31, 61, 91}));
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{2, 3, 4}));
  EXPECT_EQ(c.algorithm, Algorithm::kAdaptiveMeta);
}

TEST(CsvTest, HeaderIsExact) {
  std::ostringstream out;
  WriteCsv(out, {});
  EXPECT_EQ(out.str(),
            "seed,K,algorithm,opponent.kind,eta,iota,iota_scale,ENR,NR,ExtR_or_NA,C,L,"
            "optimistic_gap,optimism_violations,max_epoch_count,restarts,wall_ms\n");
}

TEST_F(HarnessTest, SingleSeedFixedOpponent) {
  const auto c = Load("learner.K = 64\nseeds = 7\nlearner.iota_scale = 0.1\n");
  const auto rows = RunExperiment(c, root_ / "out");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].seed, 7u);
  ASSERT_TRUE(rows[0].extr.has_value());
  EXPECT_NEAR(rows[0].enr, *rows[0].extr, 1e-6);
  int logs = 0;
  for (const auto& e : fs::directory_iterator(root_ / "out"))
    logs += e.path().extension() == ".log";
  EXPECT_EQ(logs, 1);
  EXPECT_TRUE(fs::exists(root_ / "out" / "game.txt"));
  EXPECT_FALSE(rows[0].wall_ms.has_value());
}

TEST_F(HarnessTest, RepeatedRunsAreByteIdentical) {
  const auto c = Load(
      "learner.K = 300\nseeds = 0..2\nopponent.kind = random_each_switch\n"
      "opponent.switch_at = 100, 200\nalgorithm = adaptive_meta\nlearner.iota_scale = 0.05\n"
      "learner.checkpoints = 100, 300\n");
  RunExperiment(c, root_ / "a");
  RunExperiment(c, root_ / "b");
  EXPECT_EQ(ReadFile(root_ / "a" / "summary.csv"), ReadFile(root_ / "b" / "summary.csv"));
  for (const auto& e : fs::directory_iterator(root_ / "a"))
    EXPECT_TRUE(ReadFile(e.path()) == ReadFile(root_ / "b" / e.path().filename())) << e.path();
}

// Drops the config echo, which legitimately differs between invocations.
std::string WithoutEcho(const std::string& text) {
  std::istringstream in(text);
  std::string line, out;
  while (std::getline(in, line))
    if (line.rfind("config ", 0) != 0) out += line + "\n";
  return out;
}

TEST_F(HarnessTest, RunDependsOnlyOnItsOwnSeed) {
  RunExperiment(Load("learner.K = 50\nseeds = 3\nseed.master = 9\n"), root_ / "one");
  RunExperiment(Load("learner.K = 50\nseeds = 1, 3\nseed.master = 9\n"), root_ / "two");
  const std::string one = WithoutEcho(ReadFile(root_ / "one" / RunLogFileName(0, 3)));
  EXPECT_TRUE(one == WithoutEcho(ReadFile(root_ / "two" / RunLogFileName(1, 3))));
  RunExperiment(Load("learner.K = 50\nseeds = 3\nseed.master = 10\n"), root_ / "other");
  EXPECT_FALSE(one == WithoutEcho(ReadFile(root_ / "other" / RunLogFileName(0, 3))));
}

TEST_F(HarnessTest, RefusesToOverwriteWithoutForce) {
  const auto c = Load("learner.K = 10\n");
  RunExperiment(c, root_ / "out");
  EXPECT_THROW(RunExperiment(c, root_ / "out"), PreconditionError);
  ExperimentOptions force;
  force.force = true;
  EXPECT_NO_THROW(RunExperiment(c, root_ / "out", force));
}

TEST_F(HarnessTest, CheckpointRowsPerSeed) {
  const auto c = Load("learner.K = 512\nlearner.checkpoints = 32, 64, 128, 256, 512\nseeds = 0, 1\n"
                      "learner.iota_scale = 0.05\n");
  const auto rows = RunExperiment(c, root_ / "out");
  ASSERT_EQ(rows.size(), 10u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].seed, i / 5);
    if (i % 5) EXPECT_GT(rows[i].K, rows[i - 1].K);
  }
}

// With iota pinned to the same budget, the first 128 episodes of a 512-episode
// run are exactly a standalone 128-episode run.
TEST_F(HarnessTest, PrefixMatchesStandaloneRunWhenIotaIsPinned) {
  const std::string common =
      "seeds = 4\nlearner.iota_scale = 0.05\nlearner.iota_budget = 512\n"
      "opponent.kind = switching\nopponent.switch_at = 50\n";
  const auto long_rows =
      RunExperiment(Load(common + "learner.K = 512\nlearner.checkpoints = 128, 512\n"), root_ / "long");
  auto short_cfg = Load(common + "learner.K = 128\n");
  short_cfg.switch_at = {50};
  const auto short_rows = RunExperiment(short_cfg, root_ / "short");
  ASSERT_EQ(short_rows.size(), 1u);
  EXPECT_EQ(long_rows[0].K, 128);
  EXPECT_EQ(long_rows[0].enr, short_rows[0].enr);
  EXPECT_EQ(long_rows[0].iota, short_rows[0].iota);
  EXPECT_EQ(long_rows[0].c, short_rows[0].c);
  EXPECT_EQ(long_rows[0].optimistic_gap, short_rows[0].optimistic_gap);
}

TEST_F(HarnessTest, EvaluateSingleEpisodeRun) {
  RunExperiment(Load("learner.K = 1\n"), root_ / "k1");
  const auto rows = EvaluateRunDir(root_ / "k1");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].K, 1);
  const RunLog log = LoadRunLog(root_ / "k1" / RunLogFileName(0, 0));
  EXPECT_EQ(RegretEvaluator(log).Report(1).enr_curve.size(), 1u);
}

TEST_F(HarnessTest, EvaluateIsIdempotentAndMatchesSimulation) {
  const auto sim = RunExperiment(Load("learner.K = 80\nseeds = 0..2\nlearner.iota_scale = 0.1\n"),
                                 root_ / "run");
  const auto a = EvaluateRunDir(root_ / "run");
  const auto b = EvaluateRunDir(root_ / "run");
  std::ostringstream ca, cb, cs;
  WriteCsv(ca, a);
  WriteCsv(cb, b);
  WriteCsv(cs, sim);
  EXPECT_EQ(ca.str(), cb.str());
  EXPECT_EQ(ca.str(), cs.str());
}

TEST_F(HarnessTest, ZeroRewardGameHasZeroRegret) {
  {
    std::ofstream f(root_ / "zero.txt");
    WriteGame(f, testing::ConstantGame(2, 2, 2, 2, 0.0));
  }
  const auto c = Load("game.source = file\ngame.file = " + (root_ / "zero.txt").string() +
                      "\ngame.horizon = 2\nlearner.K = 40\nseeds = 0, 1\n");
  RunExperiment(c, root_ / "run");
  for (const auto& r : EvaluateRunDir(root_ / "run")) {
    EXPECT_EQ(r.enr, 0.0);
    EXPECT_EQ(r.nr, 0.0);
  }
}

TEST_F(HarnessTest, TruncatedLogIsReportedAsCorrupt) {
  RunExperiment(Load("learner.K = 30\n"), root_ / "run");
  const fs::path log = root_ / "run" / RunLogFileName(0, 0);
  const std::string text = ReadFile(log);
  {
    std::ofstream f(log, std::ios::binary | std::ios::trunc);
    f << text.substr(0, text.size() / 2);
  }
  EXPECT_THROW(EvaluateRunDir(root_ / "run"), CorruptLogError);
}

TEST_F(HarnessTest, TimingAddsWallClockColumn) {
  ExperimentOptions opt;
  opt.timing = true;
  const auto rows = RunExperiment(Load("learner.K = 20\n"), root_ / "run", opt);
  ASSERT_TRUE(rows[0].wall_ms.has_value());
  EXPECT_GE(*rows[0].wall_ms, 0.0);
}

}  // namespace
}  // namespace mglab
