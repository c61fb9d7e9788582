/*
 * Copyright 2026 The secagg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include "secagg/harness.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "secagg/error.h"
#include "test_util.h"

namespace secagg {
namespace {

using testing::CodeOf;

ExperimentConfig Small() {
  ExperimentConfig c;
  c.clients = 12;
  c.decryptors = 5;
  c.dropout = 0.1;
  c.len = 16;
  c.iters = 2;
  c.seed = 3;
  return c;
}

std::string ReadFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

std::string TempPath(const std::string& name) { return ::testing::TempDir() + name; }

TEST(ConfigTest, DefaultsMatchTheExperimentGrid) {
  const ExperimentConfig c;
  EXPECT_EQ(c.len, 16000u);
  EXPECT_EQ(c.decryptors, 40u);
  EXPECT_DOUBLE_EQ(c.dropout, 0.05);
  EXPECT_DOUBLE_EQ(c.effective_eta_d(), 0.05);
  EXPECT_NO_THROW(c.Validate());
  // 2k > 0.95 * 40 = 38.
  EXPECT_EQ(c.effective_threshold(), 20u);
}

TEST(ConfigTest, MinimalThresholdAgreesWithIntegerGate) {
  for (uint64_t n = 1; n <= 20; ++n) {
    for (int c10 = 0; c10 <= 5; ++c10) {
      for (int d10 = 0; d10 + c10 < 10; ++d10) {
        uint64_t expected = n + 1;
        for (uint64_t k = 1; k <= n; ++k) {
          if (20 * k > (10 + c10 - d10) * n) {
            expected = k;
            break;
          }
        }
        EXPECT_EQ(MinimalThreshold(n, c10 / 10.0, d10 / 10.0), expected)
            << n << " " << c10 << " " << d10;
      }
    }
  }
}

TEST(ConfigTest, ApplyValues) {
  ExperimentConfig c;
  ApplyConfigValue(c, "clients", "50");
  ApplyConfigValue(c, " decryptors ", " 10 ");
  ApplyConfigValue(c, "threshold", "7");
  ApplyConfigValue(c, "eta-c", "0.1");
  ApplyConfigValue(c, "eta_d", "0.2");
  ApplyConfigValue(c, "mode", "tss");
  ApplyConfigValue(c, "selection", "dynamic");
  ApplyConfigValue(c, "group", "test");
  ApplyConfigValue(c, "probability", "1/4");
  ApplyConfigValue(c, "out", "x.csv");
  EXPECT_EQ(c.clients, 50u);
  EXPECT_EQ(c.decryptors, 10u);
  EXPECT_EQ(c.threshold, 7u);
  EXPECT_DOUBLE_EQ(c.eta_c, 0.1);
  EXPECT_DOUBLE_EQ(c.effective_eta_d(), 0.2);
  EXPECT_EQ(c.mode, CrossCheckMode::kTss);
  EXPECT_EQ(c.selection, SelectionMode::kDynamic);
  EXPECT_EQ(c.group, GroupBackend::kTest);
  EXPECT_EQ(c.select_numerator, 1u);
  EXPECT_EQ(c.select_denominator, 4u);
  EXPECT_EQ(c.out, "x.csv");
}

TEST(ConfigTest, RejectsBadValues) {
  ExperimentConfig c;
  EXPECT_EQ(CodeOf([&] { ApplyConfigValue(c, "colour", "red"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { ApplyConfigValue(c, "clients", "-3"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { ApplyConfigValue(c, "clients", "12x"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { ApplyConfigValue(c, "mode", "two"); }), ErrorCode::kInvalidConfig);
  EXPECT_EQ(CodeOf([&] { ApplyConfigValue(c, "probability", "3"); }), ErrorCode::kInvalidConfig);
}

TEST(ConfigTest, LoadsFlatFile) {
  const std::string path = TempPath("secagg_config.txt");
  {
    std::ofstream f(path);
    f << "# experiment\nclients = 30\n\ndecryptors=6  # committee\nlen = 64\nmode = tss\n";
  }
  ExperimentConfig c;
  LoadConfigFile(c, path);
  EXPECT_EQ(c.clients, 30u);
  EXPECT_EQ(c.decryptors, 6u);
  EXPECT_EQ(c.len, 64u);
  EXPECT_EQ(c.mode, CrossCheckMode::kTss);
  {
    std::ofstream f(path);
    f << "clients 30\n";
  }
  EXPECT_EQ(CodeOf([&] { LoadConfigFile(c, path); }), ErrorCode::kInvalidConfig);
  std::remove(path.c_str());
  EXPECT_EQ(CodeOf([&] { LoadConfigFile(c, path); }), ErrorCode::kInvalidConfig);
}

TEST(ConfigTest, GateViolationRejectedAtParseTime) {
  ExperimentConfig c;
  c.decryptors = 10;
  c.threshold = 3;
  c.eta_c = 0.2;
  c.eta_d = 0.2;
  c.dropout = 0.2;
  // 6 <= (1 + 0.2 - 0.2) * 10.
  EXPECT_EQ(CodeOf([&] { c.Validate(); }), ErrorCode::kInvalidConfig);
  std::ostringstream out, err;
  EXPECT_EQ(CmdRun(c, out, err), kExitConfig);
  EXPECT_NE(err.str().find("config error"), std::string::npos);
  c.threshold = 6;
  EXPECT_NO_THROW(c.Validate());
}

TEST(ConfigTest, OtherInvalidConfigs) {
  ExperimentConfig c = Small();
  c.dropout = 0.3;
  c.eta_d = 0.2;
  EXPECT_EQ(CodeOf([&] { c.Validate(); }), ErrorCode::kInvalidConfig);
  c = Small();
  c.iters = 0;
  EXPECT_EQ(CodeOf([&] { c.Validate(); }), ErrorCode::kInvalidConfig);
  c = Small();
  c.group = GroupBackend::kTest;
  EXPECT_EQ(CodeOf([&] { c.Validate(); }), ErrorCode::kInvalidConfig);
  c.clients = 6;
  c.decryptors = 4;
  EXPECT_NO_THROW(c.Validate());
}

TEST(CmdRunTest, HonestRunWritesCsv) {
  ExperimentConfig c = Small();
  c.out = TempPath("secagg_run.csv");
  std::ostringstream out, err;
  ASSERT_EQ(CmdRun(c, out, err), kExitOk) << err.str();
  EXPECT_NE(out.str().find("outcomes: sum_ok 2, abort 0, wrong_sum 0"), std::string::npos)
      << out.str();
  EXPECT_NE(out.str().find("collection rounds: 2"), std::string::npos);
  const std::string csv = ReadFile(c.out);
  std::ifstream golden(std::string(SECAGG_GOLDEN_DIR) + "/metrics_header.csv");
  std::string header;
  std::getline(golden, header);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), header);
  // Rows for iterations 0, 1 and 2.
  EXPECT_NE(csv.find("\n2,client,"), std::string::npos);

  // Same seed, same bytes.
  const std::string again = TempPath("secagg_run2.csv");
  c.out = again;
  std::ostringstream out2, err2;
  ASSERT_EQ(CmdRun(c, out2, err2), kExitOk);
  EXPECT_EQ(ReadFile(again), csv);
  c.seed = 4;
  std::ostringstream out3, err3;
  ASSERT_EQ(CmdRun(c, out3, err3), kExitOk);
  EXPECT_NE(ReadFile(again), csv);
}

TEST(CmdRunTest, TrialsWriteOneFileEach) {
  ExperimentConfig c = Small();
  c.iters = 1;
  c.trials = 2;
  c.mode = CrossCheckMode::kTss;
  c.out = TempPath("secagg_trials.csv");
  std::ostringstream out, err;
  ASSERT_EQ(CmdRun(c, out, err), kExitOk) << err.str();
  EXPECT_NE(out.str().find("collection rounds: 3"), std::string::npos);
  EXPECT_FALSE(ReadFile(TempPath("secagg_trials-0.csv")).empty());
  EXPECT_FALSE(ReadFile(TempPath("secagg_trials-1.csv")).empty());
}

TEST(CmdRunTest, UnwritableOutputIsAConfigError) {
  ExperimentConfig c = Small();
  c.iters = 1;
  c.out = "/nonexistent-dir/x.csv";
  std::ostringstream out, err;
  EXPECT_EQ(CmdRun(c, out, err), kExitConfig);
}

TEST(CmdAttackTest, InconsistentSetsBelowThreshold) {
  ExperimentConfig c = Small();
  c.decryptors = 6;
  c.threshold = 4;
  c.split = 3;
  std::ostringstream out, err;
  EXPECT_EQ(CmdAttack(c, out, err), kExitOk) << out.str() << err.str();
  EXPECT_NE(out.str().find("view A masks recovered: no"), std::string::npos);
  EXPECT_NE(out.str().find("view B masks recovered: no"), std::string::npos);
  EXPECT_NE(out.str().find("assertion holds"), std::string::npos);
}

TEST(CmdAttackTest, LargePartitionRecoversOnlyItsView) {
  ExperimentConfig c = Small();
  c.clients = 20;
  c.decryptors = 7;
  c.threshold = 4;
  c.dropout = 0.05;
  c.split = 2;
  std::ostringstream out, err;
  EXPECT_EQ(CmdAttack(c, out, err), kExitOk) << out.str() << err.str();
  EXPECT_NE(out.str().find("view A masks recovered: yes"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("view B masks recovered: no"), std::string::npos);
}

TEST(CmdAttackTest, InconsistentModel) {
  ExperimentConfig c = Small();
  c.scenario = "inconsistent-model";
  c.trials = 5;
  std::ostringstream out, err;
  EXPECT_EQ(CmdAttack(c, out, err), kExitOk) << out.str() << err.str();
  EXPECT_NE(out.str().find("wrong_sum in 5/5 trials"), std::string::npos) << out.str();
}

TEST(CmdAttackTest, BadScenario) {
  ExperimentConfig c = Small();
  c.scenario = "replay";
  std::ostringstream out, err;
  EXPECT_EQ(CmdAttack(c, out, err), kExitConfig);
  c.scenario = "inconsistent-sets";
  c.split = c.decryptors;
  EXPECT_EQ(CmdAttack(c, out, err), kExitConfig);
}

ExperimentConfig JoinConfig() {
  ExperimentConfig c = Small();
  c.clients = 10;
  c.decryptors = 4;
  c.threshold = 3;
  c.dropout = 0.0;
  c.selection = SelectionMode::kDynamic;
  return c;
}

TEST(CmdJoinTest, AddsClientsAndDecryptors) {
  ExperimentConfig c = JoinConfig();
  c.new_decryptors = 3;
  std::ostringstream out, err;
  EXPECT_EQ(CmdJoin(c, out, err), kExitOk) << out.str() << err.str();
  EXPECT_NE(out.str().find("joined clients: 11 12"), std::string::npos) << out.str();
  EXPECT_NE(out.str().find("joined decryptors (threshold 5)"), std::string::npos);
  EXPECT_NE(out.str().find("after decryptor join: iteration 3 sum_ok"), std::string::npos);
}

TEST(CmdJoinTest, DegenerateLevelRejected) {
  ExperimentConfig c = JoinConfig();
  c.new_clients = 0;
  c.new_decryptors = 2;
  c.new_threshold = 4;
  std::ostringstream out, err;
  EXPECT_EQ(CmdJoin(c, out, err), kExitConfig);
  EXPECT_NE(out.str().find("decryptor join rejected"), std::string::npos);
}

TEST(CmdJoinTest, RequiresDynamicSelection) {
  ExperimentConfig c = JoinConfig();
  c.selection = SelectionMode::kStatic;
  std::ostringstream out, err;
  EXPECT_EQ(CmdJoin(c, out, err), kExitConfig);
}

}  // namespace
}  // namespace secagg
