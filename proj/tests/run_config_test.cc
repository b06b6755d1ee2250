// Copyright 2026 The sqlret Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "sqlret/run_config.h"

#include <cmath>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sqlret/error.h"
#include "sqlret/report.h"
#include "test_util.h"

namespace sqlret {
namespace {

ErrorCode CodeOf(const std::function<void()>& fn, std::string* message = nullptr) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kEmptyEval;
}

TEST(RunConfigTest, ParsesKeysAndComments) {
  RunConfig c = ParseRunConfig(
      "# comment\n"
      "d_q = 64   # trailing\n"
      "\n"
      "lr_grounder=0.01\n"
      "seed = 5\n");
  EXPECT_EQ(c.model.encoder.d_q, 64);
  EXPECT_EQ(c.train.lr_grounder, 0.01);
  EXPECT_EQ(c.seed, 5u);
  c.PropagateSeed();
  EXPECT_EQ(c.model.encoder.seed, 5u);
  EXPECT_EQ(c.train.seed, 5u);
  EXPECT_EQ(c.pretrain.seed, 5u);
}

TEST(RunConfigTest, UnknownKeyRejected) {
  std::string message;
  EXPECT_EQ(CodeOf([] { ParseRunConfig("learning_rate = 1\n"); }, &message),
            ErrorCode::kConfigError);
  EXPECT_NE(message.find("learning_rate"), std::string::npos);
  EXPECT_EQ(CodeOf([] { ParseRunConfig("d_q = abc\n"); }),
            ErrorCode::kConfigError);
  EXPECT_EQ(CodeOf([] { ParseRunConfig("just text\n"); }),
            ErrorCode::kConfigError);
}

TEST(RunConfigTest, PresetAppliesFirst) {
  RunConfig c = ParseRunConfig("lr_grounder = 0.5\npreset = paper-bert\n");
  EXPECT_EQ(c.train.lr_encoder_retriever, 2e-5);
  EXPECT_EQ(c.train.lr_grounder, 0.5);
  RunConfig d = ParseRunConfig("");
  EXPECT_EQ(d.train.lr_encoder_retriever, 1e-3);
  EXPECT_EQ(d.train.patience, 50);
  EXPECT_EQ(CodeOf([] { ParseRunConfig("preset = huge\n"); }),
            ErrorCode::kConfigError);
}

TEST(RunConfigTest, TextRoundTrip) {
  RunConfig c;
  c.Set("hidden_dim", "17");
  c.Set("unk_dropout", "0.25");
  c.Set("preset", "paper-bert");
  RunConfig back = ParseRunConfig(c.ToText());
  EXPECT_EQ(back.Items(), c.Items());
  EXPECT_EQ(back.model.encoder.hidden_dim, 17);
}

TEST(ReportTest, MeanStd) {
  std::vector<double> lf = {0.49, 0.50, 0.51};
  // population standard deviation, computed directly
  double mean = (0.49 + 0.50 + 0.51) / 3;
  double sd = std::sqrt(((0.49 - mean) * (0.49 - mean) +
                         (0.51 - mean) * (0.51 - mean)) / 3);
  char want[64];
  std::snprintf(want, sizeof(want), "%.3f ± %.3f", mean, sd);
  EXPECT_EQ(FormatMeanStd(lf), want);
  EXPECT_EQ(FormatMeanStd(lf), "0.500 ± 0.008");
  std::vector<double> one = {0.5};
  EXPECT_EQ(FormatMeanStd(one), "0.500");
  EXPECT_EQ(CodeOf([] { FormatMeanStd({}); }), ErrorCode::kEmptyEval);
}

void WriteRun(const std::filesystem::path& dir, const RunConfig& config,
              double lf) {
  std::filesystem::create_directories(dir);
  testing::WriteFile(dir / "config.txt", config.ToText());
  testing::WriteFile(
      dir / "report.jsonl",
      R"({"metric": "LF", "value": )" + std::to_string(lf) +
          R"(, "n": 10, "seed": 1})" + "\n" +
          R"({"metric": "P", "value": 1.0, "n": 10, "seed": 1})" + "\n");
}

TEST(ReportTest, AggregatesRuns) {
  testing::ScopedDir dir("runs");
  std::vector<RunRecord> runs;
  const double lfs[] = {0.49, 0.50, 0.51};
  for (int s = 0; s < 3; ++s) {
    RunConfig c;
    c.seed = s + 1;
    WriteRun(dir / ("s" + std::to_string(s)), c, lfs[s]);
    runs.push_back(ReadRun(dir / ("s" + std::to_string(s))));
  }
  std::string table = AggregateRuns(runs);
  EXPECT_NE(table.find("0.500 ± 0.008"), std::string::npos) << table;
  EXPECT_NE(table.find("1.000 ± 0.000"), std::string::npos) << table;

  RunConfig other;
  other.Set("hidden_dim", "99");
  WriteRun(dir / "odd", other, 0.4);
  runs.push_back(ReadRun(dir / "odd"));
  std::string message;
  EXPECT_EQ(CodeOf([&] { AggregateRuns(runs); }, &message),
            ErrorCode::kConfigMismatch);
  EXPECT_NE(message.find("hidden_dim"), std::string::npos);
}

TEST(ReportTest, MissingReport) {
  testing::ScopedDir dir("missing");
  testing::WriteFile(dir / "config.txt", RunConfig().ToText());
  EXPECT_EQ(CodeOf([&] { ReadRun(dir.path()); }), ErrorCode::kIoError);
}

}  // namespace
}  // namespace sqlret
