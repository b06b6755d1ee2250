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

// Drives the installed binary end to end through the shell.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "gtest/gtest.h"
#include "sqlret/corpus.h"
#include "test_util.h"

namespace sqlret {
namespace {

namespace fs = std::filesystem;
using ::sqlret::testing::ReadFile;
using ::sqlret::testing::ScopedDir;
using ::sqlret::testing::WriteFile;

struct Outcome {
  int status = -1;
  std::string out;
  std::string err;
};

// Runs `sqlret <args>` with stdout and stderr captured into `dir`.
Outcome Sqlret(const fs::path& dir, const std::string& args) {
  const fs::path out = dir / "stdout.txt";
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string("'") + SQLRET_BINARY + "' " + args +
                          " >'" + out.string() + "' 2>'" + err.string() + "'";
  const int raw = std::system(cmd.c_str());
  Outcome o;
  o.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  o.out = ReadFile(out);
  o.err = ReadFile(err);
  return o;
}

std::string Q(const fs::path& p) { return "'" + p.string() + "'"; }

// Small fast model for smoke runs.
const char kTinySet[] =
    " --set embed_dim=6 --set hidden_dim=6 --set attention_dim=6"
    " --set d_q=8 --set d_h=4 --set max_epochs=2 --set eval_every=1";

class CliTest : public ::testing::Test {
 protected:
  void Generate(const std::string& name, int count, int seed,
                const std::string& split) {
    const Outcome o = Sqlret(dir_.path(),
                          "generate --kind questions --count " +
                              std::to_string(count) + " --seed " +
                              std::to_string(seed) + " --split " + split +
                              " --out " + Q(dir_ / name));
    ASSERT_EQ(o.status, 0) << o.err;
    const Outcome i = Sqlret(dir_.path(), "ingest --questions " +
                                           Q(dir_ / (name + ".jsonl")) +
                                           " --tables " +
                                           Q(dir_ / (name + ".tables.jsonl")) +
                                           " --out " + Q(dir_ / (name + ".ds")));
    ASSERT_EQ(i.status, 0) << i.err;
  }

  ScopedDir dir_{"cli"};
};

TEST_F(CliTest, PipelineProducesReports) {
  Generate("train", 36, 1, "train");
  Generate("dev", 12, 2, "dev");
  Generate("test", 12, 3, "test");
  for (int seed : {1, 2}) {
    const fs::path run = dir_ / ("run" + std::to_string(seed));
    const Outcome t =
        Sqlret(dir_.path(), "train --train " + Q(dir_ / "train.ds") + " --dev " +
                             Q(dir_ / "dev.ds") + " --seed " +
                             std::to_string(seed) + kTinySet + " --out " +
                             Q(run));
    ASSERT_EQ(t.status, 0) << t.err;
    EXPECT_TRUE(fs::exists(run / "best.ckpt"));
    EXPECT_TRUE(fs::exists(run / "train_log.jsonl"));
    ASSERT_TRUE(fs::exists(run / "config.txt"));
    EXPECT_NE(ReadFile(run / "config.txt").find("seed = " + std::to_string(seed)),
              std::string::npos)
        << ReadFile(run / "config.txt");

    const Outcome e = Sqlret(dir_.path(), "eval --checkpoint " +
                                           Q(run / "best.ckpt") +
                                           " --retrieval-set " +
                                           Q(dir_ / "train.ds") + " --test " +
                                           Q(dir_ / "test.ds"));
    ASSERT_EQ(e.status, 0) << e.err;
    EXPECT_NE(e.out.find("LF"), std::string::npos);
    EXPECT_TRUE(fs::exists(run / "report.jsonl"));
    EXPECT_TRUE(fs::exists(run / "predictions.jsonl"));
  }
  const Outcome r = Sqlret(dir_.path(), "report " + Q(dir_ / "run1") + " " +
                                         Q(dir_ / "run2") + " --out " +
                                         Q(dir_ / "summary.txt"));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_NE(r.out.find("±"), std::string::npos) << r.out;
  EXPECT_EQ(ReadFile(dir_ / "summary.txt"), r.out);
}

TEST_F(CliTest, ReportRejectsMixedConfigs) {
  Generate("train", 24, 1, "train");
  Generate("test", 12, 3, "test");
  for (const char* hidden : {"6", "7"}) {
    const fs::path run = dir_ / (std::string("h") + hidden);
    std::string set = kTinySet;
    set += std::string(" --set hidden_dim=") + hidden;
    ASSERT_EQ(Sqlret(dir_.path(), "train --train " + Q(dir_ / "train.ds") + set +
                                   " --out " + Q(run))
                  .status,
              0);
    ASSERT_EQ(Sqlret(dir_.path(), "eval --checkpoint " + Q(run / "best.ckpt") +
                                   " --retrieval-set " + Q(dir_ / "train.ds") +
                                   " --test " + Q(dir_ / "test.ds"))
                  .status,
              0);
  }
  const Outcome r =
      Sqlret(dir_.path(), "report " + Q(dir_ / "h6") + " " + Q(dir_ / "h7"));
  EXPECT_EQ(r.status, 28) << r.err;
  EXPECT_NE(r.err.find("hidden_dim"), std::string::npos) << r.err;
}

TEST_F(CliTest, CorruptLineIsNamed) {
  Generate("train", 10, 1, "train");
  std::string text = ReadFile(dir_ / "train.jsonl");
  std::size_t pos = 0;
  for (int line = 1; line < 7; ++line) pos = text.find('\n', pos) + 1;
  text.insert(pos, "{not json\n");
  WriteFile(dir_ / "bad.jsonl", text);
  const Outcome o = Sqlret(dir_.path(), "ingest --questions " +
                                         Q(dir_ / "bad.jsonl") + " --tables " +
                                         Q(dir_ / "train.tables.jsonl") +
                                         " --out " + Q(dir_ / "bad.ds"));
  EXPECT_EQ(o.status, 10);
  EXPECT_NE(o.err.find("error: MalformedRecord:"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("bad.jsonl:7:"), std::string::npos) << o.err;
}

TEST_F(CliTest, ReingestIsByteIdentical) {
  Generate("train", 30, 4, "train");
  const std::string first = ReadFile(dir_ / "train.ds");
  const Outcome o = Sqlret(dir_.path(), "ingest --questions " +
                                         Q(dir_ / "train.jsonl") + " --tables " +
                                         Q(dir_ / "train.tables.jsonl") +
                                         " --out " + Q(dir_ / "again.ds"));
  ASSERT_EQ(o.status, 0) << o.err;
  EXPECT_EQ(ReadFile(dir_ / "again.ds"), first);
  EXPECT_NE(o.out.find("30 examples"), std::string::npos) << o.out;
}

TEST_F(CliTest, SubsetStrategies) {
  Generate("pool", 120, 5, "train");
  const Outcome r = Sqlret(dir_.path(), "subset --dataset " + Q(dir_ / "pool.ds") +
                                         " --strategy random --n 17 --out " +
                                         Q(dir_ / "r.ds"));
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(ReadDataset(dir_ / "r.ds").size(), 17u);

  const Outcome u = Sqlret(dir_.path(), "subset --dataset " + Q(dir_ / "pool.ds") +
                                         " --strategy uniform --top 12"
                                         " --per-pattern 3 --out " +
                                         Q(dir_ / "u.ds"));
  ASSERT_EQ(u.status, 0) << u.err;
  EXPECT_EQ(ReadDataset(dir_ / "u.ds").size(), 36u);

  const Outcome too_many =
      Sqlret(dir_.path(), "subset --dataset " + Q(dir_ / "pool.ds") +
                           " --strategy uniform --top 12 --per-pattern 500"
                           " --out " + Q(dir_ / "x.ds"));
  EXPECT_EQ(too_many.status, 14) << too_many.err;
  EXPECT_FALSE(fs::exists(dir_ / "x.ds"));
}

TEST_F(CliTest, ExitCodes) {
  const Outcome missing = Sqlret(dir_.path(), "ingest --questions " +
                                               Q(dir_ / "nope.jsonl") +
                                               " --tables " + Q(dir_ / "nope") +
                                               " --out " + Q(dir_ / "o.ds"));
  EXPECT_EQ(missing.status, 12);
  EXPECT_NE(missing.err.find("error: IoError:"), std::string::npos);

  EXPECT_EQ(Sqlret(dir_.path(), "ingest --questions").status, 1);
  EXPECT_EQ(Sqlret(dir_.path(), "no-such-command").status, 1);
  EXPECT_EQ(Sqlret(dir_.path(), "--help").status, 0);

  Generate("train", 12, 1, "train");
  const Outcome bad_key =
      Sqlret(dir_.path(), "train --train " + Q(dir_ / "train.ds") +
                           " --set no_such_key=3 --out " + Q(dir_ / "run"));
  EXPECT_EQ(bad_key.status, 27);
  EXPECT_NE(bad_key.err.find("no_such_key"), std::string::npos) << bad_key.err;

  WriteDataset(Dataset(), dir_ / "empty.ds");
  const Outcome t = Sqlret(dir_.path(), "train --train " + Q(dir_ / "train.ds") +
                                         kTinySet + " --out " +
                                         Q(dir_ / "run"));
  ASSERT_EQ(t.status, 0) << t.err;
  const Outcome empty =
      Sqlret(dir_.path(), "eval --checkpoint " + Q(dir_ / "run" / "best.ckpt") +
                           " --retrieval-set " + Q(dir_ / "train.ds") +
                           " --test " + Q(dir_ / "empty.ds"));
  EXPECT_EQ(empty.status, 24) << empty.err;
}

}  // namespace
}  // namespace sqlret
