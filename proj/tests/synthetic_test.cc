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


#include "sqlret/synthetic.h"

#include <set>
#include <string>

#include <gtest/gtest.h>

#include "sqlret/tokenizer.h"
#include "test_util.h"

namespace sqlret {
namespace {

std::set<std::string> ValueSet(const Dataset& data) {
  std::set<std::string> out;
  for (const Example& ex : data.examples) {
    for (const Condition& c : ex.gold.conditions) {
      out.insert(NormalizeValue(c.value));
    }
  }
  return out;
}

TEST(SyntheticTest, TwelvePatternsRoundRobin) {
  std::vector<LogicalPattern> patterns = DeskScalePatterns();
  ASSERT_EQ(patterns.size(), 12u);
  EXPECT_EQ(std::set<LogicalPattern>(patterns.begin(), patterns.end()).size(),
            12u);
  Dataset data = testing::Synthetic(600, 1);
  PatternHistogram h = ComputePatternHistogram(data);
  for (const LogicalPattern& p : patterns) EXPECT_EQ(h[IdOf(p).value], 50u);
  data.Validate();
}

TEST(SyntheticTest, FirstEightCoverVocabularyOfLastFour) {
  std::vector<LogicalPattern> patterns = DeskScalePatterns();
  std::set<AggOp> aggs;
  std::set<CmpOp> ops;
  for (int i = 0; i < 8; ++i) {
    aggs.insert(patterns[i].agg());
    for (CmpOp op : patterns[i].cond_ops()) ops.insert(op);
  }
  for (int i = 8; i < 12; ++i) {
    EXPECT_TRUE(aggs.count(patterns[i].agg()));
    for (CmpOp op : patterns[i].cond_ops()) EXPECT_TRUE(ops.count(op));
  }
}

TEST(SyntheticTest, AlignedAndDeterministic) {
  Dataset a = testing::Synthetic(100, 5);
  Dataset b = testing::Synthetic(100, 5);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_TRUE(a.examples[i].FullyAligned()) << a.examples[i].question;
    EXPECT_EQ(a.examples[i].question, b.examples[i].question);
    EXPECT_EQ(a.examples[i].gold, b.examples[i].gold);
  }
}

TEST(SyntheticTest, SplitsUseDisjointValues) {
  auto train = ValueSet(testing::Synthetic(600, 1, LexicalSplit::kTrain));
  auto dev = ValueSet(testing::Synthetic(200, 2, LexicalSplit::kDev));
  auto test = ValueSet(testing::Synthetic(200, 3, LexicalSplit::kTest));
  for (const std::string& v : test) {
    EXPECT_FALSE(train.count(v)) << v;
    EXPECT_FALSE(dev.count(v)) << v;
  }
  for (const std::string& v : dev) EXPECT_FALSE(train.count(v)) << v;
}

TEST(SyntheticTest, ParaphrasePairsBalanced) {
  auto pairs = GenerateParaphrasePairs(400, 3, LexicalSplit::kTrain);
  int positives = 0;
  for (const auto& p : pairs) positives += p.paraphrase;
  EXPECT_EQ(positives, 200);
}

TEST(SyntheticTest, SeparablePairs) {
  auto pairs = GenerateSeparablePairs(200, 4);
  for (const auto& p : pairs) {
    auto a = Tokenize(p.first);
    auto b = Tokenize(p.second);
    if (p.paraphrase) {
      EXPECT_EQ(a, b);
    } else {
      std::set<std::string> sa(a.begin(), a.end());
      for (const auto& t : b) EXPECT_FALSE(sa.count(t)) << t;
    }
  }
}

TEST(SyntheticTest, WikiSqlFilesLoadBack) {
  testing::ScopedDir dir("wikisql");
  Dataset data = testing::Synthetic(48, 8);
  WriteWikiSql(data, dir / "q.jsonl", dir / "q.tables.jsonl");
  LoadResult r = LoadWikiSql(dir / "q.jsonl", dir / "q.tables.jsonl");
  ASSERT_EQ(r.dataset.size(), data.size());
  EXPECT_EQ(r.report.unaligned_examples, 0u);
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(r.dataset.examples[i].gold, data.examples[i].gold);
    EXPECT_EQ(r.dataset.SchemaOf(r.dataset.examples[i]).headers,
              data.SchemaOf(data.examples[i]).headers);
  }
}

}  // namespace
}  // namespace sqlret
