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


#include "sqlret/corpus.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sqlret/error.h"
#include "sqlret/tokenizer.h"
#include "test_util.h"

namespace sqlret {
namespace {

using testing::ReadFile;
using testing::ScopedDir;
using testing::WriteFile;

const char kTables[] =
    R"({"id": "t1", "header": ["Player", "Country", "Points"], "rows": []})"
    "\n"
    R"({"id": "t2", "header": ["Team", "Year"]})"
    "\n";

std::string QuestionLine(const std::string& question, const std::string& table,
                         const std::string& sql) {
  return R"({"question": ")" + question + R"(", "table_id": ")" + table +
         R"(", "sql": )" + sql + "}\n";
}

std::string GoodQuestions(int n) {
  std::string out;
  for (int i = 0; i < n; ++i) {
    out += QuestionLine(
        "How many points did player " + std::to_string(i) + " score?", "t1",
        R"({"sel": 2, "agg": 0, "conds": [[0, 0, ")" + std::to_string(i) +
            R"("]]})");
  }
  return out;
}

ErrorCode CodeOf(const std::function<void()>& fn, std::string* message) {
  try {
    fn();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kConfigError;
}

// Dataset with `counts[i]` examples of pattern `ids[i]`, on one table.
Dataset WithCounts(const std::vector<int>& ids,
                   const std::vector<std::size_t>& counts) {
  Dataset data;
  data.schemas["t"] = TableSchema{"t", {"a", "b", "c", "d", "e"}};
  int serial = 0;
  for (std::size_t p = 0; p < ids.size(); ++p) {
    const LogicalPattern& pattern = PatternOf(PatternId{ids[p]});
    for (std::size_t k = 0; k < counts[p]; ++k) {
      SqlQuery q;
      q.agg = pattern.agg();
      std::string question = "q" + std::to_string(serial);
      for (int c = 0; c < pattern.num_conditions(); ++c) {
        std::string value = "v" + std::to_string(c);
        q.conditions.push_back({c + 1, pattern.cond_ops()[c], value});
        question += " " + value;
      }
      data.examples.push_back(
          MakeExample("e" + std::to_string(serial), question, "t", q));
      ++serial;
    }
  }
  return data;
}

TEST(LoadWikiSqlTest, LoadsRecords) {
  ScopedDir dir("load");
  WriteFile(dir / "q.jsonl", GoodQuestions(5));
  WriteFile(dir / "t.jsonl", kTables);
  LoadResult r = LoadWikiSql(dir / "q.jsonl", dir / "t.jsonl");
  EXPECT_EQ(r.dataset.size(), 5u);
  EXPECT_EQ(r.report.loaded, 5u);
  EXPECT_EQ(r.report.unaligned_examples, 0u);
  EXPECT_EQ(r.dataset.examples[2].id, "q:3");
  EXPECT_EQ(r.dataset.examples[2].value_spans[0], (ValueSpan{5, 5}));
  EXPECT_EQ(r.dataset.SchemaOf(r.dataset.examples[0]).headers.size(), 3u);
}

TEST(LoadWikiSqlTest, EmptyFile) {
  ScopedDir dir("empty");
  WriteFile(dir / "q.jsonl", "");
  WriteFile(dir / "t.jsonl", kTables);
  EXPECT_TRUE(LoadWikiSql(dir / "q.jsonl", dir / "t.jsonl").dataset.empty());
}

TEST(LoadWikiSqlTest, CorruptLineIsNamed) {
  ScopedDir dir("corrupt");
  std::string text = GoodQuestions(6) + "{\"question\": oops\n" +
                     GoodQuestions(2);
  WriteFile(dir / "q.jsonl", text);
  WriteFile(dir / "t.jsonl", kTables);
  std::string message;
  EXPECT_EQ(CodeOf([&] { LoadWikiSql(dir / "q.jsonl", dir / "t.jsonl"); },
                   &message),
            ErrorCode::kMalformedRecord);
  EXPECT_NE(message.find("q.jsonl:7:"), std::string::npos) << message;
}

TEST(LoadWikiSqlTest, BadColumnAndUnknownTable) {
  ScopedDir dir("bad");
  WriteFile(dir / "t.jsonl", kTables);
  WriteFile(dir / "q.jsonl",
            QuestionLine("x", "t2", R"({"sel": 2, "agg": 0, "conds": []})"));
  std::string message;
  EXPECT_EQ(CodeOf([&] { LoadWikiSql(dir / "q.jsonl", dir / "t.jsonl"); },
                   &message),
            ErrorCode::kMalformedRecord);
  EXPECT_NE(message.find(":1:"), std::string::npos);
  WriteFile(dir / "q.jsonl",
            QuestionLine("x", "t9", R"({"sel": 0, "agg": 0, "conds": []})"));
  EXPECT_EQ(CodeOf([&] { LoadWikiSql(dir / "q.jsonl", dir / "t.jsonl"); },
                   nullptr),
            ErrorCode::kMalformedRecord);
}

TEST(LoadWikiSqlTest, MissingFile) {
  ScopedDir dir("missing");
  EXPECT_EQ(CodeOf([&] { LoadWikiSql(dir / "no.jsonl", dir / "no2.jsonl"); },
                   nullptr),
            ErrorCode::kIoError);
}

TEST(LoadWikiSqlTest, DuplicateWhereColumnsDropped) {
  ScopedDir dir("dup");
  WriteFile(dir / "t.jsonl", kTables);
  WriteFile(dir / "q.jsonl",
            GoodQuestions(2) +
                QuestionLine("a b", "t1",
                             R"({"sel": 2, "agg": 0, "conds": [[0, 0, "a"],)"
                             R"( [0, 1, "b"]]})") +
                GoodQuestions(1));
  LoadResult r = LoadWikiSql(dir / "q.jsonl", dir / "t.jsonl");
  EXPECT_EQ(r.dataset.size(), 3u);
  EXPECT_EQ(r.report.lines, 4u);
  EXPECT_EQ(r.report.dropped_duplicate_columns, 1u);
}

TEST(LoadWikiSqlTest, UnalignedCounted) {
  ScopedDir dir("unaligned");
  WriteFile(dir / "t.jsonl", kTables);
  WriteFile(dir / "q.jsonl",
            QuestionLine("who is from korea", "t1",
                         R"({"sel": 0, "agg": 0, "conds": [[1, 0, "Korea"],)"
                         R"( [2, 1, "xyz"]]})"));
  LoadResult r = LoadWikiSql(dir / "q.jsonl", dir / "t.jsonl");
  EXPECT_EQ(r.report.unaligned_examples, 1u);
  EXPECT_EQ(r.report.unaligned_conditions, 1u);
  EXPECT_FALSE(r.dataset.examples[0].FullyAligned());
}

TEST(ValueSpanTest, Cases) {
  std::vector<std::string> tokens = Tokenize("Who won in South Korea in 2004");
  EXPECT_EQ(FindValueSpan(tokens, "south korea"), (ValueSpan{3, 4}));
  EXPECT_EQ(FindValueSpan(tokens, "Who won in South Korea in 2004"),
            (ValueSpan{0, static_cast<int>(tokens.size()) - 1}));
  EXPECT_EQ(FindValueSpan(tokens, "xyz"), std::nullopt);
  // first occurrence wins
  EXPECT_EQ(FindValueSpan(tokens, "in"), (ValueSpan{2, 2}));
}

TEST(ValueSpanTest, SpanReproducesValue) {
  Dataset data = testing::Synthetic(120, 4);
  for (const Example& ex : data.examples) {
    ASSERT_TRUE(ex.FullyAligned()) << ex.question;
    for (std::size_t i = 0; i < ex.value_spans.size(); ++i) {
      const ValueSpan& s = *ex.value_spans[i];
      ASSERT_LE(0, s.begin);
      ASSERT_LE(s.begin, s.end);
      ASSERT_LT(s.end, static_cast<int>(ex.tokens.size()));
      std::string joined;
      for (int t = s.begin; t <= s.end; ++t) {
        joined += (t > s.begin ? " " : "") + ex.tokens[t];
      }
      std::string value;
      for (const std::string& t : Tokenize(ex.gold.conditions[i].value)) {
        value += (value.empty() ? "" : " ") + t;
      }
      EXPECT_EQ(joined, value);
    }
  }
}

TEST(HistogramTest, Cases) {
  EXPECT_EQ(ComputePatternHistogram(Dataset{}),
            PatternHistogram(kTaxonomySize, 0));
  Dataset same = WithCounts({7}, {3});
  PatternHistogram h = ComputePatternHistogram(same);
  EXPECT_EQ(h[7], 3u);
  EXPECT_EQ(std::accumulate(h.begin(), h.end(), std::size_t{0}), 3u);
}

TEST(HistogramTest, SumsToSize) {
  Dataset data = testing::Synthetic(97, 2);
  PatternHistogram h = ComputePatternHistogram(data);
  EXPECT_EQ(std::accumulate(h.begin(), h.end(), std::size_t{0}), data.size());
}

TEST(TopPatternsTest, OrderAndTies) {
  Dataset data = WithCounts({5, 3, 9, 1}, {2, 4, 4, 1});
  std::vector<PatternId> top = TopPatterns(ComputePatternHistogram(data), 3);
  ASSERT_EQ(top.size(), 3u);
  EXPECT_EQ(top[0].value, 3);
  EXPECT_EQ(top[1].value, 9);
  EXPECT_EQ(top[2].value, 5);
}

TEST(SampleRandomTest, Cases) {
  Dataset data = testing::Synthetic(50, 1);
  EXPECT_EQ(SampleRandom(data, 0, 1).size(), 0u);
  Dataset all = SampleRandom(data, 50, 1);
  std::multiset<std::string> a, b;
  for (auto& ex : all.examples) a.insert(ex.id);
  for (auto& ex : data.examples) b.insert(ex.id);
  EXPECT_EQ(a, b);
  EXPECT_EQ(CodeOf([&] { SampleRandom(data, 51, 1); }, nullptr),
            ErrorCode::kSampleTooLarge);
}

TEST(SampleRandomTest, DeterministicAndDistinct) {
  Dataset data = testing::Synthetic(200, 1);
  Dataset s1 = SampleRandom(data, 40, 9);
  Dataset s2 = SampleRandom(data, 40, 9);
  Dataset s3 = SampleRandom(data, 40, 10);
  std::vector<std::string> i1, i2, i3;
  for (auto& ex : s1.examples) i1.push_back(ex.id);
  for (auto& ex : s2.examples) i2.push_back(ex.id);
  for (auto& ex : s3.examples) i3.push_back(ex.id);
  EXPECT_EQ(i1, i2);
  EXPECT_NE(i1, i3);
  EXPECT_EQ(std::set<std::string>(i1.begin(), i1.end()).size(), 40u);
}

TEST(SampleUniformTest, Insufficient) {
  Dataset data = WithCounts({1, 2}, {5, 9});
  std::vector<PatternId> ids = {PatternId{1}, PatternId{2}};
  std::string message;
  EXPECT_EQ(CodeOf([&] { SampleUniform(data, ids, 7, 1); }, &message),
            ErrorCode::kInsufficientPattern);
  EXPECT_NE(message.find("available 5"), std::string::npos);
}

// Random histograms: uniform output is flat, hybrid output meets floors and
// keeps the source ordering above the floor.
TEST(SamplerPropertyTest, RandomConfigurations) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    int n_patterns = 2 + rng() % 6;
    std::vector<int> ids;
    std::vector<std::size_t> counts;
    std::set<int> used;
    while (static_cast<int>(ids.size()) < n_patterns) {
      int id = rng() % kTaxonomySize;
      if (!used.insert(id).second) continue;
      ids.push_back(id);
      counts.push_back(3 + rng() % 60);
    }
    Dataset data = WithCounts(ids, counts);
    std::vector<PatternId> pids;
    for (int id : ids) pids.push_back(PatternId{id});
    std::size_t min_count = *std::min_element(counts.begin(), counts.end());

    std::size_t per = 1 + rng() % min_count;
    PatternHistogram u = ComputePatternHistogram(
        SampleUniform(data, pids, per, trial));
    for (int id = 0; id < kTaxonomySize; ++id) {
      EXPECT_EQ(u[id], used.count(id) ? per : 0u);
    }

    std::size_t floor = 1 + rng() % min_count;
    double ratio = std::uniform_real_distribution<double>(0.01, 1.0)(rng);
    PatternHistogram h = ComputePatternHistogram(
        SampleHybrid(data, pids, ratio, floor, trial));
    for (std::size_t p = 0; p < ids.size(); ++p) {
      std::size_t want = std::max<std::size_t>(
          floor, static_cast<std::size_t>(std::llround(counts[p] * ratio)));
      EXPECT_EQ(h[ids[p]], want);
      EXPECT_GE(h[ids[p]], floor);
      for (std::size_t q = 0; q < ids.size(); ++q) {
        if (counts[p] > counts[q]) EXPECT_GE(h[ids[p]], h[ids[q]]);
      }
    }
  }
}

TEST(SampleHybridTest, AllAtFloor) {
  Dataset data = WithCounts({1, 2, 3}, {20, 30, 40});
  std::vector<PatternId> ids = {PatternId{1}, PatternId{2}, PatternId{3}};
  EXPECT_EQ(SampleHybrid(data, ids, 1e-6, 4, 1).size(), 12u);
}

TEST(SampleHybridTest, Deterministic) {
  Dataset data = WithCounts({1, 2, 3}, {20, 30, 40});
  std::vector<PatternId> ids = {PatternId{1}, PatternId{2}, PatternId{3}};
  Dataset a = SampleHybrid(data, ids, 0.3, 5, 8);
  Dataset b = SampleHybrid(data, ids, 0.3, 5, 8);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.examples[i].id, b.examples[i].id);
  }
}

TEST(ArtifactTest, ByteIdenticalRoundTrip) {
  ScopedDir dir("artifact");
  Dataset data = testing::Synthetic(30, 3);
  WriteDataset(data, dir / "a.jsonl");
  Dataset back = ReadDataset(dir / "a.jsonl");
  ASSERT_EQ(back.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(back.examples[i].id, data.examples[i].id);
    EXPECT_EQ(back.examples[i].gold, data.examples[i].gold);
    EXPECT_EQ(back.examples[i].tokens, data.examples[i].tokens);
    EXPECT_EQ(back.examples[i].value_spans, data.examples[i].value_spans);
  }
  WriteDataset(back, dir / "b.jsonl");
  EXPECT_EQ(ReadFile(dir / "a.jsonl"), ReadFile(dir / "b.jsonl"));
}

TEST(ArtifactTest, RejectsForeignFile) {
  ScopedDir dir("foreign");
  WriteFile(dir / "x.jsonl", "{\"hello\": 1}\n");
  EXPECT_EQ(CodeOf([&] { ReadDataset(dir / "x.jsonl"); }, nullptr),
            ErrorCode::kMalformedRecord);
}

TEST(UnionTest, KeepsFirstById) {
  Dataset a = WithCounts({1}, {3});
  Dataset b = WithCounts({2}, {5});
  Dataset u = UnionById(a, b);
  EXPECT_EQ(u.size(), 5u);  // ids e0..e2 collide
  EXPECT_EQ(u.examples[0].pattern().value, 1);
  EXPECT_EQ(u.examples[3].id, "e3");
}

TEST(ParaphrasePairsTest, RoundTripAndErrors) {
  ScopedDir dir("pairs");
  std::vector<ParaphrasePair> pairs = {{"a b", "c", true}, {"x", "y z", false}};
  WriteParaphrasePairs(pairs, dir / "p.tsv");
  auto back = ReadParaphrasePairs(dir / "p.tsv");
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].first, "a b");
  EXPECT_TRUE(back[0].paraphrase);
  EXPECT_FALSE(back[1].paraphrase);
  WriteFile(dir / "bad.tsv", "a\tb\t1\na\tb\t2\n");
  std::string message;
  EXPECT_EQ(CodeOf([&] { ReadParaphrasePairs(dir / "bad.tsv"); }, &message),
            ErrorCode::kMalformedRecord);
  EXPECT_NE(message.find(":2:"), std::string::npos);
}

}  // namespace
}  // namespace sqlret
