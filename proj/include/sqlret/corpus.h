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

// Question/table corpora: WikiSQL ingestion, value-span alignment, pattern
// histograms and the random, uniform and hybrid subset samplers.

#ifndef SQLRET_CORPUS_H_
#define SQLRET_CORPUS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqlret/sql_logic.h"

namespace sqlret {

// Inclusive token range inside Example::tokens.
struct ValueSpan {
  int begin = 0;
  int end = 0;
  bool operator==(const ValueSpan&) const = default;
};

struct Example {
  std::string id;
  std::string question;
  std::vector<std::string> tokens;
  std::string table_id;
  SqlQuery gold;
  // One entry per gold condition; nullopt when the value does not occur in
  // the question.
  std::vector<std::optional<ValueSpan>> value_spans;

  bool FullyAligned() const;
  PatternId pattern() const { return IdOf(Delexicalize(gold)); }
};

// Tokenizes the question and aligns the gold values.
Example MakeExample(std::string id, std::string question, std::string table_id,
                    SqlQuery gold);

// First contiguous occurrence of the tokenized value in `tokens`.
std::optional<ValueSpan> FindValueSpan(std::span<const std::string> tokens,
                                       std::string_view value);
Example AlignValueSpans(Example example);

struct Dataset {
  std::vector<Example> examples;
  std::map<std::string, TableSchema> schemas;

  std::size_t size() const { return examples.size(); }
  bool empty() const { return examples.empty(); }
  const TableSchema& SchemaOf(const Example& example) const;
  std::vector<std::vector<std::string>> HeaderTokens(
      const Example& example) const;

  // Throws kMalformedRecord if a table id does not resolve or a gold column
  // is outside its table.
  void Validate() const;
};

struct LoadReport {
  std::size_t lines = 0;
  std::size_t loaded = 0;
  std::size_t dropped_duplicate_columns = 0;
  std::size_t unaligned_examples = 0;
  std::size_t unaligned_conditions = 0;
};

struct LoadResult {
  Dataset dataset;
  LoadReport report;
};

// Reads WikiSQL 1.1 line-delimited files. Records with repeated where-columns
// are dropped and counted; any other malformed line is an error naming the
// file and line number.
LoadResult LoadWikiSql(const std::filesystem::path& questions_path,
                       const std::filesystem::path& tables_path);
std::map<std::string, TableSchema> LoadTables(
    const std::filesystem::path& tables_path);

// Line-delimited dataset artifact written by `sqlret ingest` and `subset`.
// Output is deterministic: tables sorted by id, examples in dataset order.
void WriteDataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset ReadDataset(const std::filesystem::path& path);

// Counts indexed by PatternId; always kTaxonomySize entries.
using PatternHistogram = std::vector<std::size_t>;
PatternHistogram ComputePatternHistogram(const Dataset& dataset);

// The n most frequent patterns with a nonzero count, ties broken by id.
std::vector<PatternId> TopPatterns(const PatternHistogram& histogram,
                                   std::size_t n);

// Keeps the examples at `indices` (in the given order) and the tables they
// reference.
Dataset SelectExamples(const Dataset& dataset,
                       std::span<const std::size_t> indices);

// Examples of `a`, followed by examples of `b` whose id is not in `a`.
Dataset UnionById(const Dataset& a, const Dataset& b);

// Uniform sample of n examples without replacement; output keeps dataset
// order. Throws kSampleTooLarge when n exceeds the dataset.
Dataset SampleRandom(const Dataset& dataset, std::size_t n,
                     std::uint64_t seed);

// Exactly `per_pattern` examples for every listed pattern. Throws
// kInsufficientPattern when a pattern has fewer examples.
Dataset SampleUniform(const Dataset& dataset,
                      std::span<const PatternId> patterns,
                      std::size_t per_pattern, std::uint64_t seed);

// max(floor, round(count * ratio)) examples per listed pattern.
std::size_t HybridTarget(std::size_t source_count, double ratio,
                         std::size_t floor);
Dataset SampleHybrid(const Dataset& dataset,
                     std::span<const PatternId> patterns, double ratio,
                     std::size_t floor, std::uint64_t seed);

struct ParaphrasePair {
  std::string first;
  std::string second;
  bool paraphrase = false;
};

// Tab-separated "question1 \t question2 \t label" lines, label in {0, 1}.
void WriteParaphrasePairs(const std::vector<ParaphrasePair>& pairs,
                          const std::filesystem::path& path);
std::vector<ParaphrasePair> ReadParaphrasePairs(
    const std::filesystem::path& path);

}  // namespace sqlret

#endif  // SQLRET_CORPUS_H_
