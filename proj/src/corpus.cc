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
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "sqlret/error.h"
#include "sqlret/tokenizer.h"

namespace sqlret {
namespace {

constexpr int kDatasetFormatVersion = 1;

std::ifstream OpenForRead(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  return in;
}

std::string Where(const std::filesystem::path& path, std::size_t line) {
  return path.filename().string() + ":" + std::to_string(line) + ": ";
}

nlohmann::json ParseLine(const std::string& text,
                         const std::filesystem::path& path, std::size_t line) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    Fail(ErrorCode::kMalformedRecord,
         Where(path, line) + "invalid JSON: " + e.what());
  }
}

std::string RequireString(const nlohmann::json& record, const char* field,
                          const std::filesystem::path& path,
                          std::size_t line) {
  if (!record.contains(field) || !record[field].is_string()) {
    Fail(ErrorCode::kMalformedRecord,
         Where(path, line) + "missing text field '" + field + "'");
  }
  return record[field].get<std::string>();
}

void CheckColumns(const SqlQuery& query, const TableSchema& schema) {
  const int n = static_cast<int>(schema.headers.size());
  auto check = [&](int column) {
    if (column >= n) {
      Fail(ErrorCode::kMalformedRecord,
           "column " + std::to_string(column) + " outside table '" +
               schema.table_id + "'");
    }
  };
  check(query.select_column);
  for (const Condition& c : query.conditions) check(c.column);
}

[[noreturn]] void Insufficient(PatternId id, std::size_t available,
                               std::size_t requested) {
  Fail(ErrorCode::kInsufficientPattern,
       "pattern " + std::to_string(id.value) + " (" + PatternOf(id).ToString() +
           "): available " + std::to_string(available) + ", requested " +
           std::to_string(requested));
}

std::vector<std::vector<std::size_t>> IndicesByPattern(const Dataset& dataset) {
  std::vector<std::vector<std::size_t>> by_pattern(kTaxonomySize);
  for (std::size_t i = 0; i < dataset.examples.size(); ++i) {
    by_pattern[dataset.examples[i].pattern().value].push_back(i);
  }
  return by_pattern;
}

// Draws `k` of `pool` without replacement (partial Fisher-Yates).
void DrawInto(std::vector<std::size_t> pool, std::size_t k,
              std::mt19937_64& rng, std::vector<std::size_t>* out) {
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    out->push_back(pool[i]);
  }
}

Dataset SortedSelection(const Dataset& dataset,
                        std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  return SelectExamples(dataset, indices);
}

}  // namespace

bool Example::FullyAligned() const {
  return std::all_of(value_spans.begin(), value_spans.end(),
                     [](const auto& span) { return span.has_value(); });
}

std::optional<ValueSpan> FindValueSpan(std::span<const std::string> tokens,
                                       std::string_view value) {
  const std::vector<std::string> needle = Tokenize(value);
  if (needle.empty() || needle.size() > tokens.size()) return std::nullopt;
  auto it = std::search(tokens.begin(), tokens.end(), needle.begin(),
                        needle.end());
  if (it == tokens.end()) return std::nullopt;
  int begin = static_cast<int>(it - tokens.begin());
  return ValueSpan{begin, begin + static_cast<int>(needle.size()) - 1};
}

Example AlignValueSpans(Example example) {
  example.value_spans.clear();
  for (const Condition& c : example.gold.conditions) {
    example.value_spans.push_back(FindValueSpan(example.tokens, c.value));
  }
  return example;
}

Example MakeExample(std::string id, std::string question, std::string table_id,
                    SqlQuery gold) {
  Example ex;
  ex.id = std::move(id);
  ex.tokens = Tokenize(question);
  ex.question = std::move(question);
  ex.table_id = std::move(table_id);
  ex.gold = std::move(gold);
  return AlignValueSpans(std::move(ex));
}

const TableSchema& Dataset::SchemaOf(const Example& example) const {
  auto it = schemas.find(example.table_id);
  if (it == schemas.end()) {
    Fail(ErrorCode::kMalformedRecord,
         "example " + example.id + " references unknown table '" +
             example.table_id + "'");
  }
  return it->second;
}

std::vector<std::vector<std::string>> Dataset::HeaderTokens(
    const Example& example) const {
  std::vector<std::vector<std::string>> out;
  for (const std::string& header : SchemaOf(example).headers) {
    out.push_back(Tokenize(header));
  }
  return out;
}

void Dataset::Validate() const {
  for (const Example& ex : examples) {
    try {
      CheckColumns(ex.gold, SchemaOf(ex));
    } catch (const Error& e) {
      Fail(e.code(), "example " + ex.id + ": " + e.what());
    }
  }
}

std::map<std::string, TableSchema> LoadTables(
    const std::filesystem::path& tables_path) {
  std::ifstream in = OpenForRead(tables_path);
  std::map<std::string, TableSchema> schemas;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json record = ParseLine(line, tables_path, number);
    TableSchema schema;
    schema.table_id = RequireString(record, "id", tables_path, number);
    if (!record.contains("header") || !record["header"].is_array() ||
        record["header"].empty()) {
      Fail(ErrorCode::kMalformedRecord,
           Where(tables_path, number) + "table needs a non-empty 'header'");
    }
    for (const auto& h : record["header"]) {
      if (!h.is_string() || h.get<std::string>().empty()) {
        Fail(ErrorCode::kMalformedRecord,
             Where(tables_path, number) + "header entries must be text");
      }
      schema.headers.push_back(h.get<std::string>());
    }
    schemas[schema.table_id] = std::move(schema);
  }
  return schemas;
}

LoadResult LoadWikiSql(const std::filesystem::path& questions_path,
                       const std::filesystem::path& tables_path) {
  LoadResult result;
  result.dataset.schemas = LoadTables(tables_path);
  std::ifstream in = OpenForRead(questions_path);
  const std::string stem = questions_path.stem().string();
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++result.report.lines;
    nlohmann::json record = ParseLine(line, questions_path, number);
    std::string question =
        RequireString(record, "question", questions_path, number);
    std::string table_id =
        RequireString(record, "table_id", questions_path, number);
    if (!record.contains("sql")) {
      Fail(ErrorCode::kMalformedRecord,
           Where(questions_path, number) + "missing field 'sql'");
    }
    SqlQuery gold;
    try {
      gold = ParseQuery(record["sql"]);
    } catch (const Error& e) {
      // Repeated where-columns cannot be produced by the grounder.
      if (record["sql"].contains("conds") && record["sql"]["conds"].is_array()) {
        std::set<int> seen;
        bool duplicate = false;
        for (const auto& c : record["sql"]["conds"]) {
          if (c.is_array() && !c.empty() && c[0].is_number_integer()) {
            duplicate |= !seen.insert(c[0].get<int>()).second;
          }
        }
        if (duplicate) {
          ++result.report.dropped_duplicate_columns;
          continue;
        }
      }
      Fail(e.code(), Where(questions_path, number) + e.what());
    }
    auto schema = result.dataset.schemas.find(table_id);
    if (schema == result.dataset.schemas.end()) {
      Fail(ErrorCode::kMalformedRecord,
           Where(questions_path, number) + "unknown table '" + table_id + "'");
    }
    try {
      CheckColumns(gold, schema->second);
    } catch (const Error& e) {
      Fail(e.code(), Where(questions_path, number) + e.what());
    }
    Example ex = MakeExample(stem + ":" + std::to_string(number),
                             std::move(question), std::move(table_id),
                             std::move(gold));
    if (!ex.FullyAligned()) ++result.report.unaligned_examples;
    result.report.unaligned_conditions += static_cast<std::size_t>(
        std::count(ex.value_spans.begin(), ex.value_spans.end(), std::nullopt));
    result.dataset.examples.push_back(std::move(ex));
  }
  result.report.loaded = result.dataset.examples.size();
  return result;
}

void WriteDataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  nlohmann::json header = {{"format", "sqlret-dataset"},
                           {"version", kDatasetFormatVersion},
                           {"tables", dataset.schemas.size()},
                           {"examples", dataset.examples.size()}};
  out << header.dump() << '\n';
  for (const auto& [id, schema] : dataset.schemas) {
    out << nlohmann::json{{"table", {{"id", id}, {"header", schema.headers}}}}
               .dump()
        << '\n';
  }
  for (const Example& ex : dataset.examples) {
    nlohmann::json spans = nlohmann::json::array();
    for (const auto& span : ex.value_spans) {
      spans.push_back(span ? nlohmann::json{span->begin, span->end}
                           : nlohmann::json(nullptr));
    }
    out << nlohmann::json{{"example",
                           {{"id", ex.id},
                            {"question", ex.question},
                            {"table_id", ex.table_id},
                            {"sql", QueryToJson(ex.gold)},
                            {"spans", spans}}}}
               .dump()
        << '\n';
  }
  if (!out) Fail(ErrorCode::kIoError, "write failed for " + path.string());
}

Dataset ReadDataset(const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  std::string line;
  std::size_t number = 0;
  if (!std::getline(in, line)) {
    Fail(ErrorCode::kMalformedRecord, path.string() + ": empty artifact");
  }
  ++number;
  nlohmann::json header = ParseLine(line, path, number);
  if (header.value("format", "") != "sqlret-dataset") {
    Fail(ErrorCode::kMalformedRecord, Where(path, 1) + "not a dataset artifact");
  }
  if (header.value("version", 0) != kDatasetFormatVersion) {
    Fail(ErrorCode::kVersionMismatch,
         Where(path, 1) + "unsupported dataset version");
  }
  Dataset dataset;
  while (std::getline(in, line)) {
    ++number;
    nlohmann::json record = ParseLine(line, path, number);
    try {
      if (record.contains("table")) {
        const auto& t = record["table"];
        TableSchema schema{t.at("id").get<std::string>(),
                           t.at("header").get<std::vector<std::string>>()};
        dataset.schemas[schema.table_id] = std::move(schema);
      } else if (record.contains("example")) {
        const auto& e = record["example"];
        Example ex = MakeExample(e.at("id").get<std::string>(),
                                 e.at("question").get<std::string>(),
                                 e.at("table_id").get<std::string>(),
                                 ParseQuery(e.at("sql")));
        dataset.examples.push_back(std::move(ex));
      } else {
        Fail(ErrorCode::kMalformedRecord, "unknown record kind");
      }
    } catch (const nlohmann::json::exception& err) {
      Fail(ErrorCode::kMalformedRecord, Where(path, number) + err.what());
    } catch (const Error& err) {
      Fail(err.code(), Where(path, number) + err.what());
    }
  }
  if (dataset.examples.size() != header.value("examples", std::size_t{0})) {
    Fail(ErrorCode::kMalformedRecord,
         path.string() + ": example count does not match header");
  }
  dataset.Validate();
  return dataset;
}

PatternHistogram ComputePatternHistogram(const Dataset& dataset) {
  PatternHistogram histogram(kTaxonomySize, 0);
  for (const Example& ex : dataset.examples) ++histogram[ex.pattern().value];
  return histogram;
}

std::vector<PatternId> TopPatterns(const PatternHistogram& histogram,
                                   std::size_t n) {
  std::vector<PatternId> ids;
  for (int i = 0; i < static_cast<int>(histogram.size()); ++i) {
    if (histogram[i] > 0) ids.push_back(PatternId{i});
  }
  std::stable_sort(ids.begin(), ids.end(), [&](PatternId a, PatternId b) {
    return histogram[a.value] > histogram[b.value];
  });
  if (ids.size() > n) ids.resize(n);
  return ids;
}

Dataset SelectExamples(const Dataset& dataset,
                       std::span<const std::size_t> indices) {
  Dataset out;
  out.examples.reserve(indices.size());
  for (std::size_t i : indices) {
    const Example& ex = dataset.examples.at(i);
    out.examples.push_back(ex);
    if (!out.schemas.contains(ex.table_id)) {
      out.schemas.emplace(ex.table_id, dataset.SchemaOf(ex));
    }
  }
  return out;
}

Dataset UnionById(const Dataset& a, const Dataset& b) {
  Dataset out = a;
  std::set<std::string> ids;
  for (const Example& ex : a.examples) ids.insert(ex.id);
  for (const Example& ex : b.examples) {
    if (!ids.insert(ex.id).second) continue;
    out.examples.push_back(ex);
    if (!out.schemas.contains(ex.table_id)) {
      out.schemas.emplace(ex.table_id, b.SchemaOf(ex));
    }
  }
  return out;
}

Dataset SampleRandom(const Dataset& dataset, std::size_t n,
                     std::uint64_t seed) {
  if (n > dataset.size()) {
    Fail(ErrorCode::kSampleTooLarge,
         "requested " + std::to_string(n) + " of " +
             std::to_string(dataset.size()) + " examples");
  }
  std::vector<std::size_t> all(dataset.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  DrawInto(std::move(all), n, rng, &chosen);
  return SortedSelection(dataset, std::move(chosen));
}

Dataset SampleUniform(const Dataset& dataset,
                      std::span<const PatternId> patterns,
                      std::size_t per_pattern, std::uint64_t seed) {
  auto by_pattern = IndicesByPattern(dataset);
  for (PatternId id : patterns) {
    if (by_pattern[id.value].size() < per_pattern) {
      Insufficient(id, by_pattern[id.value].size(), per_pattern);
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  for (PatternId id : patterns) {
    DrawInto(by_pattern[id.value], per_pattern, rng, &chosen);
  }
  return SortedSelection(dataset, std::move(chosen));
}

std::size_t HybridTarget(std::size_t source_count, double ratio,
                         std::size_t floor) {
  auto proportional = static_cast<std::size_t>(
      std::llround(static_cast<double>(source_count) * ratio));
  return std::max(floor, proportional);
}

Dataset SampleHybrid(const Dataset& dataset,
                     std::span<const PatternId> patterns, double ratio,
                     std::size_t floor, std::uint64_t seed) {
  if (!(ratio > 0.0)) {
    Fail(ErrorCode::kConfigError, "hybrid ratio must be positive");
  }
  auto by_pattern = IndicesByPattern(dataset);
  for (PatternId id : patterns) {
    const std::size_t available = by_pattern[id.value].size();
    const std::size_t target = HybridTarget(available, ratio, floor);
    if (available < target) Insufficient(id, available, target);
  }
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> chosen;
  for (PatternId id : patterns) {
    const auto& pool = by_pattern[id.value];
    DrawInto(pool, HybridTarget(pool.size(), ratio, floor), rng, &chosen);
  }
  return SortedSelection(dataset, std::move(chosen));
}

void WriteParaphrasePairs(const std::vector<ParaphrasePair>& pairs,
                          const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  for (const ParaphrasePair& p : pairs) {
    out << p.first << '\t' << p.second << '\t' << (p.paraphrase ? 1 : 0)
        << '\n';
  }
}

std::vector<ParaphrasePair> ReadParaphrasePairs(
    const std::filesystem::path& path) {
  std::ifstream in = OpenForRead(path);
  std::vector<ParaphrasePair> pairs;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 3 || (fields[2] != "0" && fields[2] != "1")) {
      Fail(ErrorCode::kMalformedRecord,
           Where(path, number) + "expected 'question1<TAB>question2<TAB>0|1'");
    }
    pairs.push_back({fields[0], fields[1], fields[2] == "1"});
  }
  return pairs;
}

}  // namespace sqlret
