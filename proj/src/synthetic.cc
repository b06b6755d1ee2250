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

#include <algorithm>
#include <array>
#include <fstream>
#include <random>
#include <set>
#include <string_view>

#include "json.hpp"
#include "sqlret/error.h"

namespace sqlret {
namespace {

constexpr std::array<std::string_view, 40> kHeaders = {
    "points",     "country",    "player",       "team",
    "rank",       "year",       "score",        "city",
    "position",   "goals",      "wins",         "losses",
    "season",     "club",       "school",       "height",
    "weight",     "votes",      "round",        "district",
    "party",      "title",      "population",   "area",
    "capital",    "opponent",   "venue",        "attendance",
    "coach",      "league",     "nationality",  "director",
    "album",      "station",    "channel",      "home team",
    "away team",  "first elected", "lap time",  "record label",
};

const std::vector<std::string_view>& SelectPhrases(AggOp agg) {
  static const std::array<std::vector<std::string_view>, kNumAggOps> table = {{
      {"what is the {S}", "tell me the {S}", "name the {S}"},
      {"what is the highest {S}", "what is the maximum {S}",
       "name the largest {S}"},
      {"what is the lowest {S}", "what is the minimum {S}",
       "name the smallest {S}"},
      {"how many {S} are there", "what is the number of {S}",
       "count the {S}"},
      {"what is the total {S}", "what is the sum of {S}", "add up the {S}"},
      {"what is the average {S}", "what is the mean {S}",
       "give the average {S}"},
  }};
  return table[static_cast<int>(agg)];
}

const std::vector<std::string_view>& ConditionPhrases(CmpOp op) {
  static const std::array<std::vector<std::string_view>, kNumCmpOps> table = {{
      {"{C} is {V}", "{C} equals {V}", "the {C} is {V}"},
      {"{C} is greater than {V}", "{C} is more than {V}", "{C} above {V}"},
      {"{C} is less than {V}", "{C} is fewer than {V}", "{C} below {V}"},
  }};
  return table[static_cast<int>(op)];
}

constexpr std::array<std::string_view, 4> kFirstConnectors = {
    "when", "where", "for which", "if"};

// Made-up words, so values never collide with template or header words.
const std::vector<std::string>& Lexicon() {
  static const std::vector<std::string> words = [] {
    constexpr std::string_view kOnsets[] = {"b", "d", "f", "g", "k", "l", "m",
                                            "n", "p", "r", "s", "t", "v", "z"};
    constexpr std::string_view kVowels[] = {"a", "e", "i", "o", "u"};
    std::vector<std::string> syllables;
    for (auto c : kOnsets) {
      for (auto v : kVowels) syllables.push_back(std::string(c) + std::string(v));
    }
    std::vector<std::string> out;
    for (const auto& a : syllables) {
      for (const auto& b : syllables) out.push_back(a + b + "k");
    }
    return out;
  }();
  return words;
}

int SplitIndex(LexicalSplit split) { return static_cast<int>(split); }

std::string PickWord(LexicalSplit split, std::mt19937_64& rng) {
  const auto& lex = Lexicon();
  std::uniform_int_distribution<std::size_t> pick(0, lex.size() / 3 - 1);
  return lex[pick(rng) * 3 + SplitIndex(split)];
}

std::string PickNumber(LexicalSplit split, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(4, 333);
  return std::to_string(pick(rng) * 3 + SplitIndex(split));
}

std::string Replace(std::string_view pattern, std::string_view key,
                    std::string_view value) {
  std::string out(pattern);
  std::size_t pos = out.find(key);
  if (pos != std::string::npos) out.replace(pos, key.size(), value);
  return out;
}

template <typename T>
const T& Choose(const std::vector<T>& items, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, items.size() - 1);
  return items[pick(rng)];
}

// A lexicalized query before rendering to text.
struct Content {
  TableSchema schema;
  SqlQuery query;
};

Content MakeContent(const LogicalPattern& pattern, LexicalSplit split,
                    const std::string& table_id, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> width(4, 6);
  const int num_headers = std::max(width(rng), pattern.num_conditions() + 1);
  std::vector<std::size_t> order(kHeaders.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  Content content;
  content.schema.table_id = table_id;
  for (int i = 0; i < num_headers; ++i) {
    content.schema.headers.emplace_back(kHeaders[order[i]]);
  }
  std::vector<int> columns(num_headers);
  for (int i = 0; i < num_headers; ++i) columns[i] = i;
  std::shuffle(columns.begin(), columns.end(), rng);
  content.query.agg = pattern.agg();
  content.query.select_column = columns[0];
  std::vector<CmpOp> ops(pattern.cond_ops().begin(), pattern.cond_ops().end());
  std::shuffle(ops.begin(), ops.end(), rng);
  for (std::size_t i = 0; i < ops.size(); ++i) {
    Condition c;
    c.column = columns[i + 1];
    c.op = ops[i];
    if (ops[i] == CmpOp::kEq) {
      c.value = PickWord(split, rng);
      if (std::bernoulli_distribution(0.5)(rng)) {
        c.value += " " + PickWord(split, rng);
      }
    } else {
      c.value = PickNumber(split, rng);
    }
    content.query.conditions.push_back(std::move(c));
  }
  return content;
}

std::string Render(const Content& content, std::mt19937_64& rng) {
  const SqlQuery& q = content.query;
  std::string text = Replace(Choose(SelectPhrases(q.agg), rng), "{S}",
                             content.schema.headers[q.select_column]);
  for (std::size_t i = 0; i < q.conditions.size(); ++i) {
    const Condition& c = q.conditions[i];
    std::string clause = Replace(Choose(ConditionPhrases(c.op), rng), "{C}",
                                 content.schema.headers[c.column]);
    clause = Replace(clause, "{V}", c.value);
    std::uniform_int_distribution<std::size_t> connector(
        0, kFirstConnectors.size() - 1);
    text += " ";
    text += i == 0 ? std::string(kFirstConnectors[connector(rng)]) : "and";
    text += " " + clause;
  }
  if (std::bernoulli_distribution(0.8)(rng)) text += " ?";
  return text;
}

LogicalPattern OtherPattern(const LogicalPattern& pattern,
                            std::mt19937_64& rng) {
  // Same number of conditions, different aggregation or operators.
  while (true) {
    std::uniform_int_distribution<int> agg(0, kNumAggOps - 1);
    std::uniform_int_distribution<int> op(0, kNumCmpOps - 1);
    std::vector<CmpOp> ops;
    for (int i = 0; i < pattern.num_conditions(); ++i) {
      ops.push_back(static_cast<CmpOp>(op(rng)));
    }
    LogicalPattern other(static_cast<AggOp>(agg(rng)), std::move(ops));
    if (other != pattern) return other;
  }
}

}  // namespace

std::vector<LogicalPattern> DeskScalePatterns() {
  using A = AggOp;
  using C = CmpOp;
  return {
      LogicalPattern(A::kNone, {C::kEq}),
      LogicalPattern(A::kNone, {C::kGt}),
      LogicalPattern(A::kNone, {C::kLt}),
      LogicalPattern(A::kMax, {C::kEq}),
      LogicalPattern(A::kMin, {C::kEq}),
      LogicalPattern(A::kCount, {C::kEq}),
      LogicalPattern(A::kAvg, {C::kEq}),
      LogicalPattern(A::kNone, {C::kEq, C::kEq}),
      LogicalPattern(A::kMax, {C::kGt}),
      LogicalPattern(A::kCount, {C::kGt}),
      LogicalPattern(A::kMin, {C::kLt}),
      LogicalPattern(A::kCount, {C::kEq, C::kEq}),
  };
}

Dataset GenerateSynthetic(const SyntheticOptions& options) {
  if (options.patterns.empty() && options.count > 0) {
    Fail(ErrorCode::kConfigError, "synthetic corpus needs at least one pattern");
  }
  std::mt19937_64 rng(options.seed);
  Dataset dataset;
  for (std::size_t i = 0; i < options.count; ++i) {
    const LogicalPattern& pattern = options.patterns[i % options.patterns.size()];
    const std::string id = options.id_prefix + ":" + std::to_string(i);
    Content content = MakeContent(pattern, options.split, id, rng);
    std::string question = Render(content, rng);
    dataset.schemas[id] = content.schema;
    dataset.examples.push_back(
        MakeExample(id, std::move(question), id, std::move(content.query)));
  }
  return dataset;
}

std::vector<ParaphrasePair> GenerateParaphrasePairs(std::size_t count,
                                                    std::uint64_t seed,
                                                    LexicalSplit split) {
  std::mt19937_64 rng(seed);
  const auto& taxonomy = EnumerateTaxonomy();
  std::vector<LogicalPattern> patterns;
  for (const LogicalPattern& p : taxonomy) {
    if (p.num_conditions() >= 1 && p.num_conditions() <= 2) patterns.push_back(p);
  }
  std::vector<ParaphrasePair> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    const LogicalPattern& pattern = Choose(patterns, rng);
    Content content = MakeContent(pattern, split, "pair", rng);
    ParaphrasePair pair;
    pair.first = Render(content, rng);
    const int kind = static_cast<int>(i % 4);
    if (kind < 2) {
      pair.second = Render(content, rng);
      pair.paraphrase = true;
    } else if (kind == 2) {
      Content changed = content;
      LogicalPattern other = OtherPattern(pattern, rng);
      changed.query.agg = other.agg();
      for (int c = 0; c < other.num_conditions(); ++c) {
        CmpOp op = other.cond_ops()[c];
        Condition& cond = changed.query.conditions[c];
        if ((op == CmpOp::kEq) != (cond.op == CmpOp::kEq)) {
          cond.value = op == CmpOp::kEq ? PickWord(split, rng)
                                        : PickNumber(split, rng);
        }
        cond.op = op;
      }
      pair.second = Render(changed, rng);
    } else {
      Content other = MakeContent(pattern, split, "pair", rng);
      pair.second = Render(other, rng);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

std::vector<ParaphrasePair> GenerateSeparablePairs(std::size_t count,
                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& lex = Lexicon();
  // Disjoint halves of the lexicon guarantee disjoint vocabularies.
  auto sentence = [&](std::size_t half) {
    std::uniform_int_distribution<std::size_t> len(3, 7);
    std::uniform_int_distribution<std::size_t> pick(0, lex.size() / 2 - 1);
    std::string text;
    for (std::size_t i = 0, n = len(rng); i < n; ++i) {
      if (i) text += ' ';
      text += lex[half * (lex.size() / 2) + pick(rng)];
    }
    return text;
  };
  std::vector<ParaphrasePair> pairs;
  for (std::size_t i = 0; i < count; ++i) {
    ParaphrasePair pair;
    pair.first = sentence(0);
    if (i % 2 == 0) {
      pair.second = pair.first;
      pair.paraphrase = true;
    } else {
      pair.second = sentence(1);
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

void WriteWikiSql(const Dataset& dataset,
                  const std::filesystem::path& questions_path,
                  const std::filesystem::path& tables_path) {
  std::ofstream questions(questions_path, std::ios::binary);
  std::ofstream tables(tables_path, std::ios::binary);
  if (!questions || !tables) {
    Fail(ErrorCode::kIoError, "cannot write " + questions_path.string() +
                                  " or " + tables_path.string());
  }
  for (const Example& ex : dataset.examples) {
    questions << nlohmann::json{{"question", ex.question},
                                {"table_id", ex.table_id},
                                {"sql", QueryToJson(ex.gold)}}
                     .dump()
              << '\n';
  }
  for (const auto& [id, schema] : dataset.schemas) {
    tables << nlohmann::json{{"id", id}, {"header", schema.headers}}.dump()
           << '\n';
  }
}

}  // namespace sqlret
