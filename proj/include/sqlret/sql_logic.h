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

// WikiSQL-style logical forms: the query data model, delexicalization into
// logical patterns, the 210-pattern taxonomy and slot templates.

#ifndef SQLRET_SQL_LOGIC_H_
#define SQLRET_SQL_LOGIC_H_

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace sqlret {

// Order matches the WikiSQL integer codes 0..5.
enum class AggOp : std::uint8_t { kNone, kMax, kMin, kCount, kSum, kAvg };
// Order matches the WikiSQL integer codes 0..2 and the canonical pattern order.
enum class CmpOp : std::uint8_t { kEq, kGt, kLt };

inline constexpr int kNumAggOps = 6;
inline constexpr int kNumCmpOps = 3;
inline constexpr int kMaxConditions = 4;

std::string_view AggName(AggOp agg);    // "", "MAX", ...
std::string_view CmpSymbol(CmpOp op);   // "=", ">", "<"

struct TableSchema {
  std::string table_id;
  std::vector<std::string> headers;
};

struct Condition {
  int column = 0;
  CmpOp op = CmpOp::kEq;
  std::string value;

  bool operator==(const Condition&) const = default;
};

struct SqlQuery {
  int select_column = 0;
  AggOp agg = AggOp::kNone;
  std::vector<Condition> conditions;

  bool operator==(const SqlQuery&) const = default;
};

// Throws kMalformedRecord when the query breaks an invariant: too many
// conditions, repeated where-columns, negative columns or empty values.
void ValidateQuery(const SqlQuery& query);
bool HasDuplicateWhereColumns(const SqlQuery& query);

// Reads {"sel": int, "agg": int, "conds": [[col, op, value], ...]}.
SqlQuery ParseQuery(const nlohmann::json& record);
nlohmann::json QueryToJson(const SqlQuery& query);

// Delexicalized query. The comparison operators are held as a sorted
// multiset (EQ < GT < LT), so two queries that differ only in condition order
// share a pattern.
class LogicalPattern {
 public:
  LogicalPattern() = default;
  LogicalPattern(AggOp agg, std::vector<CmpOp> cond_ops);

  AggOp agg() const { return agg_; }
  std::span<const CmpOp> cond_ops() const { return cond_ops_; }
  int num_conditions() const { return static_cast<int>(cond_ops_.size()); }

  // "SELECT MAX #1 WHERE #2 = #3 AND #4 > #5"
  std::string ToString() const;

  auto operator<=>(const LogicalPattern&) const = default;

 private:
  AggOp agg_ = AggOp::kNone;
  std::vector<CmpOp> cond_ops_;
};

// Position of a pattern in the taxonomy order (0..209).
struct PatternId {
  int value = -1;
  auto operator<=>(const PatternId&) const = default;
};

inline constexpr int kTaxonomySize = 210;

// All patterns ordered by aggregation code, then number of conditions, then
// lexicographic operator sequence. The index of a pattern is its PatternId.
const std::vector<LogicalPattern>& EnumerateTaxonomy();
PatternId IdOf(const LogicalPattern& pattern);
const LogicalPattern& PatternOf(PatternId id);

LogicalPattern Delexicalize(const SqlQuery& query);

// Gold condition order matching the template slots: stable sort by operator.
std::vector<Condition> CanonicalConditionOrder(const SqlQuery& query);

// SQL element tokens placed in the encoder input and consumed by the
// grounder as fixed template tokens.
enum class ElementToken : std::uint8_t {
  kSelect, kWhere, kAnd, kMax, kMin, kCount, kSum, kAvg, kEq, kGt, kLt, kCol,
};
inline constexpr int kNumElementTokens = 12;
std::string_view ElementText(ElementToken token);  // "[SELECT]", ...
std::span<const ElementToken> AllElementTokens();
ElementToken AggElement(AggOp agg);  // agg must not be kNone
ElementToken CmpElement(CmpOp op);

enum class SlotKind : std::uint8_t { kSelectColumn, kWhereColumn, kWhereValue };

struct TemplateToken {
  enum class Kind : std::uint8_t { kFixed, kSlot };

  static TemplateToken Fixed(ElementToken element) {
    return {Kind::kFixed, element, SlotKind::kSelectColumn, -1};
  }
  static TemplateToken Slot(SlotKind slot, int condition = -1) {
    return {Kind::kSlot, ElementToken::kSelect, slot, condition};
  }

  Kind kind;
  ElementToken element;
  SlotKind slot;
  int condition;  // -1 for the select column

  bool operator==(const TemplateToken&) const = default;
};

struct SlotTemplate {
  LogicalPattern pattern;
  std::vector<TemplateToken> tokens;

  int SlotCount() const;
};

SlotTemplate PatternToTemplate(const LogicalPattern& pattern);

// SELECT MAX(Points) WHERE Country = 'South Korea' AND Rank > '3'
// Throws kSchemaMismatch when a column index is outside the header list.
std::string CanonicalSqlString(const SqlQuery& query, const TableSchema& schema);

// Lowercases, trims and collapses internal whitespace runs to one space.
std::string NormalizeValue(std::string_view value);

// Logical-form equality: same select column and aggregation, and the same
// conditions as a multiset with normalized values.
bool QueriesEqual(const SqlQuery& a, const SqlQuery& b);

}  // namespace sqlret

#endif  // SQLRET_SQL_LOGIC_H_
