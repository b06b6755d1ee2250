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

#include "sqlret/sql_logic.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "sqlret/error.h"

namespace sqlret {
namespace {

constexpr std::array<ElementToken, kNumElementTokens> kElements = {
    ElementToken::kSelect, ElementToken::kWhere, ElementToken::kAnd,
    ElementToken::kMax,    ElementToken::kMin,   ElementToken::kCount,
    ElementToken::kSum,    ElementToken::kAvg,   ElementToken::kEq,
    ElementToken::kGt,     ElementToken::kLt,    ElementToken::kCol,
};

[[noreturn]] void Malformed(const std::string& what) {
  Fail(ErrorCode::kMalformedRecord, what);
}

int ReadInt(const nlohmann::json& value, const char* field) {
  if (!value.is_number_integer()) {
    if (value.is_number_float()) {
      double d = value.get<double>();
      if (std::floor(d) == d) return static_cast<int>(d);
    }
    Malformed(std::string("field '") + field + "' is not an integer");
  }
  return value.get<int>();
}

// WikiSQL stores some condition values as JSON numbers.
std::string ReadValue(const nlohmann::json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number_float()) {
    double d = value.get<double>();
    if (std::floor(d) == d && std::abs(d) < 1e15) {
      return std::to_string(static_cast<long long>(d));
    }
    return nlohmann::json(d).dump();
  }
  Malformed("condition value is neither text nor number");
}

}  // namespace

std::string_view AggName(AggOp agg) {
  switch (agg) {
    case AggOp::kNone: return "";
    case AggOp::kMax: return "MAX";
    case AggOp::kMin: return "MIN";
    case AggOp::kCount: return "COUNT";
    case AggOp::kSum: return "SUM";
    case AggOp::kAvg: return "AVG";
  }
  return "";
}

std::string_view CmpSymbol(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return "=";
    case CmpOp::kGt: return ">";
    case CmpOp::kLt: return "<";
  }
  return "?";
}

bool HasDuplicateWhereColumns(const SqlQuery& query) {
  for (std::size_t i = 0; i < query.conditions.size(); ++i) {
    for (std::size_t j = i + 1; j < query.conditions.size(); ++j) {
      if (query.conditions[i].column == query.conditions[j].column) return true;
    }
  }
  return false;
}

void ValidateQuery(const SqlQuery& query) {
  if (query.select_column < 0) Malformed("negative select column");
  if (query.conditions.size() > kMaxConditions) {
    Malformed("more than 4 conditions");
  }
  for (const Condition& cond : query.conditions) {
    if (cond.column < 0) Malformed("negative condition column");
    if (cond.value.empty()) Malformed("empty condition value");
  }
  if (HasDuplicateWhereColumns(query)) Malformed("duplicate where column");
}

SqlQuery ParseQuery(const nlohmann::json& record) {
  if (!record.is_object()) Malformed("sql record is not an object");
  for (const char* field : {"sel", "agg", "conds"}) {
    if (!record.contains(field)) {
      Malformed(std::string("missing field '") + field + "'");
    }
  }
  SqlQuery query;
  query.select_column = ReadInt(record["sel"], "sel");
  int agg = ReadInt(record["agg"], "agg");
  if (agg < 0 || agg >= kNumAggOps) {
    Malformed("aggregation code " + std::to_string(agg) + " out of range");
  }
  query.agg = static_cast<AggOp>(agg);

  const nlohmann::json& conds = record["conds"];
  if (!conds.is_array()) Malformed("field 'conds' is not an array");
  if (conds.size() > kMaxConditions) Malformed("more than 4 conditions");
  for (const nlohmann::json& cond : conds) {
    if (!cond.is_array() || cond.size() != 3) {
      Malformed("condition is not a [column, op, value] triple");
    }
    Condition c;
    c.column = ReadInt(cond[0], "conds.column");
    int op = ReadInt(cond[1], "conds.op");
    if (op < 0 || op >= kNumCmpOps) {
      Malformed("operator code " + std::to_string(op) + " out of range");
    }
    c.op = static_cast<CmpOp>(op);
    c.value = ReadValue(cond[2]);
    query.conditions.push_back(std::move(c));
  }
  ValidateQuery(query);
  return query;
}

nlohmann::json QueryToJson(const SqlQuery& query) {
  nlohmann::json conds = nlohmann::json::array();
  for (const Condition& c : query.conditions) {
    conds.push_back({c.column, static_cast<int>(c.op), c.value});
  }
  return {{"sel", query.select_column},
          {"agg", static_cast<int>(query.agg)},
          {"conds", std::move(conds)}};
}

LogicalPattern::LogicalPattern(AggOp agg, std::vector<CmpOp> cond_ops)
    : agg_(agg), cond_ops_(std::move(cond_ops)) {
  if (cond_ops_.size() > kMaxConditions) {
    Malformed("pattern with more than 4 conditions");
  }
  std::sort(cond_ops_.begin(), cond_ops_.end());
}

std::string LogicalPattern::ToString() const {
  std::ostringstream out;
  out << "SELECT ";
  if (agg_ != AggOp::kNone) out << AggName(agg_) << ' ';
  out << "#1";
  int slot = 2;
  for (std::size_t i = 0; i < cond_ops_.size(); ++i) {
    out << (i == 0 ? " WHERE " : " AND ") << '#' << slot << ' '
        << CmpSymbol(cond_ops_[i]) << " #" << slot + 1;
    slot += 2;
  }
  return out.str();
}

const std::vector<LogicalPattern>& EnumerateTaxonomy() {
  static const std::vector<LogicalPattern> taxonomy = [] {
    // Non-decreasing operator sequences of each length, in lexicographic
    // order, are exactly the canonical multisets.
    std::vector<std::vector<CmpOp>> where_patterns;
    for (int size = 0; size <= kMaxConditions; ++size) {
      std::vector<int> ops(size, 0);
      while (true) {
        std::vector<CmpOp> seq;
        for (int op : ops) seq.push_back(static_cast<CmpOp>(op));
        where_patterns.push_back(std::move(seq));
        int pos = size - 1;
        while (pos >= 0 && ops[pos] == kNumCmpOps - 1) --pos;
        if (pos < 0) break;
        ++ops[pos];
        for (int i = pos + 1; i < size; ++i) ops[i] = ops[pos];
      }
    }
    std::vector<LogicalPattern> all;
    for (int agg = 0; agg < kNumAggOps; ++agg) {
      for (const auto& where : where_patterns) {
        all.emplace_back(static_cast<AggOp>(agg), where);
      }
    }
    return all;
  }();
  return taxonomy;
}

PatternId IdOf(const LogicalPattern& pattern) {
  static const std::map<LogicalPattern, int> ids = [] {
    std::map<LogicalPattern, int> m;
    const auto& all = EnumerateTaxonomy();
    for (std::size_t i = 0; i < all.size(); ++i) {
      m.emplace(all[i], static_cast<int>(i));
    }
    return m;
  }();
  return PatternId{ids.at(pattern)};
}

const LogicalPattern& PatternOf(PatternId id) {
  return EnumerateTaxonomy().at(static_cast<std::size_t>(id.value));
}

LogicalPattern Delexicalize(const SqlQuery& query) {
  std::vector<CmpOp> ops;
  ops.reserve(query.conditions.size());
  for (const Condition& c : query.conditions) ops.push_back(c.op);
  return LogicalPattern(query.agg, std::move(ops));
}

std::vector<Condition> CanonicalConditionOrder(const SqlQuery& query) {
  std::vector<Condition> conds = query.conditions;
  std::stable_sort(conds.begin(), conds.end(),
                   [](const Condition& a, const Condition& b) {
                     return a.op < b.op;
                   });
  return conds;
}

std::string_view ElementText(ElementToken token) {
  switch (token) {
    case ElementToken::kSelect: return "[SELECT]";
    case ElementToken::kWhere: return "[WHERE]";
    case ElementToken::kAnd: return "[AND]";
    case ElementToken::kMax: return "[MAX]";
    case ElementToken::kMin: return "[MIN]";
    case ElementToken::kCount: return "[COUNT]";
    case ElementToken::kSum: return "[SUM]";
    case ElementToken::kAvg: return "[AVG]";
    case ElementToken::kEq: return "[=]";
    case ElementToken::kGt: return "[>]";
    case ElementToken::kLt: return "[<]";
    case ElementToken::kCol: return "[COL]";
  }
  return "[?]";
}

std::span<const ElementToken> AllElementTokens() { return kElements; }

ElementToken AggElement(AggOp agg) {
  switch (agg) {
    case AggOp::kMax: return ElementToken::kMax;
    case AggOp::kMin: return ElementToken::kMin;
    case AggOp::kCount: return ElementToken::kCount;
    case AggOp::kSum: return ElementToken::kSum;
    case AggOp::kAvg: return ElementToken::kAvg;
    case AggOp::kNone: break;
  }
  Malformed("no element token for the empty aggregation");
}

ElementToken CmpElement(CmpOp op) {
  switch (op) {
    case CmpOp::kEq: return ElementToken::kEq;
    case CmpOp::kGt: return ElementToken::kGt;
    case CmpOp::kLt: return ElementToken::kLt;
  }
  return ElementToken::kEq;
}

int SlotTemplate::SlotCount() const {
  return static_cast<int>(std::count_if(
      tokens.begin(), tokens.end(), [](const TemplateToken& t) {
        return t.kind == TemplateToken::Kind::kSlot;
      }));
}

SlotTemplate PatternToTemplate(const LogicalPattern& pattern) {
  SlotTemplate tmpl;
  tmpl.pattern = pattern;
  auto& out = tmpl.tokens;
  out.push_back(TemplateToken::Fixed(ElementToken::kSelect));
  if (pattern.agg() != AggOp::kNone) {
    out.push_back(TemplateToken::Fixed(AggElement(pattern.agg())));
  }
  out.push_back(TemplateToken::Slot(SlotKind::kSelectColumn));
  const auto ops = pattern.cond_ops();
  for (int i = 0; i < static_cast<int>(ops.size()); ++i) {
    out.push_back(TemplateToken::Fixed(i == 0 ? ElementToken::kWhere
                                              : ElementToken::kAnd));
    out.push_back(TemplateToken::Slot(SlotKind::kWhereColumn, i));
    out.push_back(TemplateToken::Fixed(CmpElement(ops[i])));
    out.push_back(TemplateToken::Slot(SlotKind::kWhereValue, i));
  }
  return tmpl;
}

std::string CanonicalSqlString(const SqlQuery& query,
                               const TableSchema& schema) {
  auto header = [&](int column) -> const std::string& {
    if (column < 0 || column >= static_cast<int>(schema.headers.size())) {
      Fail(ErrorCode::kSchemaMismatch,
           "column " + std::to_string(column) + " not in table '" +
               schema.table_id + "' with " +
               std::to_string(schema.headers.size()) + " headers");
    }
    return schema.headers[column];
  };
  std::ostringstream out;
  out << "SELECT ";
  if (query.agg == AggOp::kNone) {
    out << header(query.select_column);
  } else {
    out << AggName(query.agg) << '(' << header(query.select_column) << ')';
  }
  for (std::size_t i = 0; i < query.conditions.size(); ++i) {
    const Condition& c = query.conditions[i];
    out << (i == 0 ? " WHERE " : " AND ") << header(c.column) << ' '
        << CmpSymbol(c.op) << " '" << c.value << '\'';
  }
  return out.str();
}

std::string NormalizeValue(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  bool pending_space = false;
  for (char ch : value) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

bool QueriesEqual(const SqlQuery& a, const SqlQuery& b) {
  if (a.select_column != b.select_column || a.agg != b.agg ||
      a.conditions.size() != b.conditions.size()) {
    return false;
  }
  using Key = std::tuple<int, CmpOp, std::string>;
  auto keys = [](const SqlQuery& q) {
    std::vector<Key> out;
    for (const Condition& c : q.conditions) {
      out.emplace_back(c.column, c.op, NormalizeValue(c.value));
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  return keys(a) == keys(b);
}

}  // namespace sqlret
