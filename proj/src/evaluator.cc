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

#include "sqlret/evaluator.h"

#include <cstdio>
#include <map>
#include <set>

#include "sqlret/error.h"
#include "sqlret/grounder.h"
#include "sqlret/parallel.h"

namespace sqlret {
namespace {

void RequireRecords(std::span<const EvalRecord> records) {
  if (records.empty()) Fail(ErrorCode::kEmptyEval, "no records to evaluate");
}

std::string Fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

double PatternAccuracy(std::span<const EvalRecord> records) {
  RequireRecords(records);
  std::size_t hits = 0;
  for (const EvalRecord& r : records) hits += r.pattern_correct();
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double LogicalFormAccuracy(std::span<const EvalRecord> records) {
  RequireRecords(records);
  std::size_t hits = 0;
  for (const EvalRecord& r : records) hits += r.form_correct();
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

int RCapacity(std::span<const EvalRecord> records) {
  std::set<PatternId> hit;
  for (const EvalRecord& r : records) {
    if (r.pattern_correct()) hit.insert(r.gold_pattern());
  }
  return static_cast<int>(hit.size());
}

int RgCapacity(std::span<const EvalRecord> records) {
  std::set<PatternId> hit;
  for (const EvalRecord& r : records) {
    if (r.form_correct()) hit.insert(r.gold_pattern());
  }
  return static_cast<int>(hit.size());
}

EvalReport Summarize(std::span<const EvalRecord> records) {
  EvalReport report;
  report.p = PatternAccuracy(records);
  report.lf = LogicalFormAccuracy(records);
  report.r_capacity = RCapacity(records);
  report.rg_capacity = RgCapacity(records);
  report.n = records.size();
  std::map<PatternId, PatternBreakdown> rows;
  for (const EvalRecord& r : records) {
    PatternBreakdown& row = rows[r.gold_pattern()];
    row.pattern = r.gold_pattern();
    ++row.n;
    row.pattern_correct += r.pattern_correct();
    row.form_correct += r.form_correct();
  }
  for (const auto& [id, row] : rows) report.per_pattern.push_back(row);
  return report;
}

int DefaultK(std::size_t retrieval_set_size) {
  return retrieval_set_size < 1000 ? 1 : 10;
}

std::vector<EvalRecord> Predict(const QuestionEncoder& encoder,
                                const GrounderParams& grounder,
                                const RetrievalIndex& index,
                                const Dataset& test, int k, int jobs) {
  if (test.empty()) Fail(ErrorCode::kEmptyEval, "test set is empty");
  if (k == 0) k = DefaultK(index.size());
  std::vector<EvalRecord> records(test.size());
  ParallelFor(test.size(), jobs, [&](std::size_t i) {
    const Example& ex = test.examples[i];
    EncodedQuestion encoded = encoder.Encode(BuildExampleInput(ex, test));
    EvalRecord& record = records[i];
    record.example_id = ex.id;
    record.gold = ex.gold;
    record.retrieved_pattern = Retrieve(index, encoded.q, k).chosen_pattern;
    try {
      record.predicted =
          Ground(grounder, PatternToTemplate(PatternOf(record.retrieved_pattern)),
                 encoded)
              .query;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kEmptyCandidates) throw;
    }
  });
  return records;
}

std::vector<EvalRecord> Predict(const Model& model, const RetrievalIndex& index,
                                const Dataset& test, int k, int jobs) {
  return Predict(model.Encoder(), model.params.grounder, index, test, k, jobs);
}

std::string FormatReport(const EvalReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %8s\n", "metric", "value");
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %8s\n", "P", Fixed3(report.p).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %8s\n", "LF",
                Fixed3(report.lf).c_str());
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %8d\n", "R-capacity",
                report.r_capacity);
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %8d\n", "RG-capacity",
                report.rg_capacity);
  out += line;
  std::snprintf(line, sizeof(line), "%-12s %8zu\n\n", "n", report.n);
  out += line;
  std::snprintf(line, sizeof(line), "%4s  %-44s %5s %7s %7s\n", "id",
                "pattern", "n", "P", "LF");
  out += line;
  for (const PatternBreakdown& row : report.per_pattern) {
    const double n = static_cast<double>(row.n);
    std::snprintf(line, sizeof(line), "%4d  %-44s %5zu %7s %7s\n",
                  row.pattern.value, PatternOf(row.pattern).ToString().c_str(),
                  row.n, Fixed3(row.pattern_correct / n).c_str(),
                  Fixed3(row.form_correct / n).c_str());
    out += line;
  }
  return out;
}

void WriteReportJsonl(std::ostream& out, const EvalReport& report,
                      std::uint64_t seed) {
  const std::pair<const char*, double> metrics[] = {
      {"P", report.p},
      {"LF", report.lf},
      {"r_capacity", static_cast<double>(report.r_capacity)},
      {"rg_capacity", static_cast<double>(report.rg_capacity)},
  };
  for (const auto& [name, value] : metrics) {
    out << nlohmann::json{{"metric", name},
                          {"value", value},
                          {"n", report.n},
                          {"seed", seed}}
               .dump()
        << '\n';
  }
}

void WritePredictionsJsonl(std::ostream& out,
                           std::span<const EvalRecord> records) {
  for (const EvalRecord& r : records) {
    nlohmann::json line{{"id", r.example_id},
                        {"gold", QueryToJson(r.gold)},
                        {"gold_pattern", r.gold_pattern().value},
                        {"retrieved_pattern", r.retrieved_pattern.value},
                        {"pattern_correct", r.pattern_correct()},
                        {"form_correct", r.form_correct()}};
    line["predicted"] =
        r.predicted ? QueryToJson(*r.predicted) : nlohmann::json(nullptr);
    out << line.dump() << '\n';
  }
}

}  // namespace sqlret
