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

// Pattern accuracy (P), logical form accuracy (LF), R-capacity and
// RG-capacity over a test set.

#ifndef SQLRET_EVALUATOR_H_
#define SQLRET_EVALUATOR_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqlret/corpus.h"
#include "sqlret/encoder.h"
#include "sqlret/model.h"
#include "sqlret/retriever.h"

namespace sqlret {

struct EvalRecord {
  std::string example_id;
  SqlQuery gold;
  PatternId retrieved_pattern;
  std::optional<SqlQuery> predicted;  // nullopt: grounding failed

  PatternId gold_pattern() const { return IdOf(Delexicalize(gold)); }
  bool pattern_correct() const { return retrieved_pattern == gold_pattern(); }
  bool form_correct() const {
    return predicted.has_value() && QueriesEqual(*predicted, gold);
  }
};

struct PatternBreakdown {
  PatternId pattern;
  std::size_t n = 0;
  std::size_t pattern_correct = 0;
  std::size_t form_correct = 0;
};

struct EvalReport {
  double p = 0.0;
  double lf = 0.0;
  int r_capacity = 0;
  int rg_capacity = 0;
  std::size_t n = 0;
  std::vector<PatternBreakdown> per_pattern;  // ascending pattern id
};

// Both throw kEmptyEval on no records.
double PatternAccuracy(std::span<const EvalRecord> records);
double LogicalFormAccuracy(std::span<const EvalRecord> records);
int RCapacity(std::span<const EvalRecord> records);
int RgCapacity(std::span<const EvalRecord> records);
EvalReport Summarize(std::span<const EvalRecord> records);

// Retrieves a pattern for every test example and grounds it. `k` = 0 picks
// 1 for retrieval sets under 1000 entries and 10 otherwise.
std::vector<EvalRecord> Predict(const QuestionEncoder& encoder,
                                const GrounderParams& grounder,
                                const RetrievalIndex& index,
                                const Dataset& test, int k, int jobs = 1);
std::vector<EvalRecord> Predict(const Model& model, const RetrievalIndex& index,
                                const Dataset& test, int k, int jobs = 1);

int DefaultK(std::size_t retrieval_set_size);

// Aligned plain-text table: aggregate metrics, then the per-pattern rows.
std::string FormatReport(const EvalReport& report);

// One {"metric", "value", "n", "seed"} object per line.
void WriteReportJsonl(std::ostream& out, const EvalReport& report,
                      std::uint64_t seed);

// Per-example predictions, one JSON object per line.
void WritePredictionsJsonl(std::ostream& out,
                           std::span<const EvalRecord> records);

}  // namespace sqlret

#endif  // SQLRET_EVALUATOR_H_
