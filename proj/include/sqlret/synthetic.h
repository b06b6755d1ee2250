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

// Synthetic corpora with known gold labels: templated questions over
// generated tables, and paraphrase pairs built from the same templates.

#ifndef SQLRET_SYNTHETIC_H_
#define SQLRET_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sqlret/corpus.h"
#include "sqlret/sql_logic.h"

namespace sqlret {

// Value lexicons are partitioned by split so that train, dev and test
// questions never share condition values.
enum class LexicalSplit { kTrain, kDev, kTest };

struct SyntheticOptions {
  std::vector<LogicalPattern> patterns;  // drawn round-robin
  std::size_t count = 0;
  std::uint64_t seed = 0;
  LexicalSplit split = LexicalSplit::kTrain;
  std::string id_prefix = "syn";
};

// Twelve patterns. The first eight cover every aggregation word and
// comparison word used by the last four.
std::vector<LogicalPattern> DeskScalePatterns();

Dataset GenerateSynthetic(const SyntheticOptions& options);

// Positives are two renderings of the same query; negatives change the
// pattern or the lexical content.
std::vector<ParaphrasePair> GenerateParaphrasePairs(std::size_t count,
                                                    std::uint64_t seed,
                                                    LexicalSplit split);

// Identical questions labeled 1 and questions with disjoint vocabularies
// labeled 0.
std::vector<ParaphrasePair> GenerateSeparablePairs(std::size_t count,
                                                   std::uint64_t seed);

// WikiSQL-convention question and table files.
void WriteWikiSql(const Dataset& dataset,
                  const std::filesystem::path& questions_path,
                  const std::filesystem::path& tables_path);

}  // namespace sqlret

#endif  // SQLRET_SYNTHETIC_H_
