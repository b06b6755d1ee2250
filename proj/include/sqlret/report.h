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

// Aggregation of evaluation results across run directories.

#ifndef SQLRET_REPORT_H_
#define SQLRET_REPORT_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>

#include "sqlret/run_config.h"

namespace sqlret {

// "0.500 ± 0.008" with the population standard deviation; a single value
// is printed alone. Throws kEmptyEval for no values.
std::string FormatMeanStd(std::span<const double> values);

struct RunRecord {
  std::filesystem::path dir;
  RunConfig config;
  std::map<std::string, double> metrics;  // last value per metric
};

// Reads <dir>/config.txt and <dir>/report.jsonl.
RunRecord ReadRun(const std::filesystem::path& dir);

// One row per metric with mean ± stddev over the runs. Throws
// kConfigMismatch when two runs differ in any setting but the seed.
std::string AggregateRuns(std::span<const RunRecord> runs);

}  // namespace sqlret

#endif  // SQLRET_REPORT_H_
