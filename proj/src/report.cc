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

#include "sqlret/report.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <vector>

#include "json.hpp"
#include "sqlret/error.h"

namespace sqlret {

std::string FormatMeanStd(std::span<const double> values) {
  if (values.empty()) Fail(ErrorCode::kEmptyEval, "no values to aggregate");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  char buf[64];
  if (values.size() == 1) {
    std::snprintf(buf, sizeof(buf), "%.3f", mean);
    return buf;
  }
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  std::snprintf(buf, sizeof(buf), "%.3f ± %.3f", mean, std::sqrt(var));
  return buf;
}

RunRecord ReadRun(const std::filesystem::path& dir) {
  RunRecord run;
  run.dir = dir;
  run.config = LoadRunConfig(dir / "config.txt");
  const std::filesystem::path report = dir / "report.jsonl";
  std::ifstream in(report);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + report.string());
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      const auto record = nlohmann::json::parse(line);
      run.metrics[record.at("metric").get<std::string>()] =
          record.at("value").get<double>();
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kMalformedRecord,
           report.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return run;
}

std::string AggregateRuns(std::span<const RunRecord> runs) {
  if (runs.empty()) Fail(ErrorCode::kEmptyEval, "no runs to report");
  const auto reference = runs[0].config.Items(/*skip_seed=*/true);
  for (const RunRecord& run : runs.subspan(1)) {
    const auto items = run.config.Items(/*skip_seed=*/true);
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i] != reference[i]) {
        Fail(ErrorCode::kConfigMismatch,
             run.dir.string() + " sets " + items[i].first + " = " +
                 items[i].second + ", " + runs[0].dir.string() + " has " +
                 reference[i].second);
      }
    }
  }
  std::set<std::string> names;
  for (const RunRecord& run : runs) {
    for (const auto& [name, value] : run.metrics) names.insert(name);
  }
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line), "%-12s %-18s %s\n", "metric", "value",
                "runs");
  out += line;
  for (const std::string& name : names) {
    std::vector<double> values;
    for (const RunRecord& run : runs) {
      if (auto it = run.metrics.find(name); it != run.metrics.end()) {
        values.push_back(it->second);
      }
    }
    std::snprintf(line, sizeof(line), "%-12s %-18s %zu\n", name.c_str(),
                  FormatMeanStd(values).c_str(), values.size());
    out += line;
  }
  return out;
}

}  // namespace sqlret
