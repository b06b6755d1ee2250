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

// Subcommands of the sqlret tool. Each returns the process exit status and
// reports failures by throwing sqlret::Error.

#ifndef SQLRET_TOOLS_COMMANDS_H_
#define SQLRET_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sqlret::cli {

// Flags shared by the commands that read a run configuration.
struct CommonFlags {
  std::string config;               // --config
  std::vector<std::string> set;     // --set key=value
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
};

struct IngestFlags {
  std::string questions;
  std::string tables;
  std::string out;
};

struct SubsetFlags {
  std::string dataset;
  std::string strategy;  // random | uniform | hybrid
  std::size_t n = 0;
  std::size_t top = 0;
  std::size_t per_pattern = 0;
  std::size_t floor = 0;
  double ratio = 0.0;
  std::uint64_t seed = 1;
  std::string out;
};

struct PretrainFlags {
  CommonFlags common;
  std::string pairs;
  std::string heldout;
};

struct TrainFlags {
  CommonFlags common;
  std::string train;
  std::string dev;
  std::string init;
};

struct EvalFlags {
  std::string checkpoint;
  std::string retrieval_set;
  std::string test;
  std::optional<int> k;
  int jobs = 1;
  std::string out;
  std::string index_out;
};

struct ReportFlags {
  std::vector<std::string> runs;
  std::string out;
};

struct GenerateFlags {
  std::string kind;  // questions | pairs | separable
  std::size_t count = 0;
  std::uint64_t seed = 1;
  std::string split = "train";
  std::string patterns = "1-12";
  std::string prefix;
  std::string out;
};

int Ingest(const IngestFlags& flags);
int Subset(const SubsetFlags& flags);
int Pretrain(const PretrainFlags& flags);
int Train(const TrainFlags& flags);
int Eval(const EvalFlags& flags);
int Report(const ReportFlags& flags);
int Generate(const GenerateFlags& flags);

}  // namespace sqlret::cli

#endif  // SQLRET_TOOLS_COMMANDS_H_
