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

// Run settings read from a "key = value" file and command-line overrides.

#ifndef SQLRET_RUN_CONFIG_H_
#define SQLRET_RUN_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sqlret/model.h"
#include "sqlret/paraphrase.h"
#include "sqlret/trainer.h"

namespace sqlret {

struct RunConfig {
  std::string preset = "default";  // or "paper-bert"
  ModelConfig model;
  TrainConfig train;
  PretrainConfig pretrain;
  int min_count = 1;  // vocabulary threshold
  std::uint64_t seed = 1;
  int jobs = 1;

  // Sets one key. Throws kConfigError for an unknown key or a bad value.
  void Set(std::string_view key, std::string_view value);
  // Copies `seed` into the model, training and pretraining seeds.
  void PropagateSeed();
  void Validate() const;

  // Every key with its effective value, one "key = value" line each, with
  // a comment line documenting it.
  std::string ToText() const;
  // Same keys without comments; seed excluded when `skip_seed`.
  std::vector<std::pair<std::string, std::string>> Items(
      bool skip_seed = false) const;
};

// '#' starts a comment; blank lines are ignored. "preset" is applied before
// the other keys regardless of its position.
RunConfig ParseRunConfig(std::string_view text);
RunConfig LoadRunConfig(const std::filesystem::path& path);

}  // namespace sqlret

#endif  // SQLRET_RUN_CONFIG_H_
