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

// A parser instance: configuration, vocabulary and parameters, plus the
// binary checkpoint format.

#ifndef SQLRET_MODEL_H_
#define SQLRET_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqlret/encoder.h"
#include "sqlret/params.h"
#include "sqlret/vocabulary.h"

namespace sqlret {

struct ModelConfig {
  EncoderConfig encoder;
  int attention_dim = 64;
  double init_scale = 0.08;

  void Validate() const;
  nlohmann::json ToJson() const;
  static ModelConfig FromJson(const nlohmann::json& json);
  bool operator==(const ModelConfig&) const = default;
};

struct Model {
  ModelConfig config;
  Vocabulary vocab;
  ModelParams params;

  // Shapes from `config` and `vocab`, uniform initialization from
  // config.encoder.seed.
  static Model Create(const ModelConfig& config, Vocabulary vocab);

  // Adds the tokens of `token_lists` seen at least `min_count` times; new
  // embedding columns are initialized like fresh ones.
  void ExtendVocabulary(std::span<const std::vector<std::string>> token_lists,
                        int min_count, std::uint64_t seed);

  RecurrentEncoder Encoder() const {
    return RecurrentEncoder(config.encoder, vocab, params.encoder);
  }
};

// Allocates zero tensors with the shapes implied by `config`.
ModelParams AllocateParams(const ModelConfig& config, int vocab_size);

// Layout: "SQLRETCK", u32 version, u64 header length, JSON header (config,
// vocabulary, tensor names and shapes, caller state), then the tensors as
// little-endian doubles in Tensors() order.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void SaveCheckpoint(const std::filesystem::path& path, const Model& model,
                    const nlohmann::json& state = nlohmann::json::object());

struct LoadedCheckpoint {
  Model model;
  nlohmann::json state;
};

// Throws kIoError for unreadable files and kVersionMismatch for a foreign
// format, another version, or tensors whose shapes disagree with the stored
// configuration.
LoadedCheckpoint LoadCheckpoint(const std::filesystem::path& path);

// As above; also throws kVersionMismatch unless the stored model
// configuration equals `expected` (the initialization seed aside).
LoadedCheckpoint LoadCheckpoint(const std::filesystem::path& path,
                                const ModelConfig& expected);

}  // namespace sqlret

#endif  // SQLRET_MODEL_H_
