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

#include "sqlret/model.h"

#include <bit>
#include <cstring>
#include <fstream>

#include "sqlret/error.h"

namespace sqlret {
namespace {

constexpr char kMagic[8] = {'S', 'Q', 'L', 'R', 'E', 'T', 'C', 'K'};

static_assert(std::endian::native == std::endian::little,
              "checkpoints are written in little-endian order");

void AllocateLstm(int input, int hidden, LstmParams* p) {
  p->w_x = Mat::Zero(4 * hidden, input);
  p->w_h = Mat::Zero(4 * hidden, hidden);
  p->b = Vec::Zero(4 * hidden);
}

}  // namespace

void ModelConfig::Validate() const {
  encoder.Validate();
  if (attention_dim <= 0) {
    Fail(ErrorCode::kConfigError, "attention_dim must be positive");
  }
  if (!(init_scale > 0.0)) {
    Fail(ErrorCode::kConfigError, "init_scale must be positive");
  }
}

nlohmann::json ModelConfig::ToJson() const {
  return {{"d_q", encoder.d_q},
          {"d_h", encoder.d_h},
          {"embed_dim", encoder.embed_dim},
          {"hidden_dim", encoder.hidden_dim},
          {"seed", encoder.seed},
          {"attention_dim", attention_dim},
          {"init_scale", init_scale}};
}

ModelConfig ModelConfig::FromJson(const nlohmann::json& json) {
  ModelConfig config;
  config.encoder.d_q = json.at("d_q").get<int>();
  config.encoder.d_h = json.at("d_h").get<int>();
  config.encoder.embed_dim = json.at("embed_dim").get<int>();
  config.encoder.hidden_dim = json.at("hidden_dim").get<int>();
  config.encoder.seed = json.at("seed").get<std::uint64_t>();
  config.attention_dim = json.at("attention_dim").get<int>();
  config.init_scale = json.at("init_scale").get<double>();
  return config;
}

ModelParams AllocateParams(const ModelConfig& config, int vocab_size) {
  const EncoderConfig& e = config.encoder;
  ModelParams p;
  p.encoder.token_embedding = Mat::Zero(e.embed_dim, vocab_size);
  p.encoder.segment_embedding = Mat::Zero(e.embed_dim, 2);
  p.encoder.link_embedding = Mat::Zero(e.embed_dim, link::kCount);
  AllocateLstm(e.embed_dim, e.hidden_dim, &p.encoder.forward);
  AllocateLstm(e.embed_dim, e.hidden_dim, &p.encoder.backward);
  p.encoder.projection = Mat::Zero(e.projection_dim(), e.token_dim());
  p.encoder.projection_bias = Vec::Zero(e.projection_dim());
  AllocateLstm(e.token_dim(), e.d_h, &p.grounder.cell);
  p.grounder.key_w = Mat::Zero(config.attention_dim, e.token_dim());
  p.grounder.key_b = Vec::Zero(config.attention_dim);
  p.grounder.query_w = Mat::Zero(config.attention_dim, e.d_h);
  p.grounder.query_b = Vec::Zero(config.attention_dim);
  p.grounder.score_w = Vec::Zero(config.attention_dim);
  p.grounder.score_b = Vec::Zero(1);
  p.pair_head.w = Vec::Zero(e.projection_dim());
  p.pair_head.b = Vec::Zero(1);
  return p;
}

Model Model::Create(const ModelConfig& config, Vocabulary vocab) {
  config.Validate();
  Model model{config, std::move(vocab), {}};
  model.params = AllocateParams(config, model.vocab.size());
  FillUniform(Tensors(model.params), config.init_scale, config.encoder.seed);
  return model;
}

void Model::ExtendVocabulary(
    std::span<const std::vector<std::string>> token_lists, int min_count,
    std::uint64_t seed) {
  const int before = vocab.size();
  vocab.AddFrequent(token_lists, min_count);
  const int added = vocab.size() - before;
  if (added == 0) return;
  Mat& emb = params.encoder.token_embedding;
  Mat grown(emb.rows(), vocab.size());
  grown.leftCols(before) = emb;
  Mat fresh(emb.rows(), added);
  TensorView view{"fresh", Module::kEncoder, fresh.data(), fresh.rows(),
                  fresh.cols()};
  FillUniform(std::span<const TensorView>(&view, 1), config.init_scale, seed);
  grown.rightCols(added) = fresh;
  emb = std::move(grown);
}

void SaveCheckpoint(const std::filesystem::path& path, const Model& model,
                    const nlohmann::json& state) {
  ModelParams& params = const_cast<ModelParams&>(model.params);
  const std::vector<TensorView> tensors = Tensors(params);
  nlohmann::json header;
  header["config"] = model.config.ToJson();
  header["vocabulary"] = model.vocab.tokens();
  header["tensors"] = nlohmann::json::array();
  for (const TensorView& t : tensors) {
    header["tensors"].push_back({{"name", t.name}, {"rows", t.rows},
                                 {"cols", t.cols}});
  }
  header["state"] = state;
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  const std::uint32_t version = kCheckpointVersion;
  const std::uint64_t length = text.size();
  out.write(kMagic, sizeof(kMagic));
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  out.write(reinterpret_cast<const char*>(&length), sizeof(length));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const TensorView& t : tensors) {
    out.write(reinterpret_cast<const char*>(t.data),
              static_cast<std::streamsize>(sizeof(double) * t.size()));
  }
  if (!out) Fail(ErrorCode::kIoError, "write failed for " + path.string());
}

LoadedCheckpoint LoadCheckpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  char magic[sizeof(kMagic)];
  std::uint32_t version = 0;
  std::uint64_t length = 0;
  in.read(magic, sizeof(magic));
  in.read(reinterpret_cast<char*>(&version), sizeof(version));
  in.read(reinterpret_cast<char*>(&length), sizeof(length));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    Fail(ErrorCode::kVersionMismatch, path.string() + " is not a checkpoint");
  }
  if (version != kCheckpointVersion) {
    Fail(ErrorCode::kVersionMismatch,
         path.string() + " has checkpoint version " + std::to_string(version));
  }
  std::string text(length, '\0');
  in.read(text.data(), static_cast<std::streamsize>(length));
  if (!in) Fail(ErrorCode::kIoError, "truncated checkpoint " + path.string());

  LoadedCheckpoint loaded;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
    loaded.model.config = ModelConfig::FromJson(header.at("config"));
    loaded.model.vocab = Vocabulary::FromTokens(
        header.at("vocabulary").get<std::vector<std::string>>());
    loaded.state = header.value("state", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kVersionMismatch,
         path.string() + ": unreadable header: " + e.what());
  }
  loaded.model.params =
      AllocateParams(loaded.model.config, loaded.model.vocab.size());
  const std::vector<TensorView> tensors = Tensors(loaded.model.params);
  const auto& stored = header.at("tensors");
  if (stored.size() != tensors.size()) {
    Fail(ErrorCode::kVersionMismatch, path.string() + ": tensor count differs");
  }
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const TensorView& t = tensors[i];
    if (stored[i].at("name") != t.name || stored[i].at("rows") != t.rows ||
        stored[i].at("cols") != t.cols) {
      Fail(ErrorCode::kVersionMismatch,
           path.string() + ": tensor " + t.name + " has an unexpected shape");
    }
    in.read(reinterpret_cast<char*>(t.data),
            static_cast<std::streamsize>(sizeof(double) * t.size()));
  }
  if (!in) Fail(ErrorCode::kIoError, "truncated checkpoint " + path.string());
  return loaded;
}

LoadedCheckpoint LoadCheckpoint(const std::filesystem::path& path,
                                const ModelConfig& expected) {
  LoadedCheckpoint loaded = LoadCheckpoint(path);
  // The initialization seed does not shape the tensors.
  ModelConfig stored = loaded.model.config;
  stored.encoder.seed = expected.encoder.seed;
  if (!(stored == expected)) {
    Fail(ErrorCode::kVersionMismatch,
         path.string() + ": stored model configuration " +
             loaded.model.config.ToJson().dump() + " differs from " +
             expected.ToJson().dump());
  }
  return loaded;
}

}  // namespace sqlret
