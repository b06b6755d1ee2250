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

#include "sqlret/run_config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "sqlret/error.h"

namespace sqlret {
namespace {

std::string Trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

template <typename T>
T ParseNumber(std::string_view key, std::string_view value) {
  T out{};
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    Fail(ErrorCode::kConfigError,
         "bad value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

std::string Format(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

struct Field {
  const char* key;
  const char* doc;
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define SQLRET_INT_FIELD(name, member, doc)                                 \
  Field {                                                                   \
    name, doc,                                                              \
        [](RunConfig& c, std::string_view v) {                              \
          c.member = ParseNumber<decltype(c.member)>(name, v);              \
        },                                                                  \
        [](const RunConfig& c) { return std::to_string(c.member); }         \
  }
#define SQLRET_REAL_FIELD(name, member, doc)                                \
  Field {                                                                   \
    name, doc,                                                              \
        [](RunConfig& c, std::string_view v) {                              \
          c.member = ParseNumber<double>(name, v);                          \
        },                                                                  \
        [](const RunConfig& c) { return Format(c.member); }                 \
  }

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = {
      Field{"preset", "default | paper-bert (encoder rate 2e-5, grounder 1e-3)",
            [](RunConfig& c, std::string_view v) {
              if (v == "default") {
                c.train.lr_encoder_retriever = TrainConfig().lr_encoder_retriever;
                c.train.lr_grounder = TrainConfig().lr_grounder;
              } else if (v == "paper-bert") {
                c.train.lr_encoder_retriever =
                    TrainConfig::PaperBert().lr_encoder_retriever;
                c.train.lr_grounder = TrainConfig::PaperBert().lr_grounder;
              } else {
                Fail(ErrorCode::kConfigError,
                     "unknown preset '" + std::string(v) + "'");
              }
              c.preset = std::string(v);
            },
            [](const RunConfig& c) { return c.preset; }},
      SQLRET_INT_FIELD("seed", seed, "seed for initialization and sampling"),
      SQLRET_INT_FIELD("jobs", jobs, "evaluation threads"),
      SQLRET_INT_FIELD("d_q", model.encoder.d_q, "retrieval vector size"),
      SQLRET_INT_FIELD("d_h", model.encoder.d_h, "grounder state size"),
      SQLRET_INT_FIELD("embed_dim", model.encoder.embed_dim,
                       "token embedding size"),
      SQLRET_INT_FIELD("hidden_dim", model.encoder.hidden_dim,
                       "encoder LSTM size per direction"),
      SQLRET_INT_FIELD("attention_dim", model.attention_dim,
                       "pointer scoring size"),
      SQLRET_REAL_FIELD("init_scale", model.init_scale,
                        "uniform initialization range"),
      SQLRET_INT_FIELD("min_count", min_count,
                       "minimum train frequency for a vocabulary entry"),
      SQLRET_REAL_FIELD("lr_encoder_retriever", train.lr_encoder_retriever,
                        "Adam rate of the encoder"),
      SQLRET_REAL_FIELD("lr_grounder", train.lr_grounder,
                        "Adam rate of the grounder"),
      SQLRET_REAL_FIELD("clip_norm", train.clip_norm,
                        "global gradient norm cap, 0 disables"),
      SQLRET_INT_FIELD("batch_size", train.batch_size, "anchors per batch"),
      SQLRET_INT_FIELD("max_epochs", train.max_epochs, "epoch limit"),
      SQLRET_INT_FIELD("eval_every", train.eval_every,
                       "epochs between dev evaluations"),
      SQLRET_INT_FIELD("patience", train.patience,
                       "evaluations without dev LF gain before stopping"),
      SQLRET_REAL_FIELD("w_retrieval", train.w_retrieval,
                        "retrieval loss weight"),
      SQLRET_REAL_FIELD("w_grounding", train.w_grounding,
                        "grounding loss weight"),
      SQLRET_INT_FIELD("k", train.k,
                       "neighbors voted on; 0 = 1 below 1000 entries, else 10"),
      SQLRET_REAL_FIELD("unk_dropout", train.unk_dropout,
                        "question token dropout to [UNK] while training"),
      SQLRET_REAL_FIELD("stop_at_dev_lf", train.stop_at_dev_lf,
                        "stop once dev LF reaches this value"),
      SQLRET_INT_FIELD("pretrain_epochs", pretrain.max_epochs,
                       "paraphrase pretraining epoch limit"),
      SQLRET_INT_FIELD("pretrain_batch_size", pretrain.batch_size,
                       "pairs per pretraining batch"),
      SQLRET_REAL_FIELD("pretrain_lr", pretrain.lr, "pretraining Adam rate"),
      SQLRET_INT_FIELD("pretrain_patience", pretrain.patience,
                       "pretraining epochs without accuracy gain"),
  };
  return fields;
}

#undef SQLRET_INT_FIELD
#undef SQLRET_REAL_FIELD

}  // namespace

void RunConfig::Set(std::string_view key, std::string_view value) {
  for (const Field& f : Fields()) {
    if (key == f.key) {
      f.set(*this, value);
      return;
    }
  }
  Fail(ErrorCode::kConfigError, "unknown config key '" + std::string(key) + "'");
}

void RunConfig::PropagateSeed() {
  model.encoder.seed = seed;
  train.seed = seed;
  pretrain.seed = seed;
  train.jobs = jobs;
}

void RunConfig::Validate() const {
  model.Validate();
  train.Validate();
  if (min_count < 1) Fail(ErrorCode::kConfigError, "min_count must be >= 1");
  if (jobs < 1) Fail(ErrorCode::kConfigError, "jobs must be >= 1");
  if (pretrain.max_epochs < 1 || pretrain.batch_size < 1 ||
      !(pretrain.lr > 0.0) || pretrain.patience < 1) {
    Fail(ErrorCode::kConfigError, "invalid pretraining settings");
  }
}

std::vector<std::pair<std::string, std::string>> RunConfig::Items(
    bool skip_seed) const {
  std::vector<std::pair<std::string, std::string>> items;
  for (const Field& f : Fields()) {
    if (skip_seed && std::string_view(f.key) == "seed") continue;
    items.emplace_back(f.key, f.get(*this));
  }
  return items;
}

std::string RunConfig::ToText() const {
  std::string out;
  for (const Field& f : Fields()) {
    out += "# ";
    out += f.doc;
    out += '\n';
    out += f.key;
    out += " = ";
    out += f.get(*this);
    out += '\n';
  }
  return out;
}

RunConfig ParseRunConfig(std::string_view text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in{std::string(text)};
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string content = Trim(line.substr(0, line.find('#')));
    if (content.empty()) continue;
    const auto eq = content.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kConfigError,
           "line " + std::to_string(number) + ": expected key = value");
    }
    entries.emplace_back(Trim(content.substr(0, eq)),
                         Trim(content.substr(eq + 1)));
  }
  RunConfig config;
  for (const auto& [key, value] : entries) {
    if (key == "preset") config.Set(key, value);
  }
  for (const auto& [key, value] : entries) {
    if (key != "preset") config.Set(key, value);
  }
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseRunConfig(buffer.str());
}

}  // namespace sqlret
