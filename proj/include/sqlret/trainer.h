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

// Joint training of retrieval and grounding with per-module Adam rates,
// periodic dev evaluation and best-checkpoint tracking.

#ifndef SQLRET_TRAINER_H_
#define SQLRET_TRAINER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "sqlret/corpus.h"
#include "sqlret/model.h"
#include "sqlret/optimizer.h"
#include "sqlret/retriever.h"

namespace sqlret {

struct TrainConfig {
  double lr_encoder_retriever = 1e-3;
  double lr_grounder = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double clip_norm = 5.0;
  int batch_size = 12;
  int max_epochs = 1000;
  int eval_every = 1;
  int patience = 50;  // evaluations without dev LF improvement
  std::uint64_t seed = 1;
  double w_retrieval = 1.0;
  double w_grounding = 1.0;
  int k = 0;  // retrieval neighbors at dev evaluation; 0 picks by set size
  // Probability of replacing a question token by [UNK] during training.
  double unk_dropout = 0.1;
  // Stop as soon as dev LF reaches this value.
  double stop_at_dev_lf = 1.0;
  int jobs = 1;

  // Rates for a pretrained backbone: 2e-5 everywhere but the grounder.
  static TrainConfig PaperBert();
  void Validate() const;
  AdamConfig Adam() const;
};

struct EvalLogEntry {
  int epoch = 0;
  double train_loss = 0.0;
  double dev_p = 0.0;
  double dev_lf = 0.0;

  nlohmann::json ToJson() const;
};

struct TrainState {
  Model model;  // parameters of the best dev evaluation
  int epoch = 0;  // epochs run
  int best_epoch = 0;
  double best_dev_lf = -1.0;
  std::filesystem::path best_checkpoint_path;
  std::string rng_state;
  std::vector<EvalLogEntry> log;
  std::vector<double> epoch_loss;
  std::vector<std::string> warnings;

  nlohmann::json ToJson() const;  // everything but the model
};

struct TrainHooks {
  std::function<void(const EvalLogEntry&)> on_eval;
  std::function<void(const std::string&)> on_warning;
};

// An anchor and, when its pattern has a positive, its retrieval sextet.
struct AnchorSample {
  int anchor = 0;
  std::optional<Sextet> sextet;
};

// Mean over anchors of w_r * retrieval + w_g * grounding loss. Anchors with
// unaligned values contribute no grounding term. Accumulates the gradient
// of the mean into `grads` when set; `unk_rng` null disables token dropout.
double BatchLoss(const Model& model, const Dataset& train,
                 std::span<const AnchorSample> batch,
                 const TrainConfig& config, std::mt19937_64* unk_rng,
                 ModelParams* grads);

// Trains `model` in place. When `run_dir` is non-empty the best checkpoint
// (best.ckpt) and the evaluation log (train_log.jsonl) are written there.
// Throws kEmptyDataset for an empty train set and kDivergedLoss, after
// writing diverged.ckpt, when a batch loss is not finite.
TrainState Train(Model model, const Dataset& train, const Dataset& dev,
                 const TrainConfig& config,
                 const std::filesystem::path& run_dir = {},
                 const TrainHooks& hooks = {});

}  // namespace sqlret

#endif  // SQLRET_TRAINER_H_
