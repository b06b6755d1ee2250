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

// Paraphrase-pair classification used to pretrain the encoder: a logistic
// head over the projected [CLS] vector of the joint pair input.

#ifndef SQLRET_PARAPHRASE_H_
#define SQLRET_PARAPHRASE_H_

#include <cstdint>
#include <span>
#include <vector>

#include "sqlret/corpus.h"
#include "sqlret/model.h"

namespace sqlret {

struct PretrainConfig {
  int max_epochs = 50;
  int batch_size = 12;
  double lr = 1e-3;
  double clip_norm = 5.0;
  // Stop once training accuracy has not improved for this many epochs.
  int patience = 5;
  std::uint64_t seed = 1;
};

struct PretrainReport {
  std::vector<double> epoch_loss;
  std::vector<double> epoch_accuracy;
};

struct TokenizedPair {
  std::vector<std::string> first;
  std::vector<std::string> second;
  bool paraphrase = false;
};

TokenizedPair TokenizePair(const ParaphrasePair& pair);

// Binary cross-entropy of one pair; accumulates gradients when `grads` is
// set.
double PairLoss(const ModelParams& params, const ModelConfig& config,
                const Vocabulary& vocab, const TokenizedPair& pair,
                ModelParams* grads);

double PairProbability(const Model& model, const TokenizedPair& pair);

// Fraction of pairs classified correctly at threshold 0.5.
double PairAccuracy(const Model& model, std::span<const ParaphrasePair> pairs);

// Updates every parameter reachable from the pair loss: the whole encoder
// and the pair head. Throws kEmptyDataset for zero pairs.
PretrainReport PretrainParaphrase(std::span<const ParaphrasePair> pairs,
                                  const PretrainConfig& config, Model* model);

}  // namespace sqlret

#endif  // SQLRET_PARAPHRASE_H_
