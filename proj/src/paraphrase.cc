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

#include "sqlret/paraphrase.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sqlret/encoder.h"
#include "sqlret/error.h"
#include "sqlret/optimizer.h"
#include "sqlret/tokenizer.h"

namespace sqlret {
namespace {

double Softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double Sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x))
                : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace

TokenizedPair TokenizePair(const ParaphrasePair& pair) {
  return {Tokenize(pair.first), Tokenize(pair.second), pair.paraphrase};
}

double PairLoss(const ModelParams& params, const ModelConfig& config,
                const Vocabulary& vocab, const TokenizedPair& pair,
                ModelParams* grads) {
  const InputLayout layout = BuildPairInput(pair.first, pair.second);
  const EncoderTrace trace = EncoderForward(params.encoder, config.encoder,
                                            layout, TokenIds(vocab, layout));
  const double z =
      params.pair_head.w.dot(trace.projected) + params.pair_head.b(0);
  const double loss = pair.paraphrase ? Softplus(-z) : Softplus(z);
  if (grads != nullptr) {
    const double dz = Sigmoid(z) - (pair.paraphrase ? 1.0 : 0.0);
    grads->pair_head.w += dz * trace.projected;
    grads->pair_head.b(0) += dz;
    EncoderBackward(params.encoder, config.encoder, layout, trace, Mat(),
                    dz * params.pair_head.w, &grads->encoder);
  }
  return loss;
}

double PairProbability(const Model& model, const TokenizedPair& pair) {
  const InputLayout layout = BuildPairInput(pair.first, pair.second);
  const EncoderTrace trace =
      EncoderForward(model.params.encoder, model.config.encoder, layout,
                     TokenIds(model.vocab, layout));
  return Sigmoid(model.params.pair_head.w.dot(trace.projected) +
                 model.params.pair_head.b(0));
}

double PairAccuracy(const Model& model, std::span<const ParaphrasePair> pairs) {
  if (pairs.empty()) Fail(ErrorCode::kEmptyEval, "no pairs to score");
  std::size_t correct = 0;
  for (const ParaphrasePair& pair : pairs) {
    const bool predicted = PairProbability(model, TokenizePair(pair)) >= 0.5;
    if (predicted == pair.paraphrase) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

PretrainReport PretrainParaphrase(std::span<const ParaphrasePair> pairs,
                                  const PretrainConfig& config, Model* model) {
  if (pairs.empty()) {
    Fail(ErrorCode::kEmptyDataset, "no paraphrase pairs to train on");
  }
  std::vector<TokenizedPair> data;
  data.reserve(pairs.size());
  for (const ParaphrasePair& p : pairs) data.push_back(TokenizePair(p));

  AdamConfig adam_config;
  adam_config.lr_encoder = config.lr;
  adam_config.lr_grounder = 0.0;
  adam_config.clip_norm = config.clip_norm;
  Adam adam(adam_config, model->params);
  ModelParams grads = ZerosLike(model->params);
  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  PretrainReport report;
  double best_accuracy = -1.0;
  int stale = 0;
  for (int epoch = 0; epoch < config.max_epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      SetZero(&grads);
      double batch = 0.0;
      for (std::size_t i = start; i < end; ++i) {
        batch += PairLoss(model->params, model->config, model->vocab,
                          data[order[i]], &grads);
      }
      if (!std::isfinite(batch)) {
        Fail(ErrorCode::kDivergedLoss, "paraphrase loss is not finite");
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (TensorView& t : Tensors(grads)) {
        Eigen::Map<Vec>(t.data, t.size()) *= scale;
      }
      adam.Step(grads, &model->params);
      total += batch;
    }
    report.epoch_loss.push_back(total / static_cast<double>(data.size()));
    report.epoch_accuracy.push_back(PairAccuracy(*model, pairs));
    if (report.epoch_accuracy.back() > best_accuracy) {
      best_accuracy = report.epoch_accuracy.back();
      stale = 0;
    } else if (++stale >= config.patience) {
      break;
    }
    if (best_accuracy == 1.0) break;
  }
  return report;
}

}  // namespace sqlret
