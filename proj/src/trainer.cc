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

#include "sqlret/trainer.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "sqlret/encoder.h"
#include "sqlret/error.h"
#include "sqlret/evaluator.h"
#include "sqlret/grounder.h"

namespace sqlret {
namespace {

struct Forward {
  InputLayout layout;
  EncoderTrace trace;
};

Forward Encode(const Model& model, const Dataset& data, int index,
               double unk_dropout, std::mt19937_64* unk_rng) {
  const Example& ex = data.examples[index];
  Forward f;
  f.layout = BuildInput(ex.tokens, data.HeaderTokens(ex));
  std::vector<int> ids = TokenIds(model.vocab, f.layout);
  if (unk_rng != nullptr && unk_dropout > 0.0) {
    std::bernoulli_distribution drop(unk_dropout);
    for (int i = 0; i < f.layout.question_size; ++i) {
      if (drop(*unk_rng)) ids[f.layout.question_begin + i] = Vocabulary::kUnk;
    }
  }
  f.trace = EncoderForward(model.params.encoder, model.config.encoder,
                           f.layout, std::move(ids));
  return f;
}

void AddScaled(ModelParams* target, ModelParams& source, double scale) {
  std::vector<TensorView> t = Tensors(*target);
  std::vector<TensorView> s = Tensors(source);
  for (std::size_t i = 0; i < t.size(); ++i) {
    Eigen::Map<Vec>(t[i].data, t[i].size()) +=
        scale * Eigen::Map<Vec>(s[i].data, s[i].size());
  }
}

std::string RngState(const std::mt19937_64& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

}  // namespace

TrainConfig TrainConfig::PaperBert() {
  TrainConfig config;
  config.lr_encoder_retriever = 2e-5;
  config.lr_grounder = 1e-3;
  return config;
}

void TrainConfig::Validate() const {
  if (!(lr_encoder_retriever > 0.0) || !(lr_grounder > 0.0)) {
    Fail(ErrorCode::kConfigError, "learning rates must be positive");
  }
  if (batch_size < 1) Fail(ErrorCode::kConfigError, "batch_size must be >= 1");
  if (max_epochs < 1 || eval_every < 1 || patience < 1) {
    Fail(ErrorCode::kConfigError,
         "max_epochs, eval_every and patience must be >= 1");
  }
  if (w_retrieval < 0.0 || w_grounding < 0.0) {
    Fail(ErrorCode::kConfigError, "loss weights must be non-negative");
  }
  if (k < 0) Fail(ErrorCode::kConfigError, "k must be >= 0");
  if (unk_dropout < 0.0 || unk_dropout >= 1.0) {
    Fail(ErrorCode::kConfigError, "unk_dropout must lie in [0, 1)");
  }
}

AdamConfig TrainConfig::Adam() const {
  AdamConfig adam;
  adam.lr_encoder = lr_encoder_retriever;
  adam.lr_grounder = lr_grounder;
  adam.beta1 = beta1;
  adam.beta2 = beta2;
  adam.clip_norm = clip_norm;
  return adam;
}

nlohmann::json EvalLogEntry::ToJson() const {
  return {{"epoch", epoch},
          {"train_loss", train_loss},
          {"dev_p", dev_p},
          {"dev_lf", dev_lf}};
}

nlohmann::json TrainState::ToJson() const {
  nlohmann::json log_json = nlohmann::json::array();
  for (const EvalLogEntry& e : log) log_json.push_back(e.ToJson());
  return {{"epoch", epoch},
          {"best_epoch", best_epoch},
          {"best_dev_lf", best_dev_lf},
          {"rng_state", rng_state},
          {"log", log_json}};
}

double BatchLoss(const Model& model, const Dataset& train,
                 std::span<const AnchorSample> batch,
                 const TrainConfig& config, std::mt19937_64* unk_rng,
                 ModelParams* grads) {
  const EncoderConfig& ec = model.config.encoder;
  const bool backprop = grads != nullptr;
  ModelParams sum;
  GrounderParams grounder_sum;
  if (backprop) {
    sum = ZerosLike(model.params);
    grounder_sum = sum.grounder;
  }
  double total = 0.0;
  for (const AnchorSample& sample : batch) {
    const Example& ex = train.examples[sample.anchor];
    Forward anchor =
        Encode(model, train, sample.anchor, config.unk_dropout, unk_rng);
    Mat d_tv;
    Vec d_proj = Vec::Zero(ec.projection_dim());

    if (config.w_grounding > 0.0 && ex.FullyAligned()) {
      EncodedQuestion encoded{RetrievalPart(ec, anchor.trace.projected),
                              GroundingPart(ec, anchor.trace.projected),
                              anchor.trace.token_vectors, anchor.layout};
      GroundingInputGrads input_grads;
      const double loss = GroundingLoss(
          model.params.grounder, PatternToTemplate(Delexicalize(ex.gold)),
          encoded, ex, backprop ? &grounder_sum : nullptr, &input_grads);
      total += config.w_grounding * loss;
      if (backprop) {
        d_tv = config.w_grounding * input_grads.d_token_vectors;
        d_proj.segment(ec.d_q, 2 * ec.d_h) = config.w_grounding * input_grads.d_g;
      }
    }

    if (config.w_retrieval > 0.0 && sample.sextet.has_value()) {
      const Sextet& s = *sample.sextet;
      std::vector<Forward> others;
      others.push_back(Encode(model, train, s.positive, config.unk_dropout,
                              unk_rng));
      for (int n : s.negatives) {
        others.push_back(Encode(model, train, n, config.unk_dropout, unk_rng));
      }
      std::vector<Vec> negatives;
      for (std::size_t j = 1; j < others.size(); ++j) {
        negatives.push_back(RetrievalPart(ec, others[j].trace.projected));
      }
      RetrievalLossGrads rg;
      const double loss = RetrievalLoss(
          RetrievalPart(ec, anchor.trace.projected),
          RetrievalPart(ec, others[0].trace.projected), negatives,
          backprop ? &rg : nullptr);
      total += config.w_retrieval * loss;
      if (backprop) {
        d_proj.head(ec.d_q) += config.w_retrieval * rg.d_anchor;
        for (std::size_t j = 0; j < others.size(); ++j) {
          Vec d_other = Vec::Zero(ec.projection_dim());
          d_other.head(ec.d_q) =
              config.w_retrieval * (j == 0 ? rg.d_positive : rg.d_negatives[j - 1]);
          EncoderBackward(model.params.encoder, ec, others[j].layout,
                          others[j].trace, Mat(), d_other, &sum.encoder);
        }
      }
    }
    if (backprop) {
      EncoderBackward(model.params.encoder, ec, anchor.layout, anchor.trace,
                      d_tv, d_proj, &sum.encoder);
    }
  }
  const double scale = 1.0 / static_cast<double>(batch.size());
  if (backprop) {
    ModelParams grounder_only = ZerosLike(sum);
    grounder_only.grounder = std::move(grounder_sum);
    AddScaled(&sum, grounder_only, config.w_grounding);
    AddScaled(grads, sum, scale);
  }
  return total * scale;
}

TrainState Train(Model model, const Dataset& train, const Dataset& dev,
                 const TrainConfig& config,
                 const std::filesystem::path& run_dir,
                 const TrainHooks& hooks) {
  config.Validate();
  if (train.empty()) Fail(ErrorCode::kEmptyDataset, "train set is empty");
  TrainState state;
  auto warn = [&](const std::string& message) {
    state.warnings.push_back(message);
    if (hooks.on_warning) hooks.on_warning(message);
  };

  std::map<int, int> pattern_counts;
  for (const Example& ex : train.examples) ++pattern_counts[ex.pattern().value];
  const int usable_patterns = static_cast<int>(std::count_if(
      pattern_counts.begin(), pattern_counts.end(),
      [](const auto& kv) { return kv.second >= 2; }));
  const bool retrieval_enabled = usable_patterns >= 2;
  if (!retrieval_enabled) {
    warn("fewer than two patterns with two or more examples; training the "
         "grounding loss only");
  }
  const std::size_t unaligned = static_cast<std::size_t>(std::count_if(
      train.examples.begin(), train.examples.end(),
      [](const Example& ex) { return !ex.FullyAligned(); }));
  if (unaligned > 0) {
    warn(std::to_string(unaligned) +
         " train examples have unaligned values and get no grounding loss");
  }

  std::ofstream log_file;
  if (!run_dir.empty()) {
    std::filesystem::create_directories(run_dir);
    log_file.open(run_dir / "train_log.jsonl", std::ios::trunc);
    if (!log_file) {
      Fail(ErrorCode::kIoError, "cannot write " +
                                    (run_dir / "train_log.jsonl").string());
    }
  }

  const SextetSampler sampler(train);
  std::mt19937_64 rng(config.seed);
  std::mt19937_64 unk_rng(config.seed ^ 0x9e3779b97f4a7c15ULL);
  sqlret::Adam adam(config.Adam(), model.params);
  ModelParams grads = ZerosLike(model.params);
  std::vector<int> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  Model best = model;
  int stale = 0;

  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    state.epoch = epoch;
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_total = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::vector<AnchorSample> batch;
      for (std::size_t i = start; i < end; ++i) {
        AnchorSample sample{order[i], std::nullopt};
        if (retrieval_enabled && sampler.HasPositive(order[i])) {
          sample.sextet = sampler.Sample(order[i], rng);
        }
        batch.push_back(sample);
      }
      SetZero(&grads);
      const double loss =
          BatchLoss(model, train, batch, config, &unk_rng, &grads);
      if (!std::isfinite(loss) || !std::isfinite(GradientNorm(grads))) {
        const std::filesystem::path dump =
            (run_dir.empty() ? std::filesystem::temp_directory_path()
                             : run_dir) /
            "diverged.ckpt";
        state.rng_state = RngState(rng);
        SaveCheckpoint(dump, model, state.ToJson());
        Fail(ErrorCode::kDivergedLoss,
             "non-finite loss in epoch " + std::to_string(epoch) +
                 "; state written to " + dump.string());
      }
      adam.Step(grads, &model.params);
      epoch_total += loss * static_cast<double>(end - start);
    }
    state.epoch_loss.push_back(epoch_total / static_cast<double>(train.size()));

    const bool last = epoch == config.max_epochs;
    if (dev.empty() || (epoch % config.eval_every != 0 && !last)) continue;
    const RetrievalIndex index =
        BuildIndex(train, model.Encoder(), "train", config.jobs);
    const EvalReport report =
        Summarize(Predict(model, index, dev, config.k, config.jobs));
    EvalLogEntry entry{epoch, state.epoch_loss.back(), report.p, report.lf};
    state.log.push_back(entry);
    if (log_file.is_open()) log_file << entry.ToJson().dump() << std::endl;
    if (hooks.on_eval) hooks.on_eval(entry);
    if (report.lf > state.best_dev_lf) {
      state.best_dev_lf = report.lf;
      state.best_epoch = epoch;
      best = model;
      stale = 0;
      if (!run_dir.empty()) {
        state.best_checkpoint_path = run_dir / "best.ckpt";
        state.rng_state = RngState(rng);
        SaveCheckpoint(state.best_checkpoint_path, best, state.ToJson());
      }
    } else {
      ++stale;
    }
    if (report.lf >= config.stop_at_dev_lf || stale >= config.patience) break;
  }
  state.rng_state = RngState(rng);
  state.model = dev.empty() ? std::move(model) : std::move(best);
  if (dev.empty() && !run_dir.empty()) {
    state.best_checkpoint_path = run_dir / "best.ckpt";
    SaveCheckpoint(state.best_checkpoint_path, state.model, state.ToJson());
  }
  return state;
}

}  // namespace sqlret
