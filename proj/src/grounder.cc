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

#include "sqlret/grounder.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sqlret/error.h"
#include "sqlret/lstm.h"

namespace sqlret {
namespace {

PointerCandidates ColumnCandidates(const InputLayout& layout,
                                   const std::vector<int>& used) {
  PointerCandidates out;
  for (std::size_t h = 0; h < layout.header_anchors.size(); ++h) {
    out.positions.push_back(layout.header_anchors[h]);
    out.masked.push_back(std::find(used.begin(), used.end(),
                                   static_cast<int>(h)) != used.end());
  }
  return out;
}

// Question positions; those before `min_position` are masked.
PointerCandidates ValueCandidates(const InputLayout& layout,
                                  int min_position) {
  PointerCandidates out;
  for (int i = 0; i < layout.question_size; ++i) {
    const int pos = layout.question_begin + i;
    out.positions.push_back(pos);
    out.masked.push_back(pos < min_position);
  }
  return out;
}

struct Scores {
  Mat keys;   // attn x candidates, K v_i + k; zero for masked candidates
  Vec query;  // Q h + q
  std::vector<double> probabilities;
};

Scores Score(const GrounderParams& params, const Vec& h, const Mat& tv,
             const PointerCandidates& candidates) {
  if (candidates.unmasked() == 0) {
    Fail(ErrorCode::kEmptyCandidates, "no pointer candidate left");
  }
  const std::size_t n = candidates.positions.size();
  Scores out;
  out.query = params.query_w * h + params.query_b;
  const Vec weighted_query = params.score_w.cwiseProduct(out.query);
  out.keys = Mat::Zero(params.score_w.size(), static_cast<Eigen::Index>(n));
  std::vector<double> s(n, 0.0);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    if (candidates.masked[i]) continue;
    out.keys.col(i) = params.key_w * tv.col(candidates.positions[i]) +
                      params.key_b;
    s[i] = weighted_query.dot(out.keys.col(i)) + params.score_b(0);
    top = std::max(top, s[i]);
  }
  double total = 0.0;
  out.probabilities.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (candidates.masked[i]) continue;
    out.probabilities[i] = std::exp(s[i] - top);
    total += out.probabilities[i];
  }
  for (double& p : out.probabilities) p /= total;
  return out;
}

int Argmax(const std::vector<double>& p) {
  // max_element keeps the first of equal values, i.e. the lowest position.
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

// Gold condition indices in template slot order.
std::vector<int> SlotOrder(const SqlQuery& query) {
  std::vector<int> order(query.conditions.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return query.conditions[a].op < query.conditions[b].op;
  });
  return order;
}

}  // namespace

int PointerCandidates::unmasked() const {
  return static_cast<int>(std::count(masked.begin(), masked.end(), false));
}

DecoderState InitState(const Vec& g, int d_h) {
  if (g.size() != 2 * d_h) {
    Fail(ErrorCode::kDimensionMismatch,
         "grounder seed has " + std::to_string(g.size()) + " entries, expected " +
             std::to_string(2 * d_h));
  }
  return {g.head(d_h), g.tail(d_h)};
}

StepResult DecodeStep(const GrounderParams& params, const Vec& input,
                      const DecoderState& state, const Mat& token_vectors,
                      const PointerCandidates& candidates) {
  StepResult out;
  out.state = state;
  LstmStep(params.cell, input, &out.state.h, &out.state.c);
  out.probabilities =
      Score(params, out.state.h, token_vectors, candidates).probabilities;
  return out;
}

GroundingResult Ground(const GrounderParams& params,
                       const SlotTemplate& slot_template,
                       const EncodedQuestion& encoded) {
  const InputLayout& layout = encoded.layout;
  const Mat& tv = encoded.token_vectors;
  DecoderState state = InitState(encoded.g, params.cell.hidden());
  GroundingResult out;
  out.query.agg = slot_template.pattern.agg();
  const auto ops = slot_template.pattern.cond_ops();
  out.query.conditions.resize(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) out.query.conditions[i].op = ops[i];

  std::vector<int> used_columns;
  auto point = [&](const PointerCandidates& candidates) {
    Scores scores = Score(params, state.h, tv, candidates);
    const int best = Argmax(scores.probabilities);
    const int pos = candidates.positions[best];
    out.slot_pointers.push_back(pos);
    out.step_log_probs.push_back(std::log(scores.probabilities[best]));
    LstmStep(params.cell, tv.col(pos), &state.h, &state.c);
    return best;
  };

  for (const TemplateToken& token : slot_template.tokens) {
    if (token.kind == TemplateToken::Kind::kFixed) {
      LstmStep(params.cell, tv.col(layout.ElementPosition(token.element)),
               &state.h, &state.c);
      continue;
    }
    switch (token.slot) {
      case SlotKind::kSelectColumn:
        out.query.select_column = point(ColumnCandidates(layout, {}));
        break;
      case SlotKind::kWhereColumn: {
        const int column = point(ColumnCandidates(layout, used_columns));
        used_columns.push_back(column);
        out.query.conditions[token.condition].column = column;
        break;
      }
      case SlotKind::kWhereValue: {
        const int begin = point(ValueCandidates(layout, 0));
        const int end =
            point(ValueCandidates(layout, layout.question_begin + begin));
        out.query.conditions[token.condition].value =
            layout.QuestionSpanText(begin, end);
        break;
      }
    }
  }
  return out;
}

double GroundingLoss(const GrounderParams& params,
                     const SlotTemplate& slot_template,
                     const EncodedQuestion& encoded, const Example& gold,
                     GrounderParams* grads,
                     GroundingInputGrads* input_grads) {
  if (Delexicalize(gold.gold) != slot_template.pattern) {
    Fail(ErrorCode::kPatternMismatch,
         "gold query of " + gold.id + " does not match " +
             slot_template.pattern.ToString());
  }
  if (!gold.FullyAligned()) {
    Fail(ErrorCode::kUnalignedValue,
         "example " + gold.id + " has a value that is not in the question");
  }
  const InputLayout& layout = encoded.layout;
  const Mat& tv = encoded.token_vectors;
  const int num_headers = static_cast<int>(layout.header_anchors.size());
  auto check_column = [&](int column) {
    if (column < 0 || column >= num_headers) {
      Fail(ErrorCode::kSchemaMismatch,
           "gold column " + std::to_string(column) + " outside the table");
    }
  };

  struct Prediction {
    int step;  // index of the decoder output that scores this pointer
    PointerCandidates candidates;
    int gold;  // index into candidates
  };
  std::vector<int> input_positions;
  std::vector<Prediction> predictions;
  auto predict = [&](PointerCandidates candidates, int gold_position) {
    const auto it = std::find(candidates.positions.begin(),
                              candidates.positions.end(), gold_position);
    const int index = static_cast<int>(it - candidates.positions.begin());
    predictions.push_back({static_cast<int>(input_positions.size()) - 1,
                           std::move(candidates), index});
    input_positions.push_back(gold_position);
  };

  const std::vector<int> order = SlotOrder(gold.gold);
  std::vector<int> used_columns;
  for (const TemplateToken& token : slot_template.tokens) {
    if (token.kind == TemplateToken::Kind::kFixed) {
      input_positions.push_back(layout.ElementPosition(token.element));
      continue;
    }
    if (token.slot == SlotKind::kSelectColumn) {
      check_column(gold.gold.select_column);
      predict(ColumnCandidates(layout, {}),
              layout.header_anchors[gold.gold.select_column]);
      continue;
    }
    const int cond = order[token.condition];
    if (token.slot == SlotKind::kWhereColumn) {
      const int column = gold.gold.conditions[cond].column;
      check_column(column);
      predict(ColumnCandidates(layout, used_columns),
              layout.header_anchors[column]);
      used_columns.push_back(column);
    } else {
      const ValueSpan span = *gold.value_spans[cond];
      const int begin = layout.question_begin + span.begin;
      predict(ValueCandidates(layout, 0), begin);
      predict(ValueCandidates(layout, begin), layout.question_begin + span.end);
    }
  }
  // The decoder input after the last pointer does not affect the loss.
  input_positions.pop_back();

  Mat x(tv.rows(), static_cast<Eigen::Index>(input_positions.size()));
  for (std::size_t t = 0; t < input_positions.size(); ++t) {
    x.col(t) = tv.col(input_positions[t]);
  }
  const DecoderState init = InitState(encoded.g, params.cell.hidden());
  const LstmTrace trace = LstmForward(params.cell, x, init.h, init.c);

  Mat dh;
  Mat d_tv;
  if (grads != nullptr) {
    dh = Mat::Zero(trace.h.rows(), trace.h.cols());
    d_tv = Mat::Zero(tv.rows(), tv.cols());
  }
  double loss = 0.0;
  for (const Prediction& pred : predictions) {
    const Vec h = trace.h.col(pred.step);
    const Scores scores = Score(params, h, tv, pred.candidates);
    loss -= std::log(scores.probabilities[pred.gold]);
    if (grads == nullptr) continue;
    Vec d_query = Vec::Zero(params.score_w.size());
    const Vec weighted_query = params.score_w.cwiseProduct(scores.query);
    for (std::size_t i = 0; i < pred.candidates.positions.size(); ++i) {
      if (pred.candidates.masked[i]) continue;
      const double ds = scores.probabilities[i] -
                        (static_cast<int>(i) == pred.gold ? 1.0 : 0.0);
      const auto key = scores.keys.col(i);
      grads->score_w += ds * key.cwiseProduct(scores.query);
      grads->score_b(0) += ds;
      d_query += ds * params.score_w.cwiseProduct(key);
      const Vec d_key = ds * weighted_query;
      const int pos = pred.candidates.positions[i];
      grads->key_w.noalias() += d_key * tv.col(pos).transpose();
      grads->key_b += d_key;
      d_tv.col(pos).noalias() += params.key_w.transpose() * d_key;
    }
    grads->query_b += d_query;
    grads->query_w.noalias() += d_query * h.transpose();
    dh.col(pred.step).noalias() += params.query_w.transpose() * d_query;
  }
  if (grads == nullptr) return loss;

  const LstmInputGrads back =
      LstmBackward(params.cell, trace, dh, &grads->cell);
  for (std::size_t t = 0; t < input_positions.size(); ++t) {
    d_tv.col(input_positions[t]) += back.dx.col(t);
  }
  if (input_grads != nullptr) {
    input_grads->d_token_vectors = std::move(d_tv);
    input_grads->d_g.resize(2 * params.cell.hidden());
    input_grads->d_g << back.dh0, back.dc0;
  }
  return loss;
}

}  // namespace sqlret
