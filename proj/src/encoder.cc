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

#include "sqlret/encoder.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include "json.hpp"
#include "sqlret/error.h"
#include "sqlret/tokenizer.h"

namespace sqlret {
namespace {

constexpr std::string_view kCls = "[CLS]";
constexpr std::string_view kSep = "[SEP]";

void Push(InputLayout* layout, std::string_view token, int segment,
          TokenRole role) {
  layout->tokens.emplace_back(token);
  layout->segment_ids.push_back(segment);
  layout->roles.push_back(role);
  layout->link_features.push_back(link::kNone);
}

// Greedy left-to-right matching, longest header first at each position.
// Returns per header the question position of its mention, or -1.
std::vector<int> FindMentions(
    std::span<const std::string> question,
    std::span<const std::vector<std::string>> headers,
    std::vector<int>* mention_of_token) {
  std::vector<int> mention(headers.size(), -1);
  mention_of_token->assign(question.size(), -1);
  std::size_t pos = 0;
  while (pos < question.size()) {
    int best = -1;
    std::size_t best_len = 0;
    for (std::size_t h = 0; h < headers.size(); ++h) {
      const auto& ht = headers[h];
      if (mention[h] >= 0 || ht.empty() || ht.size() <= best_len ||
          pos + ht.size() > question.size()) {
        continue;
      }
      if (std::equal(ht.begin(), ht.end(), question.begin() + pos)) {
        best = static_cast<int>(h);
        best_len = ht.size();
      }
    }
    if (best < 0) {
      ++pos;
      continue;
    }
    mention[best] = static_cast<int>(pos);
    for (std::size_t k = 0; k < best_len; ++k) {
      (*mention_of_token)[pos + k] = best;
    }
    pos += best_len;
  }
  return mention;
}

}  // namespace

void EncoderConfig::Validate() const {
  if (d_q <= 0 || d_h <= 0 || embed_dim <= 0 || hidden_dim <= 0) {
    Fail(ErrorCode::kConfigError, "encoder dimensions must be positive");
  }
}

std::string InputLayout::QuestionSpanText(int begin, int end) const {
  if (!question_text.empty() &&
      question_offsets.size() == static_cast<std::size_t>(question_size)) {
    const std::size_t from = question_offsets[begin].first;
    const std::size_t to = question_offsets[end].second;
    return question_text.substr(from, to - from);
  }
  std::string text;
  for (int i = begin; i <= end; ++i) {
    if (i > begin) text += ' ';
    text += tokens[question_begin + i];
  }
  return text;
}

InputLayout BuildInput(std::span<const std::string> question_tokens,
                       std::span<const std::vector<std::string>> headers,
                       std::span<const ElementToken> elements) {
  if (question_tokens.empty()) Fail(ErrorCode::kEmptyInput, "empty question");
  if (headers.empty()) Fail(ErrorCode::kEmptyInput, "table has no headers");
  for (const auto& h : headers) {
    if (h.empty()) Fail(ErrorCode::kEmptyInput, "header without tokens");
  }
  InputLayout layout;
  layout.element_positions.fill(-1);
  Push(&layout, kCls, 0, TokenRole::kCls);
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (i > 0) Push(&layout, kSep, 0, TokenRole::kSeparator);
    layout.element_positions[static_cast<int>(elements[i])] = layout.size();
    Push(&layout, ElementText(elements[i]), 0, TokenRole::kElement);
  }
  Push(&layout, kSep, 0, TokenRole::kSeparator);

  std::vector<int> mention_of_token;
  std::vector<int> mention = FindMentions(question_tokens, headers,
                                          &mention_of_token);
  std::vector<int> rank(headers.size(), -1);
  {
    std::vector<std::pair<int, int>> order;
    for (std::size_t h = 0; h < headers.size(); ++h) {
      if (mention[h] >= 0) order.emplace_back(mention[h], static_cast<int>(h));
    }
    std::sort(order.begin(), order.end());
    for (std::size_t r = 0; r < order.size(); ++r) {
      rank[order[r].second] =
          std::min(static_cast<int>(r), link::kMaxRank);
    }
  }

  layout.question_begin = layout.size();
  layout.question_size = static_cast<int>(question_tokens.size());
  for (std::size_t i = 0; i < question_tokens.size(); ++i) {
    Push(&layout, question_tokens[i], 1, TokenRole::kQuestion);
    if (mention_of_token[i] >= 0) {
      layout.link_features.back() =
          link::kQuestionRank + rank[mention_of_token[i]];
    }
  }
  Push(&layout, kSep, 1, TokenRole::kSeparator);
  for (std::size_t h = 0; h < headers.size(); ++h) {
    layout.header_anchors.push_back(layout.size());
    for (std::size_t k = 0; k < headers[h].size(); ++k) {
      Push(&layout, headers[h][k], 1,
           k == 0 ? TokenRole::kHeaderStart : TokenRole::kHeaderCont);
      if (rank[h] >= 0) layout.link_features.back() = link::kHeaderRank + rank[h];
    }
    Push(&layout, kSep, 1, TokenRole::kSeparator);
  }
  return layout;
}

InputLayout BuildExampleInput(const Example& example, const Dataset& dataset) {
  InputLayout layout =
      BuildInput(example.tokens, dataset.HeaderTokens(example));
  layout.question_text = example.question;
  for (const Token& t : TokenizeWithOffsets(example.question)) {
    layout.question_offsets.emplace_back(t.begin, t.end);
  }
  return layout;
}

InputLayout BuildPairInput(std::span<const std::string> first,
                           std::span<const std::string> second) {
  if (first.empty() || second.empty()) {
    Fail(ErrorCode::kEmptyInput, "paraphrase pair with an empty question");
  }
  const std::set<std::string> in_first(first.begin(), first.end());
  const std::set<std::string> in_second(second.begin(), second.end());
  InputLayout layout;
  layout.element_positions.fill(-1);
  Push(&layout, kCls, 0, TokenRole::kCls);
  layout.question_begin = layout.size();
  layout.question_size = static_cast<int>(first.size());
  for (const std::string& t : first) {
    Push(&layout, t, 0, TokenRole::kQuestion);
    if (in_second.contains(t)) layout.link_features.back() = link::kPairShared;
  }
  Push(&layout, kSep, 0, TokenRole::kSeparator);
  for (const std::string& t : second) {
    Push(&layout, t, 1, TokenRole::kQuestion);
    if (in_first.contains(t)) layout.link_features.back() = link::kPairShared;
  }
  Push(&layout, kSep, 1, TokenRole::kSeparator);
  return layout;
}

std::vector<int> TokenIds(const Vocabulary& vocab, const InputLayout& layout) {
  std::vector<int> ids;
  ids.reserve(layout.tokens.size());
  for (const std::string& t : layout.tokens) ids.push_back(vocab.Id(t));
  return ids;
}

EncoderTrace EncoderForward(const EncoderParams& params,
                            const EncoderConfig& config,
                            const InputLayout& layout,
                            std::vector<int> token_ids) {
  const int n = layout.size();
  const int hidden = config.hidden_dim;
  Mat inputs(config.embed_dim, n);
  for (int i = 0; i < n; ++i) {
    inputs.col(i) = params.token_embedding.col(token_ids[i]) +
                    params.segment_embedding.col(layout.segment_ids[i]) +
                    params.link_embedding.col(layout.link_features[i]);
  }
  const Vec zeros = Vec::Zero(hidden);
  EncoderTrace trace;
  trace.token_ids = std::move(token_ids);
  trace.forward = LstmForward(params.forward, inputs, zeros, zeros);
  trace.backward =
      LstmForward(params.backward, ReverseColumns(inputs), zeros, zeros);
  trace.token_vectors.resize(2 * hidden, n);
  trace.token_vectors.topRows(hidden) = trace.forward.h;
  trace.token_vectors.bottomRows(hidden) = ReverseColumns(trace.backward.h);
  trace.pooled = trace.token_vectors.rowwise().mean();
  trace.projected = params.projection * trace.pooled + params.projection_bias;
  return trace;
}

void EncoderBackward(const EncoderParams& params, const EncoderConfig& config,
                     const InputLayout& layout, const EncoderTrace& trace,
                     const Mat& d_token_vectors, const Vec& d_projected,
                     EncoderParams* grads) {
  const int n = layout.size();
  const int hidden = config.hidden_dim;
  Mat d_tv = d_token_vectors.size() == 0 ? Mat::Zero(2 * hidden, n)
                                         : d_token_vectors;
  if (d_projected.size() > 0) {
    const Vec d_pooled = params.projection.transpose() * d_projected / static_cast<double>(n);
    d_tv.colwise() += d_pooled;
    grads->projection.noalias() += d_projected * trace.pooled.transpose();
    grads->projection_bias += d_projected;
  }
  LstmInputGrads fwd = LstmBackward(params.forward, trace.forward,
                                    d_tv.topRows(hidden), &grads->forward);
  LstmInputGrads bwd =
      LstmBackward(params.backward, trace.backward,
                   ReverseColumns(d_tv.bottomRows(hidden)), &grads->backward);
  const Mat d_inputs = fwd.dx + ReverseColumns(bwd.dx);
  for (int i = 0; i < n; ++i) {
    grads->token_embedding.col(trace.token_ids[i]) += d_inputs.col(i);
    grads->segment_embedding.col(layout.segment_ids[i]) += d_inputs.col(i);
    grads->link_embedding.col(layout.link_features[i]) += d_inputs.col(i);
  }
}

Vec RetrievalPart(const EncoderConfig& config, const Vec& projected) {
  return projected.head(config.d_q);
}

Vec GroundingPart(const EncoderConfig& config, const Vec& projected) {
  return projected.segment(config.d_q, 2 * config.d_h);
}

EncodedQuestion RecurrentEncoder::Encode(const InputLayout& layout) const {
  EncoderTrace trace =
      EncoderForward(params_, config_, layout, TokenIds(vocab_, layout));
  EncodedQuestion out;
  out.q = RetrievalPart(config_, trace.projected);
  out.g = GroundingPart(config_, trace.projected);
  out.token_vectors = std::move(trace.token_vectors);
  out.layout = layout;
  return out;
}

PrecomputedEncoder PrecomputedEncoder::Load(const std::filesystem::path& path,
                                            int token_dim) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  PrecomputedEncoder encoder;
  encoder.token_dim_ = token_dim;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      auto record = nlohmann::json::parse(line);
      auto q = record.at("q").get<std::vector<double>>();
      auto g = record.at("g").get<std::vector<double>>();
      if (encoder.d_q_ == 0) encoder.d_q_ = static_cast<int>(q.size());
      if (static_cast<int>(q.size()) != encoder.d_q_ || q.empty()) {
        Fail(ErrorCode::kDimensionMismatch,
             path.string() + ":" + std::to_string(number) +
                 ": inconsistent q dimension");
      }
      encoder.vectors_[record.at("question").get<std::string>()] = {
          Eigen::Map<Vec>(q.data(), static_cast<Eigen::Index>(q.size())),
          Eigen::Map<Vec>(g.data(), static_cast<Eigen::Index>(g.size()))};
    } catch (const nlohmann::json::exception& e) {
      Fail(ErrorCode::kMalformedRecord,
           path.string() + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return encoder;
}

EncodedQuestion PrecomputedEncoder::Encode(const InputLayout& layout) const {
  auto it = vectors_.find(layout.question_text);
  if (it == vectors_.end()) {
    Fail(ErrorCode::kMalformedRecord,
         "no precomputed vector for question '" + layout.question_text + "'");
  }
  EncodedQuestion out;
  out.q = it->second.first;
  out.g = it->second.second;
  out.token_vectors = Mat::Zero(token_dim_, layout.size());
  out.layout = layout;
  return out;
}

GradCheckResult GradCheck(ModelParams& params, const LossFunction& loss,
                          std::size_t per_tensor, std::uint64_t seed,
                          double step) {
  ModelParams analytic = ZerosLike(params);
  loss(params, &analytic);
  std::vector<TensorView> values = Tensors(params);
  std::vector<TensorView> grads = Tensors(analytic);
  std::mt19937_64 rng(seed);
  GradCheckResult result;
  for (std::size_t t = 0; t < values.size(); ++t) {
    std::uniform_int_distribution<Eigen::Index> pick(0, values[t].size() - 1);
    for (std::size_t s = 0; s < per_tensor; ++s) {
      const Eigen::Index i = pick(rng);
      double& x = values[t].data[i];
      const double saved = x;
      x = saved + step;
      const double up = loss(params, nullptr);
      x = saved - step;
      const double down = loss(params, nullptr);
      x = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double exact = grads[t].data[i];
      const double scale = std::max({std::abs(numeric), std::abs(exact)});
      // Below 1e-6 both values are close to the finite-difference round-off;
      // there only an absolute difference above 1e-9 counts as disagreement.
      double error = 0.0;
      if (scale >= 1e-6) {
        error = std::abs(numeric - exact) / scale;
      } else if (std::abs(numeric - exact) > 1e-9) {
        error = std::abs(numeric - exact) / 1e-6;
      }
      ++result.checked;
      if (error > result.max_relative_error) {
        result.max_relative_error = error;
        result.worst_tensor = values[t].name;
      }
    }
  }
  return result;
}

}  // namespace sqlret
