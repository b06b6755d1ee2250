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

// The question abstractor: lays out [CLS], SQL element tokens, question and
// headers as one sequence, contextualizes it with a bidirectional LSTM and
// projects a summary vector into the retrieval vector q and the grounder
// seed g. The summary is the mean of all token vectors: a recurrent state at
// [CLS] would only see the question through the constant element tokens.

#ifndef SQLRET_ENCODER_H_
#define SQLRET_ENCODER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sqlret/corpus.h"
#include "sqlret/lstm.h"
#include "sqlret/params.h"
#include "sqlret/sql_logic.h"
#include "sqlret/vocabulary.h"

namespace sqlret {

struct EncoderConfig {
  int d_q = 256;
  int d_h = 100;
  int embed_dim = 32;
  int hidden_dim = 48;  // per direction
  std::uint64_t seed = 1;

  int projection_dim() const { return d_q + 2 * d_h; }
  int token_dim() const { return 2 * hidden_dim; }
  void Validate() const;
  bool operator==(const EncoderConfig&) const = default;
};

enum class TokenRole : std::uint8_t {
  kCls,
  kElement,
  kQuestion,
  kHeaderStart,
  kHeaderCont,
  kSeparator,
};

// Exact-match links between question and headers. Headers mentioned in the
// question are ranked by first mention; a header token carries its header's
// rank and the question tokens of that mention carry the same rank.
namespace link {
inline constexpr int kNone = 0;
inline constexpr int kHeaderRank = 1;    // 1..5
inline constexpr int kQuestionRank = 6;  // 6..10
inline constexpr int kMaxRank = 4;
inline constexpr int kPairShared = 11;  // token also occurs in the other text
inline constexpr int kCount = 12;
}  // namespace link

struct InputLayout {
  std::vector<std::string> tokens;
  std::vector<int> segment_ids;
  std::vector<TokenRole> roles;
  std::vector<int> link_features;
  std::vector<int> header_anchors;  // first token of each header
  int question_begin = 0;
  int question_size = 0;
  std::array<int, kNumElementTokens> element_positions{};

  // Raw question and per-token byte ranges, used to render extracted values
  // exactly as written. Optional.
  std::string question_text;
  std::vector<std::pair<std::size_t, std::size_t>> question_offsets;

  int size() const { return static_cast<int>(tokens.size()); }
  int ElementPosition(ElementToken e) const {
    return element_positions[static_cast<int>(e)];
  }
  // Text of question tokens [begin, end] (question-relative, inclusive).
  std::string QuestionSpanText(int begin, int end) const;
};

// [CLS] E [SEP] Q [SEP] H1 [SEP] ... Hn [SEP], with the element tokens of E
// separated by [SEP]. Throws kEmptyInput for an empty question, no headers
// or an empty header.
InputLayout BuildInput(std::span<const std::string> question_tokens,
                       std::span<const std::vector<std::string>> headers,
                       std::span<const ElementToken> elements =
                           AllElementTokens());
InputLayout BuildExampleInput(const Example& example, const Dataset& dataset);

// [CLS] Q1 [SEP] Q2 [SEP] for paraphrase classification.
InputLayout BuildPairInput(std::span<const std::string> first,
                           std::span<const std::string> second);

struct EncodedQuestion {
  Vec q;              // d_q
  Vec g;              // 2 d_h
  Mat token_vectors;  // 2H x layout size
  InputLayout layout;
};

class QuestionEncoder {
 public:
  virtual ~QuestionEncoder() = default;
  virtual EncodedQuestion Encode(const InputLayout& layout) const = 0;
  virtual int d_q() const = 0;
};

std::vector<int> TokenIds(const Vocabulary& vocab, const InputLayout& layout);

struct EncoderTrace {
  std::vector<int> token_ids;
  LstmTrace forward;
  LstmTrace backward;  // over the reversed sequence
  Mat token_vectors;
  Vec pooled;          // mean token vector, standing in for [CLS]
  Vec projected;       // d_q + 2 d_h
};

EncoderTrace EncoderForward(const EncoderParams& params,
                            const EncoderConfig& config,
                            const InputLayout& layout,
                            std::vector<int> token_ids);

// Backpropagates gradients with respect to the token vectors and the
// projected [CLS] vector; accumulates into `grads`.
void EncoderBackward(const EncoderParams& params, const EncoderConfig& config,
                     const InputLayout& layout, const EncoderTrace& trace,
                     const Mat& d_token_vectors, const Vec& d_projected,
                     EncoderParams* grads);

class RecurrentEncoder : public QuestionEncoder {
 public:
  RecurrentEncoder(const EncoderConfig& config, const Vocabulary& vocab,
                   const EncoderParams& params)
      : config_(config), vocab_(vocab), params_(params) {}

  EncodedQuestion Encode(const InputLayout& layout) const override;
  int d_q() const override { return config_.d_q; }

 private:
  const EncoderConfig& config_;
  const Vocabulary& vocab_;
  const EncoderParams& params_;
};

// Externally computed vectors keyed by question text, read from a
// line-delimited file of {"question": text, "q": [...], "g": [...]}. Token
// vectors are zero, so this encoder serves retrieval only.
class PrecomputedEncoder : public QuestionEncoder {
 public:
  static PrecomputedEncoder Load(const std::filesystem::path& path,
                                 int token_dim);

  EncodedQuestion Encode(const InputLayout& layout) const override;
  int d_q() const override { return d_q_; }

 private:
  int d_q_ = 0;
  int token_dim_ = 0;
  std::map<std::string, std::pair<Vec, Vec>> vectors_;
};

// Splits the projected [CLS] vector.
Vec RetrievalPart(const EncoderConfig& config, const Vec& projected);
Vec GroundingPart(const EncoderConfig& config, const Vec& projected);

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t checked = 0;
  std::string worst_tensor;
};

// Loss callback: returns the loss at `params` and, when `grads` is non-null,
// accumulates the analytic gradient into it.
using LossFunction =
    std::function<double(const ModelParams& params, ModelParams* grads)>;

// Compares analytic gradients with central finite differences on
// `per_tensor` random coordinates of every tensor.
GradCheckResult GradCheck(ModelParams& params, const LossFunction& loss,
                          std::size_t per_tensor, std::uint64_t seed,
                          double step = 1e-5);

}  // namespace sqlret

#endif  // SQLRET_ENCODER_H_
