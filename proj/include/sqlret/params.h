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

// Trainable tensors of the parser, grouped by module.

#ifndef SQLRET_PARAMS_H_
#define SQLRET_PARAMS_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sqlret {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Learning rates are assigned per module.
enum class Module : std::uint8_t { kEncoder, kGrounder, kPairHead };

// Gate rows are ordered input, forget, candidate, output.
struct LstmParams {
  Mat w_x;  // 4H x input
  Mat w_h;  // 4H x H
  Vec b;    // 4H

  int hidden() const { return static_cast<int>(w_h.cols()); }
};

struct EncoderParams {
  Mat token_embedding;    // embed x vocab
  Mat segment_embedding;  // embed x 2
  Mat link_embedding;     // embed x kNumLinkFeatures
  LstmParams forward;
  LstmParams backward;
  Mat projection;  // (d_q + 2 d_h) x 2H
  Vec projection_bias;
};

// Pointer scores s(i) = w . ((K h_i + k) * (Q d + q)) + w0, with an
// elementwise product, over the contextual vectors h_i of the candidate
// positions and the decoder state d.
struct GrounderParams {
  LstmParams cell;
  Mat key_w;    // attn x 2H
  Vec key_b;
  Mat query_w;  // attn x d_h
  Vec query_b;
  Vec score_w;  // attn
  Vec score_b;  // 1
};

// Logistic paraphrase classifier over the projected [CLS] vector.
struct PairHeadParams {
  Vec w;
  Vec b;  // 1
};

struct ModelParams {
  EncoderParams encoder;
  GrounderParams grounder;
  PairHeadParams pair_head;
};

struct TensorView {
  std::string name;
  Module module;
  double* data;
  Eigen::Index rows;
  Eigen::Index cols;

  Eigen::Index size() const { return rows * cols; }
};

// Stable enumeration of every tensor; the order defines checkpoint layout.
std::vector<TensorView> Tensors(ModelParams& params);

// Same shapes, all zeros.
ModelParams ZerosLike(const ModelParams& params);
void SetZero(ModelParams* params);

// Uniform in [-scale, scale], in tensor order.
void FillUniform(std::span<const TensorView> tensors, double scale,
                 std::uint64_t seed);

// FNV-1a over the raw bytes of the tensors of one module.
std::uint64_t Checksum(const ModelParams& params, Module module);

}  // namespace sqlret

#endif  // SQLRET_PARAMS_H_
