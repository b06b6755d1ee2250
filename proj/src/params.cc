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

#include "sqlret/params.h"

#include <cstring>
#include <random>

namespace sqlret {
namespace {

template <typename Tensor>
void Add(std::vector<TensorView>* out, std::string name, Module module,
         Tensor& t) {
  out->push_back({std::move(name), module, t.data(), t.rows(), t.cols()});
}

void AddLstm(std::vector<TensorView>* out, const std::string& prefix,
             Module module, LstmParams& p) {
  Add(out, prefix + ".w_x", module, p.w_x);
  Add(out, prefix + ".w_h", module, p.w_h);
  Add(out, prefix + ".b", module, p.b);
}

}  // namespace

std::vector<TensorView> Tensors(ModelParams& params) {
  std::vector<TensorView> out;
  EncoderParams& e = params.encoder;
  Add(&out, "encoder.token_embedding", Module::kEncoder, e.token_embedding);
  Add(&out, "encoder.segment_embedding", Module::kEncoder, e.segment_embedding);
  Add(&out, "encoder.link_embedding", Module::kEncoder, e.link_embedding);
  AddLstm(&out, "encoder.forward", Module::kEncoder, e.forward);
  AddLstm(&out, "encoder.backward", Module::kEncoder, e.backward);
  Add(&out, "encoder.projection", Module::kEncoder, e.projection);
  Add(&out, "encoder.projection_bias", Module::kEncoder, e.projection_bias);
  GrounderParams& g = params.grounder;
  AddLstm(&out, "grounder.cell", Module::kGrounder, g.cell);
  Add(&out, "grounder.key_w", Module::kGrounder, g.key_w);
  Add(&out, "grounder.key_b", Module::kGrounder, g.key_b);
  Add(&out, "grounder.query_w", Module::kGrounder, g.query_w);
  Add(&out, "grounder.query_b", Module::kGrounder, g.query_b);
  Add(&out, "grounder.score_w", Module::kGrounder, g.score_w);
  Add(&out, "grounder.score_b", Module::kGrounder, g.score_b);
  Add(&out, "pair_head.w", Module::kPairHead, params.pair_head.w);
  Add(&out, "pair_head.b", Module::kPairHead, params.pair_head.b);
  return out;
}

ModelParams ZerosLike(const ModelParams& params) {
  ModelParams zeros = params;
  SetZero(&zeros);
  return zeros;
}

void SetZero(ModelParams* params) {
  for (TensorView& t : Tensors(*params)) {
    std::memset(t.data, 0, sizeof(double) * static_cast<std::size_t>(t.size()));
  }
}

void FillUniform(std::span<const TensorView> tensors, double scale,
                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-scale, scale);
  for (const TensorView& t : tensors) {
    for (Eigen::Index i = 0; i < t.size(); ++i) t.data[i] = dist(rng);
  }
}

std::uint64_t Checksum(const ModelParams& params, Module module) {
  std::uint64_t hash = 1469598103934665603ULL;
  // Tensors() needs a mutable object; the bytes are only read.
  for (const TensorView& t : Tensors(const_cast<ModelParams&>(params))) {
    if (t.module != module) continue;
    const auto* bytes = reinterpret_cast<const unsigned char*>(t.data);
    const std::size_t n = sizeof(double) * static_cast<std::size_t>(t.size());
    for (std::size_t i = 0; i < n; ++i) {
      hash ^= bytes[i];
      hash *= 1099511628211ULL;
    }
  }
  return hash;
}

}  // namespace sqlret
