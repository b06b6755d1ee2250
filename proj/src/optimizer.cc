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

#include "sqlret/optimizer.h"

#include <cmath>
#include <vector>

namespace sqlret {

double AdamConfig::RateFor(Module module) const {
  return module == Module::kGrounder ? lr_grounder : lr_encoder;
}

Adam::Adam(const AdamConfig& config, const ModelParams& shape)
    : config_(config), m_(ZerosLike(shape)), v_(ZerosLike(shape)) {}

double GradientNorm(const ModelParams& grads) {
  double sum = 0.0;
  for (const TensorView& t : Tensors(const_cast<ModelParams&>(grads))) {
    for (Eigen::Index i = 0; i < t.size(); ++i) sum += t.data[i] * t.data[i];
  }
  return std::sqrt(sum);
}

void Adam::Step(const ModelParams& grads, ModelParams* params) {
  ++steps_;
  double scale = 1.0;
  if (config_.clip_norm > 0.0) {
    const double norm = GradientNorm(grads);
    if (norm > config_.clip_norm) scale = config_.clip_norm / norm;
  }
  const double correction1 = 1.0 - std::pow(config_.beta1, steps_);
  const double correction2 = 1.0 - std::pow(config_.beta2, steps_);
  std::vector<TensorView> p = Tensors(*params);
  std::vector<TensorView> g = Tensors(const_cast<ModelParams&>(grads));
  std::vector<TensorView> m = Tensors(m_);
  std::vector<TensorView> v = Tensors(v_);
  for (std::size_t t = 0; t < p.size(); ++t) {
    const double lr = config_.RateFor(p[t].module);
    if (lr == 0.0) continue;
    for (Eigen::Index i = 0; i < p[t].size(); ++i) {
      const double grad = scale * g[t].data[i];
      m[t].data[i] = config_.beta1 * m[t].data[i] + (1 - config_.beta1) * grad;
      v[t].data[i] =
          config_.beta2 * v[t].data[i] + (1 - config_.beta2) * grad * grad;
      const double m_hat = m[t].data[i] / correction1;
      const double v_hat = v[t].data[i] / correction2;
      p[t].data[i] -= lr * m_hat / (std::sqrt(v_hat) + config_.epsilon);
    }
  }
}

}  // namespace sqlret
