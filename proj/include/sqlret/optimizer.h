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

// Adam with one learning rate per module.

#ifndef SQLRET_OPTIMIZER_H_
#define SQLRET_OPTIMIZER_H_

#include "sqlret/params.h"

namespace sqlret {

struct AdamConfig {
  double lr_encoder = 1e-3;  // also used for the pair head
  double lr_grounder = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip_norm = 0.0;  // global gradient norm cap; 0 disables

  double RateFor(Module module) const;
};

class Adam {
 public:
  Adam(const AdamConfig& config, const ModelParams& shape);

  // One update. A module whose rate is 0 is left bit-identical.
  void Step(const ModelParams& grads, ModelParams* params);

  long steps() const { return steps_; }

 private:
  AdamConfig config_;
  ModelParams m_;
  ModelParams v_;
  long steps_ = 0;
};

double GradientNorm(const ModelParams& grads);

}  // namespace sqlret

#endif  // SQLRET_OPTIMIZER_H_
