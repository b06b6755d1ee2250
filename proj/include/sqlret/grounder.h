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

// Pointer decoder that fills the lexical slots of a pattern template: the
// select column, where columns and where-value spans.

#ifndef SQLRET_GROUNDER_H_
#define SQLRET_GROUNDER_H_

#include <vector>

#include "sqlret/corpus.h"
#include "sqlret/encoder.h"
#include "sqlret/params.h"
#include "sqlret/sql_logic.h"

namespace sqlret {

struct DecoderState {
  Vec h;
  Vec c;
};

// h = g[0:d_h], c = g[d_h:2 d_h]. Throws kDimensionMismatch unless
// |g| = 2 d_h.
DecoderState InitState(const Vec& g, int d_h);

struct PointerCandidates {
  std::vector<int> positions;  // layout indices
  std::vector<bool> masked;    // parallel to positions

  int unmasked() const;
};

struct StepResult {
  std::vector<double> probabilities;  // parallel to candidates; 0 if masked
  DecoderState state;
};

// Advances the decoder cell on `input`, then scores every unmasked candidate
// with s(i) = w . ((K v_i + k) * (Q h + q)) + w0, the product taken
// elementwise, and normalizes with softmax.
// Throws kEmptyCandidates when nothing is left after masking.
StepResult DecodeStep(const GrounderParams& params, const Vec& input,
                      const DecoderState& state, const Mat& token_vectors,
                      const PointerCandidates& candidates);

struct GroundingResult {
  SqlQuery query;
  std::vector<int> slot_pointers;  // one per pointer step, layout positions
  std::vector<double> step_log_probs;
};

// Greedy decoding in template order. Ties go to the lowest position.
// Throws kEmptyCandidates when the template needs more where columns than
// the table has headers.
GroundingResult Ground(const GrounderParams& params,
                       const SlotTemplate& slot_template,
                       const EncodedQuestion& encoded);

struct GroundingInputGrads {
  Mat d_token_vectors;
  Vec d_g;
};

// Teacher-forced negative log-likelihood of the gold pointers. With `grads`
// set, accumulates parameter gradients and writes input gradients into
// `input_grads`. Throws kPatternMismatch when the gold query does not match
// the template and kUnalignedValue when a gold value has no span.
double GroundingLoss(const GrounderParams& params,
                     const SlotTemplate& slot_template,
                     const EncodedQuestion& encoded, const Example& gold,
                     GrounderParams* grads,
                     GroundingInputGrads* input_grads);

}  // namespace sqlret

#endif  // SQLRET_GROUNDER_H_
