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

// Sequence LSTM with explicit forward traces and hand-written
// backpropagation. Time runs along matrix columns.

#ifndef SQLRET_LSTM_H_
#define SQLRET_LSTM_H_

#include "sqlret/params.h"

namespace sqlret {

struct LstmTrace {
  Mat x;      // input x T
  Mat gates;  // 4H x T, after the nonlinearities
  Mat c;      // H x T
  Mat h;      // H x T
  Vec h0;
  Vec c0;
};

LstmTrace LstmForward(const LstmParams& p, const Mat& x, const Vec& h0,
                      const Vec& c0);

struct LstmInputGrads {
  Mat dx;
  Vec dh0;
  Vec dc0;
};

// `dh` holds the loss gradient with respect to every output column.
// Parameter gradients are accumulated into `grads`.
LstmInputGrads LstmBackward(const LstmParams& p, const LstmTrace& trace,
                            const Mat& dh, LstmParams* grads);

// One inference step, in place.
void LstmStep(const LstmParams& p, const Vec& x, Vec* h, Vec* c);

Mat ReverseColumns(const Mat& m);

}  // namespace sqlret

#endif  // SQLRET_LSTM_H_
