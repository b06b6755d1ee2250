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


#include "sqlret/lstm.h"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "test_util.h"

namespace sqlret {
namespace {

LstmParams RandomLstm(int in, int hidden, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  LstmParams p;
  p.w_x = Mat::NullaryExpr(4 * hidden, in, [&] { return u(rng); });
  p.w_h = Mat::NullaryExpr(4 * hidden, hidden, [&] { return u(rng); });
  p.b = Vec::NullaryExpr(4 * hidden, [&] { return u(rng); });
  return p;
}

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Scalar cell written out gate by gate.
TEST(LstmTest, OneUnitOneStepByHand) {
  LstmParams p;
  p.w_x = Mat(4, 1);
  p.w_x << 0.5, -0.3, 0.8, 0.1;
  p.w_h = Mat(4, 1);
  p.w_h << 0.2, 0.4, -0.6, 0.7;
  p.b = Vec(4);
  p.b << 0.1, 0.2, 0.3, 0.4;
  const double x = 1.5, h0 = -0.25, c0 = 0.6;
  double i = Sigmoid(0.5 * x + 0.2 * h0 + 0.1);
  double f = Sigmoid(-0.3 * x + 0.4 * h0 + 0.2);
  double g = std::tanh(0.8 * x - 0.6 * h0 + 0.3);
  double o = Sigmoid(0.1 * x + 0.7 * h0 + 0.4);
  double c = f * c0 + i * g;
  double h = o * std::tanh(c);

  Mat xs(1, 1);
  xs << x;
  LstmTrace t = LstmForward(p, xs, Vec::Constant(1, h0), Vec::Constant(1, c0));
  EXPECT_NEAR(t.c(0, 0), c, 1e-15);
  EXPECT_NEAR(t.h(0, 0), h, 1e-15);

  Vec hs = Vec::Constant(1, h0), cs = Vec::Constant(1, c0);
  LstmStep(p, xs.col(0), &hs, &cs);
  EXPECT_NEAR(hs[0], h, 1e-15);
  EXPECT_NEAR(cs[0], c, 1e-15);
}

TEST(LstmTest, StepMatchesSequence) {
  std::mt19937_64 rng(2);
  LstmParams p = RandomLstm(3, 4, rng);
  Mat x = Mat::NullaryExpr(3, 6, [&] { return std::sin(rng() % 100 * 0.1); });
  Vec h = Vec::Zero(4), c = Vec::Zero(4);
  LstmTrace t = LstmForward(p, x, h, c);
  for (int s = 0; s < 6; ++s) {
    LstmStep(p, x.col(s), &h, &c);
    EXPECT_LT((h - t.h.col(s)).norm(), 1e-14);
  }
}

// Loss = sum_t w_t . h_t; every parameter and input against central
// differences.
TEST(LstmTest, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(4);
  const int in = 3, hidden = 2, steps = 4;
  LstmParams p = RandomLstm(in, hidden, rng);
  std::uniform_real_distribution<double> u(-1, 1);
  Mat x = Mat::NullaryExpr(in, steps, [&] { return u(rng); });
  Mat w = Mat::NullaryExpr(hidden, steps, [&] { return u(rng); });
  Vec h0 = Vec::NullaryExpr(hidden, [&] { return u(rng); });
  Vec c0 = Vec::NullaryExpr(hidden, [&] { return u(rng); });

  auto loss = [&](const LstmParams& q, const Mat& xs, const Vec& hh,
                  const Vec& cc) {
    return LstmForward(q, xs, hh, cc).h.cwiseProduct(w).sum();
  };
  LstmTrace trace = LstmForward(p, x, h0, c0);
  LstmParams grads{Mat::Zero(4 * hidden, in), Mat::Zero(4 * hidden, hidden),
                   Vec::Zero(4 * hidden)};
  LstmInputGrads ig = LstmBackward(p, trace, w, &grads);

  const double step = 1e-6;
  auto check = [&](double* value, double analytic, auto eval) {
    double saved = *value;
    *value = saved + step;
    double up = eval();
    *value = saved - step;
    double down = eval();
    *value = saved;
    EXPECT_NEAR(analytic, (up - down) / (2 * step), 1e-8);
  };
  auto eval = [&] { return loss(p, x, h0, c0); };
  for (int i = 0; i < p.w_x.size(); ++i) {
    check(p.w_x.data() + i, grads.w_x.data()[i], eval);
  }
  for (int i = 0; i < p.w_h.size(); ++i) {
    check(p.w_h.data() + i, grads.w_h.data()[i], eval);
  }
  for (int i = 0; i < p.b.size(); ++i) {
    check(p.b.data() + i, grads.b.data()[i], eval);
  }
  for (int i = 0; i < x.size(); ++i) check(x.data() + i, ig.dx.data()[i], eval);
  for (int i = 0; i < hidden; ++i) {
    check(h0.data() + i, ig.dh0[i], eval);
    check(c0.data() + i, ig.dc0[i], eval);
  }
}

TEST(LstmTest, ReverseColumns) {
  Mat m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  Mat want(2, 3);
  want << 3, 2, 1, 6, 5, 4;
  EXPECT_EQ(ReverseColumns(m), want);
}

}  // namespace
}  // namespace sqlret
