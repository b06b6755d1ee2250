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

namespace sqlret {
namespace {

Vec Sigmoid(const Vec& z) {
  return (1.0 + (-z.array()).exp()).inverse().matrix();
}

// Applies the gate nonlinearities in place to one pre-activation column.
template <typename Column>
void Activate(Column gates, int hidden) {
  gates.segment(0, 2 * hidden) = Sigmoid(gates.segment(0, 2 * hidden));
  gates.segment(2 * hidden, hidden) =
      gates.segment(2 * hidden, hidden).array().tanh().matrix();
  gates.segment(3 * hidden, hidden) = Sigmoid(gates.segment(3 * hidden, hidden));
}

}  // namespace

LstmTrace LstmForward(const LstmParams& p, const Mat& x, const Vec& h0,
                      const Vec& c0) {
  const int hidden = p.hidden();
  const Eigen::Index steps = x.cols();
  LstmTrace t;
  t.x = x;
  t.h0 = h0;
  t.c0 = c0;
  t.gates = p.w_x * x;
  t.gates.colwise() += p.b;
  t.c.resize(hidden, steps);
  t.h.resize(hidden, steps);
  Vec h = h0;
  Vec c = c0;
  for (Eigen::Index s = 0; s < steps; ++s) {
    t.gates.col(s).noalias() += p.w_h * h;
    Activate(t.gates.col(s), hidden);
    auto g = t.gates.col(s);
    c = g.segment(hidden, hidden).cwiseProduct(c) +
        g.segment(0, hidden).cwiseProduct(g.segment(2 * hidden, hidden));
    h = g.segment(3 * hidden, hidden).cwiseProduct(c.array().tanh().matrix());
    t.c.col(s) = c;
    t.h.col(s) = h;
  }
  return t;
}

LstmInputGrads LstmBackward(const LstmParams& p, const LstmTrace& t,
                            const Mat& dh, LstmParams* grads) {
  const int hidden = p.hidden();
  const Eigen::Index steps = t.x.cols();
  Mat d_pre(4 * hidden, steps);
  Vec dh_next = Vec::Zero(hidden);
  Vec dc_next = Vec::Zero(hidden);
  for (Eigen::Index s = steps - 1; s >= 0; --s) {
    auto g = t.gates.col(s);
    const auto i = g.segment(0, hidden).array();
    const auto f = g.segment(hidden, hidden).array();
    const auto cand = g.segment(2 * hidden, hidden).array();
    const auto o = g.segment(3 * hidden, hidden).array();
    const Eigen::ArrayXd tanh_c = t.c.col(s).array().tanh();
    const Eigen::ArrayXd c_prev = s > 0 ? Vec(t.c.col(s - 1)) : t.c0;

    const Eigen::ArrayXd dh_total = dh.col(s).array() + dh_next.array();
    const Eigen::ArrayXd dc =
        dh_total * o * (1.0 - tanh_c.square()) + dc_next.array();
    auto d = d_pre.col(s);
    d.segment(0, hidden) = (dc * cand * i * (1.0 - i)).matrix();
    d.segment(hidden, hidden) = (dc * c_prev * f * (1.0 - f)).matrix();
    d.segment(2 * hidden, hidden) = (dc * i * (1.0 - cand.square())).matrix();
    d.segment(3 * hidden, hidden) = (dh_total * tanh_c * o * (1.0 - o)).matrix();
    dc_next = (dc * f).matrix();
    dh_next.noalias() = p.w_h.transpose() * d;
  }
  Mat h_prev(hidden, steps);
  if (steps > 0) {
    h_prev.col(0) = t.h0;
    if (steps > 1) h_prev.rightCols(steps - 1) = t.h.leftCols(steps - 1);
  }
  grads->w_x.noalias() += d_pre * t.x.transpose();
  grads->w_h.noalias() += d_pre * h_prev.transpose();
  grads->b += d_pre.rowwise().sum();
  LstmInputGrads out;
  out.dx.noalias() = p.w_x.transpose() * d_pre;
  out.dh0 = dh_next;
  out.dc0 = dc_next;
  return out;
}

void LstmStep(const LstmParams& p, const Vec& x, Vec* h, Vec* c) {
  const int hidden = p.hidden();
  Vec gates = p.w_x * x + p.w_h * *h + p.b;
  Activate(gates.col(0), hidden);
  *c = gates.segment(hidden, hidden).cwiseProduct(*c) +
       gates.segment(0, hidden).cwiseProduct(gates.segment(2 * hidden, hidden));
  *h = gates.segment(3 * hidden, hidden)
           .cwiseProduct(c->array().tanh().matrix());
}

Mat ReverseColumns(const Mat& m) { return m.rowwise().reverse(); }

}  // namespace sqlret
