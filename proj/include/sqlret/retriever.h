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

// Pattern retrieval: an exact L2 nearest-neighbor index over encoded train
// questions, majority voting, and the contrastive training loss.

#ifndef SQLRET_RETRIEVER_H_
#define SQLRET_RETRIEVER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "sqlret/corpus.h"
#include "sqlret/encoder.h"
#include "sqlret/model.h"
#include "sqlret/sql_logic.h"

namespace sqlret {

struct IndexEntry {
  Vec q;
  PatternId pattern;
  std::string example_id;
};

struct RetrievalIndex {
  std::vector<IndexEntry> entries;
  int d_q = 0;
  std::string source_tag;

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }
};

struct Neighbor {
  std::string example_id;
  PatternId pattern;
  double distance = 0.0;
};

struct RetrievalResult {
  std::vector<Neighbor> neighbors;  // ascending distance
  PatternId chosen_pattern;
};

// One entry per example, in dataset order. Throws kEmptyDataset.
RetrievalIndex BuildIndex(const Dataset& dataset,
                          const QuestionEncoder& encoder,
                          std::string source_tag, int jobs = 1);

// Exact k nearest entries by L2 distance; equal distances keep index order.
// k is clamped to the index size. Throws kEmptyIndex and, for a query of the
// wrong length, kDimensionMismatch.
RetrievalResult Retrieve(const RetrievalIndex& index, const Vec& q, int k);

// Most frequent pattern; a tie goes to the pattern whose nearest
// representative is closest.
PatternId Vote(std::span<const Neighbor> neighbors);

inline constexpr int kNumNegatives = 5;

struct RetrievalLossGrads {
  Vec d_anchor;
  Vec d_positive;
  std::vector<Vec> d_negatives;
};

// -log softmax(-d)[positive] over the L2 distances from the anchor to the
// positive and the five negatives. Throws kDimensionMismatch on vectors of
// unequal length or a negative count other than five.
double RetrievalLoss(const Vec& anchor, const Vec& positive,
                     std::span<const Vec> negatives,
                     RetrievalLossGrads* grads = nullptr);

// Same loss from the six distances, positive first.
double RetrievalLossFromDistances(std::span<const double> distances);

struct Sextet {
  int anchor = 0;
  int positive = 0;
  std::array<int, kNumNegatives> negatives{};
};

// Draws positives and negatives for anchors of one dataset.
class SextetSampler {
 public:
  explicit SextetSampler(const Dataset& dataset);

  bool HasPositive(int anchor) const;
  // Throws kNoPositiveAvailable when no other example shares the anchor's
  // pattern and kNoNegativeAvailable when every example does. Negatives are
  // distinct when at least five candidates exist, else drawn with
  // replacement.
  Sextet Sample(int anchor, std::mt19937_64& rng) const;

 private:
  std::vector<PatternId> patterns_;
  std::vector<std::vector<int>> by_pattern_;  // indexed by PatternId
};

Sextet SampleTrainingBatch(const Dataset& dataset, int anchor,
                           std::uint64_t seed);

// Fresh index over `dataset` with the model's encoder; the model is not
// modified.
RetrievalIndex SwapRetrievalSet(const Model& model, const Dataset& dataset,
                                std::string source_tag, int jobs = 1);

// "SQLRETIX", u32 version, u32 d_q, u64 count, tag, vectors, pattern ids,
// example ids.
void SaveIndex(const std::filesystem::path& path, const RetrievalIndex& index);
// Throws kDimensionMismatch when `expected_d_q` > 0 and differs.
RetrievalIndex LoadIndex(const std::filesystem::path& path,
                         int expected_d_q = 0);

}  // namespace sqlret

#endif  // SQLRET_RETRIEVER_H_
