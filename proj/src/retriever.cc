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

#include "sqlret/retriever.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>

#include "sqlret/error.h"
#include "sqlret/parallel.h"

namespace sqlret {
namespace {

constexpr char kIndexMagic[8] = {'S', 'Q', 'L', 'R', 'E', 'T', 'I', 'X'};
constexpr std::uint32_t kIndexVersion = 1;

template <typename T>
void WritePod(std::ofstream& out, const T& value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

void WriteString(std::ofstream& out, const std::string& s) {
  WritePod<std::uint64_t>(out, s.size());
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string ReadString(std::ifstream& in) {
  const auto size = ReadPod<std::uint64_t>(in);
  if (!in || size > (1u << 30)) {
    Fail(ErrorCode::kVersionMismatch, "corrupt index string");
  }
  std::string s(size, '\0');
  in.read(s.data(), static_cast<std::streamsize>(size));
  return s;
}

}  // namespace

RetrievalIndex BuildIndex(const Dataset& dataset,
                          const QuestionEncoder& encoder,
                          std::string source_tag, int jobs) {
  if (dataset.empty()) {
    Fail(ErrorCode::kEmptyDataset, "cannot index an empty dataset");
  }
  RetrievalIndex index;
  index.d_q = encoder.d_q();
  index.source_tag = std::move(source_tag);
  index.entries.resize(dataset.size());
  ParallelFor(dataset.size(), jobs, [&](std::size_t i) {
    const Example& ex = dataset.examples[i];
    index.entries[i] = {encoder.Encode(BuildExampleInput(ex, dataset)).q,
                        ex.pattern(), ex.id};
  });
  return index;
}

RetrievalResult Retrieve(const RetrievalIndex& index, const Vec& q, int k) {
  if (index.empty()) Fail(ErrorCode::kEmptyIndex, "retrieval index is empty");
  if (q.size() != index.d_q) {
    Fail(ErrorCode::kDimensionMismatch,
         "query has " + std::to_string(q.size()) + " entries, index has d_q " +
             std::to_string(index.d_q));
  }
  if (k < 1) Fail(ErrorCode::kConfigError, "k must be at least 1");
  const std::size_t n = index.size();
  std::vector<double> sq(n);
  for (std::size_t i = 0; i < n; ++i) {
    sq[i] = (index.entries[i].q - q).squaredNorm();
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t take = std::min<std::size_t>(n, static_cast<std::size_t>(k));
  std::partial_sort(order.begin(), order.begin() + take, order.end(),
                    [&](std::size_t a, std::size_t b) {
                      return sq[a] != sq[b] ? sq[a] < sq[b] : a < b;
                    });
  RetrievalResult result;
  for (std::size_t r = 0; r < take; ++r) {
    const IndexEntry& e = index.entries[order[r]];
    result.neighbors.push_back({e.example_id, e.pattern, std::sqrt(sq[order[r]])});
  }
  result.chosen_pattern = Vote(result.neighbors);
  return result;
}

PatternId Vote(std::span<const Neighbor> neighbors) {
  struct Tally {
    int count = 0;
    std::size_t first = 0;
  };
  std::map<PatternId, Tally> tally;
  for (std::size_t i = 0; i < neighbors.size(); ++i) {
    auto [it, inserted] = tally.try_emplace(neighbors[i].pattern, Tally{0, i});
    ++it->second.count;
  }
  PatternId best;
  Tally best_tally{0, std::numeric_limits<std::size_t>::max()};
  for (const auto& [pattern, t] : tally) {
    if (t.count > best_tally.count ||
        (t.count == best_tally.count && t.first < best_tally.first)) {
      best = pattern;
      best_tally = t;
    }
  }
  return best;
}

double RetrievalLossFromDistances(std::span<const double> distances) {
  double top = -std::numeric_limits<double>::infinity();
  for (double d : distances) top = std::max(top, -d);
  double total = 0.0;
  for (double d : distances) total += std::exp(-d - top);
  return distances[0] + top + std::log(total);
}

double RetrievalLoss(const Vec& anchor, const Vec& positive,
                     std::span<const Vec> negatives,
                     RetrievalLossGrads* grads) {
  if (negatives.size() != kNumNegatives) {
    Fail(ErrorCode::kDimensionMismatch,
         "expected 5 negatives, got " + std::to_string(negatives.size()));
  }
  std::vector<const Vec*> others{&positive};
  for (const Vec& n : negatives) others.push_back(&n);
  std::vector<double> distances;
  for (const Vec* v : others) {
    if (v->size() != anchor.size()) {
      Fail(ErrorCode::kDimensionMismatch, "retrieval vectors differ in length");
    }
    distances.push_back((anchor - *v).norm());
  }
  const double loss = RetrievalLossFromDistances(distances);
  if (grads == nullptr) return loss;

  // dL/dd_j = [j is positive] - softmax(-d)_j.
  double top = -std::numeric_limits<double>::infinity();
  for (double d : distances) top = std::max(top, -d);
  std::vector<double> p(distances.size());
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    p[j] = std::exp(-distances[j] - top);
    total += p[j];
  }
  grads->d_anchor = Vec::Zero(anchor.size());
  grads->d_negatives.assign(negatives.size(), Vec::Zero(anchor.size()));
  for (std::size_t j = 0; j < others.size(); ++j) {
    const double dd = (j == 0 ? 1.0 : 0.0) - p[j] / total;
    Vec d_other = Vec::Zero(anchor.size());
    // The distance is not differentiable at zero; use the zero subgradient.
    if (distances[j] > 1e-12) {
      const Vec unit = (anchor - *others[j]) / distances[j];
      grads->d_anchor += dd * unit;
      d_other = -dd * unit;
    }
    if (j == 0) {
      grads->d_positive = std::move(d_other);
    } else {
      grads->d_negatives[j - 1] = std::move(d_other);
    }
  }
  return loss;
}

SextetSampler::SextetSampler(const Dataset& dataset)
    : by_pattern_(kTaxonomySize) {
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    patterns_.push_back(dataset.examples[i].pattern());
    by_pattern_[patterns_.back().value].push_back(static_cast<int>(i));
  }
}

bool SextetSampler::HasPositive(int anchor) const {
  return by_pattern_[patterns_[anchor].value].size() > 1;
}

Sextet SextetSampler::Sample(int anchor, std::mt19937_64& rng) const {
  const auto& same = by_pattern_[patterns_[anchor].value];
  if (same.size() < 2) {
    Fail(ErrorCode::kNoPositiveAvailable,
         "no other example shares the pattern of example " +
             std::to_string(anchor));
  }
  const std::size_t others = patterns_.size() - same.size();
  if (others == 0) {
    Fail(ErrorCode::kNoNegativeAvailable,
         "every example shares the pattern of example " +
             std::to_string(anchor));
  }
  Sextet s;
  s.anchor = anchor;
  // Uniform over the same-pattern examples other than the anchor.
  std::uniform_int_distribution<std::size_t> pick_same(0, same.size() - 2);
  const auto self = std::find(same.begin(), same.end(), anchor) - same.begin();
  std::size_t p = pick_same(rng);
  if (static_cast<std::ptrdiff_t>(p) >= self) ++p;
  s.positive = same[p];

  // Negatives are drawn by rank among the examples with another pattern.
  auto nth_other = [&](std::size_t r) {
    for (std::size_t i = 0;; ++i) {
      if (patterns_[i] != patterns_[anchor] && r-- == 0) {
        return static_cast<int>(i);
      }
    }
  };
  std::uniform_int_distribution<std::size_t> pick_other(0, others - 1);
  if (others >= kNumNegatives) {
    std::array<std::size_t, kNumNegatives> ranks{};
    for (int j = 0; j < kNumNegatives; ++j) {
      std::size_t r;
      do {
        r = pick_other(rng);
      } while (std::find(ranks.begin(), ranks.begin() + j, r) !=
               ranks.begin() + j);
      ranks[j] = r;
    }
    for (int j = 0; j < kNumNegatives; ++j) s.negatives[j] = nth_other(ranks[j]);
  } else {
    for (int j = 0; j < kNumNegatives; ++j) {
      s.negatives[j] = nth_other(pick_other(rng));
    }
  }
  return s;
}

Sextet SampleTrainingBatch(const Dataset& dataset, int anchor,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return SextetSampler(dataset).Sample(anchor, rng);
}

RetrievalIndex SwapRetrievalSet(const Model& model, const Dataset& dataset,
                                std::string source_tag, int jobs) {
  return BuildIndex(dataset, model.Encoder(), std::move(source_tag), jobs);
}

void SaveIndex(const std::filesystem::path& path, const RetrievalIndex& index) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIoError, "cannot write " + path.string());
  out.write(kIndexMagic, sizeof(kIndexMagic));
  WritePod<std::uint32_t>(out, kIndexVersion);
  WritePod<std::uint32_t>(out, static_cast<std::uint32_t>(index.d_q));
  WritePod<std::uint64_t>(out, index.size());
  WriteString(out, index.source_tag);
  for (const IndexEntry& e : index.entries) {
    out.write(reinterpret_cast<const char*>(e.q.data()),
              static_cast<std::streamsize>(sizeof(double) * index.d_q));
  }
  for (const IndexEntry& e : index.entries) {
    WritePod<std::int32_t>(out, e.pattern.value);
  }
  for (const IndexEntry& e : index.entries) WriteString(out, e.example_id);
  if (!out) Fail(ErrorCode::kIoError, "write failed for " + path.string());
}

RetrievalIndex LoadIndex(const std::filesystem::path& path, int expected_d_q) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path.string());
  char magic[sizeof(kIndexMagic)];
  in.read(magic, sizeof(magic));
  const auto version = ReadPod<std::uint32_t>(in);
  if (!in || std::memcmp(magic, kIndexMagic, sizeof(magic)) != 0 ||
      version != kIndexVersion) {
    Fail(ErrorCode::kVersionMismatch, path.string() + " is not an index file");
  }
  RetrievalIndex index;
  index.d_q = static_cast<int>(ReadPod<std::uint32_t>(in));
  const auto count = ReadPod<std::uint64_t>(in);
  if (expected_d_q > 0 && index.d_q != expected_d_q) {
    Fail(ErrorCode::kDimensionMismatch,
         path.string() + " has d_q " + std::to_string(index.d_q) +
             ", expected " + std::to_string(expected_d_q));
  }
  index.source_tag = ReadString(in);
  index.entries.resize(count);
  for (IndexEntry& e : index.entries) {
    e.q.resize(index.d_q);
    in.read(reinterpret_cast<char*>(e.q.data()),
            static_cast<std::streamsize>(sizeof(double) * index.d_q));
  }
  for (IndexEntry& e : index.entries) {
    e.pattern.value = ReadPod<std::int32_t>(in);
    if (e.pattern.value < 0 || e.pattern.value >= kTaxonomySize) {
      Fail(ErrorCode::kVersionMismatch, path.string() + ": bad pattern id");
    }
  }
  for (IndexEntry& e : index.entries) e.example_id = ReadString(in);
  if (!in) Fail(ErrorCode::kIoError, "truncated index " + path.string());
  return index;
}

}  // namespace sqlret
