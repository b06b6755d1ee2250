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


// Small fixtures shared by the unit tests.

#ifndef SQLRET_TESTS_TEST_UTIL_H_
#define SQLRET_TESTS_TEST_UTIL_H_

#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "sqlret/corpus.h"
#include "sqlret/model.h"
#include "sqlret/synthetic.h"
#include "sqlret/vocabulary.h"

namespace sqlret::testing {

// Fresh directory under the gtest temp root, removed on destruction.
class ScopedDir {
 public:
  explicit ScopedDir(const std::string& name) {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    std::string tag = name;
    if (info != nullptr) {
      tag = std::string(info->test_suite_name()) + "_" + info->name() + "_" +
            name;
    }
    path_ = std::filesystem::path(::testing::TempDir()) / ("sqlret_" + tag);
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScopedDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& leaf) const {
    return path_ / leaf;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline void WriteFile(const std::filesystem::path& path,
                      const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline Dataset Synthetic(std::size_t count, std::uint64_t seed,
                         LexicalSplit split = LexicalSplit::kTrain,
                         std::vector<LogicalPattern> patterns = {}) {
  SyntheticOptions options;
  options.patterns =
      patterns.empty() ? DeskScalePatterns() : std::move(patterns);
  options.count = count;
  options.seed = seed;
  options.split = split;
  options.id_prefix = split == LexicalSplit::kTrain  ? "train"
                      : split == LexicalSplit::kDev ? "dev"
                                                    : "test";
  return GenerateSynthetic(options);
}

inline Vocabulary VocabularyOf(const Dataset& dataset) {
  std::vector<std::vector<std::string>> lists;
  for (const Example& ex : dataset.examples) {
    lists.push_back(ex.tokens);
    for (auto& header : dataset.HeaderTokens(ex)) lists.push_back(header);
  }
  Vocabulary vocab;
  vocab.AddFrequent(lists, 1);
  return vocab;
}

// Dimensions small enough for finite differences and fast tests.
inline ModelConfig TinyConfig(std::uint64_t seed = 1) {
  ModelConfig config;
  config.encoder.d_q = 6;
  config.encoder.d_h = 3;
  config.encoder.embed_dim = 4;
  config.encoder.hidden_dim = 5;
  config.encoder.seed = seed;
  config.attention_dim = 4;
  config.init_scale = 0.5;
  return config;
}

inline ModelConfig SmallConfig(std::uint64_t seed = 1) {
  ModelConfig config;
  config.encoder.d_q = 16;
  config.encoder.d_h = 8;
  config.encoder.embed_dim = 12;
  config.encoder.hidden_dim = 12;
  config.encoder.seed = seed;
  config.attention_dim = 16;
  return config;
}

inline Vec RandomVec(int n, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace sqlret::testing

#endif  // SQLRET_TESTS_TEST_UTIL_H_
