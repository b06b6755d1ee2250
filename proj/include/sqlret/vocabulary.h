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

#ifndef SQLRET_VOCABULARY_H_
#define SQLRET_VOCABULARY_H_

#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace sqlret {

// Token-to-id map. Ids 0..3 are [UNK], [NUM], [CLS], [SEP]; the SQL element
// tokens follow. Every all-digit token maps to [NUM] and any other unseen
// token to [UNK], so lookup never fails.
class Vocabulary {
 public:
  static constexpr int kUnk = 0;
  static constexpr int kNum = 1;
  static constexpr int kCls = 2;
  static constexpr int kSep = 3;

  Vocabulary();

  // Adds every token occurring at least `min_count` times, in order of
  // first appearance.
  void AddFrequent(std::span<const std::vector<std::string>> token_lists,
                   int min_count);
  int Add(std::string_view token);

  int Id(std::string_view token) const;
  bool Contains(std::string_view token) const;
  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  static Vocabulary FromTokens(std::vector<std::string> tokens);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> ids_;
};

}  // namespace sqlret

#endif  // SQLRET_VOCABULARY_H_
