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

#include "sqlret/vocabulary.h"

#include <map>

#include "sqlret/error.h"
#include "sqlret/sql_logic.h"
#include "sqlret/tokenizer.h"

namespace sqlret {

Vocabulary::Vocabulary() {
  for (std::string_view special : {"[UNK]", "[NUM]", "[CLS]", "[SEP]"}) {
    Add(special);
  }
  for (ElementToken e : AllElementTokens()) Add(ElementText(e));
}

void Vocabulary::AddFrequent(
    std::span<const std::vector<std::string>> token_lists, int min_count) {
  std::unordered_map<std::string, int> counts;
  std::vector<std::string> order;
  for (const auto& list : token_lists) {
    for (const std::string& token : list) {
      if (IsNumberToken(token)) continue;
      if (counts[token]++ == 0) order.push_back(token);
    }
  }
  for (const std::string& token : order) {
    if (counts[token] >= min_count) Add(token);
  }
}

int Vocabulary::Add(std::string_view token) {
  auto [it, inserted] =
      ids_.emplace(std::string(token), static_cast<int>(tokens_.size()));
  if (inserted) tokens_.emplace_back(token);
  return it->second;
}

int Vocabulary::Id(std::string_view token) const {
  if (IsNumberToken(token)) return kNum;
  auto it = ids_.find(std::string(token));
  return it == ids_.end() ? kUnk : it->second;
}

bool Vocabulary::Contains(std::string_view token) const {
  return ids_.contains(std::string(token));
}

Vocabulary Vocabulary::FromTokens(std::vector<std::string> tokens) {
  Vocabulary vocab;
  if (tokens.size() < vocab.tokens_.size()) {
    Fail(ErrorCode::kVersionMismatch, "vocabulary is missing reserved tokens");
  }
  for (std::size_t i = 0; i < vocab.tokens_.size(); ++i) {
    if (tokens[i] != vocab.tokens_[i]) {
      Fail(ErrorCode::kVersionMismatch,
           "vocabulary reserved token mismatch at id " + std::to_string(i));
    }
  }
  for (std::size_t i = vocab.tokens_.size(); i < tokens.size(); ++i) {
    if (vocab.Add(tokens[i]) != static_cast<int>(i)) {
      Fail(ErrorCode::kVersionMismatch, "duplicate vocabulary token");
    }
  }
  return vocab;
}

}  // namespace sqlret
