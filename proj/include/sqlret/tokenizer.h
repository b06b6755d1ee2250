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

#ifndef SQLRET_TOKENIZER_H_
#define SQLRET_TOKENIZER_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace sqlret {

struct Token {
  std::string text;   // lowercased
  std::size_t begin;  // byte offsets into the source text
  std::size_t end;
};

// Deterministic rule tokenizer over UTF-8 text. Whitespace separates tokens,
// every punctuation or symbol character is its own token, and runs of
// letters and digits stay together. Output is lowercased.
std::vector<Token> TokenizeWithOffsets(std::string_view text);
std::vector<std::string> Tokenize(std::string_view text);

// True when every character of the token is an ASCII digit.
bool IsNumberToken(std::string_view token);

}  // namespace sqlret

#endif  // SQLRET_TOKENIZER_H_
