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


#include "sqlret/tokenizer.h"

#include <cctype>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace sqlret {
namespace {

using Tokens = std::vector<std::string>;

TEST(TokenizerTest, Empty) {
  EXPECT_TRUE(Tokenize("").empty());
  EXPECT_TRUE(Tokenize("  \t\n").empty());
}

TEST(TokenizerTest, PunctuationSplits) {
  EXPECT_EQ(Tokenize("a,b"), (Tokens{"a", ",", "b"}));
  EXPECT_EQ(Tokenize("What's the No. 1 pick?"),
            (Tokens{"what", "'", "s", "the", "no", ".", "1", "pick", "?"}));
  EXPECT_EQ(Tokenize("1990-91"), (Tokens{"1990", "-", "91"}));
}

TEST(TokenizerTest, LowercasesUnicode) {
  EXPECT_EQ(Tokenize("Ötztal ÉCOLE"), (Tokens{"ötztal", "école"}));
  EXPECT_EQ(Tokenize("ΑΘΗΝΑ"), (Tokens{"αθηνα"}));
}

TEST(TokenizerTest, OffsetsPointIntoSource) {
  const std::string text = "Who won  in São Paulo, 2004?";
  for (const Token& t : TokenizeWithOffsets(text)) {
    ASSERT_LT(t.begin, t.end);
    ASSERT_LE(t.end, text.size());
    std::string raw = text.substr(t.begin, t.end - t.begin);
    EXPECT_EQ(Tokenize(raw), (Tokens{t.text}));
  }
}

// ASCII-only restatement of the split rules.
Tokens OracleTokenize(const std::string& text) {
  Tokens out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) out.push_back(word);
    word.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (std::ispunct(c)) {
      flush();
      out.push_back(std::string(1, ch));
    } else {
      word += static_cast<char>(std::tolower(c));
    }
  }
  flush();
  return out;
}

TEST(TokenizerTest, MatchesRuleOracleOnRandomAscii) {
  const std::string alphabet = "aZ9 \t,.?'-()$%Qx0";
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5000; ++trial) {
    std::string text;
    int n = rng() % 24;
    for (int i = 0; i < n; ++i) text += alphabet[rng() % alphabet.size()];
    EXPECT_EQ(Tokenize(text), OracleTokenize(text)) << '"' << text << '"';
  }
}

TEST(TokenizerTest, Deterministic) {
  EXPECT_EQ(Tokenize("Same input, same output."),
            Tokenize("Same input, same output."));
}

TEST(TokenizerTest, NumberTokens) {
  EXPECT_TRUE(IsNumberToken("2004"));
  EXPECT_FALSE(IsNumberToken("20a"));
  EXPECT_FALSE(IsNumberToken(""));
}

}  // namespace
}  // namespace sqlret
