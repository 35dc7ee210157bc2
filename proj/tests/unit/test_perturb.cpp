// Copyright 2026 The sadet Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "sadet/error.hpp"
#include "sadet/hash.hpp"
#include "sadet/perturb.hpp"

namespace {

using sadet::EditKind;
using sadet::EditOp;

std::string random_text(sadet::Rng& rng) {
  static const std::string alphabet = "aabbcdeeefghiijklmnoopqrsttuvwxyzAB0123456789";
  static const std::string seps = " ,.!'-";
  std::string s;
  const std::size_t words = 1 + rng.uniform_index(25);
  for (std::size_t w = 0; w < words; ++w) {
    if (w) s += seps[rng.uniform_index(seps.size())];
    const std::size_t len = 1 + rng.uniform_index(10);
    for (std::size_t i = 0; i < len; ++i) s += alphabet[rng.uniform_index(alphabet.size())];
  }
  if (rng.uniform_index(10) == 0) s += " caf\xc3\xa9 na\xc3\xafve";
  return s;
}

// Eligibility computed independently from the definition.
bool eligible(const std::string& s, std::size_t p) {
  auto alnum = [&](std::size_t i) {
    const auto c = static_cast<unsigned char>(s[i]);
    return c < 0x80 && std::isalnum(c);
  };
  if (p + 1 >= s.size() || !alnum(p) || !alnum(p + 1) || s[p] == s[p + 1]) return false;
  std::size_t b = p, e = p + 1;
  while (b > 0 && alnum(b - 1)) --b;
  while (e + 1 < s.size() && alnum(e + 1)) ++e;
  return e - b + 1 >= 3;
}

TEST(Perturb, EligiblePositionsMatchDefinition) {
  sadet::Rng rng(1);
  for (int i = 0; i < 500; ++i) {
    const auto s = random_text(rng);
    std::vector<std::size_t> expected;
    for (std::size_t p = 0; p < s.size(); ++p) {
      if (eligible(s, p)) expected.push_back(p);
    }
    EXPECT_EQ(sadet::eligible_transpose_positions(s), expected) << s;
  }
  EXPECT_TRUE(sadet::eligible_transpose_positions("ab aa a").empty());
  EXPECT_EQ(sadet::eligible_transpose_positions("abc"), (std::vector<std::size_t>{0, 1}));
}

TEST(Perturb, TypoContractOverManyPairs) {
  sadet::Rng gen(2026);
  std::size_t checked = 0, insufficient = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const auto text = random_text(gen);
    const std::size_t k = 1 + gen.uniform_index(5);
    sadet::Rng rng(sadet::derive_seed(7, text, k));
    sadet::PerturbedText out;
    try {
      out = sadet::inject_typos(text, k, rng);
    } catch (const sadet::InsufficientLengthError&) {
      ++insufficient;
      continue;
    }
    ++checked;
    ASSERT_EQ(out.edits.size(), k);
    auto a = text, b = out.text;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    ASSERT_EQ(a, b) << "multiset changed: " << text;
    std::size_t diffs = 0;
    for (std::size_t i = 0; i < text.size(); ++i) diffs += text[i] != out.text[i];
    ASSERT_EQ(diffs, 2 * k);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& e = out.edits[i];
      ASSERT_EQ(e.kind, EditKind::transpose);
      ASSERT_TRUE(eligible(text, e.position)) << text << " @" << e.position;
      ASSERT_EQ(text.substr(e.position, 2), e.before);
      ASSERT_EQ(out.text.substr(e.position, 2), e.after);
      ASSERT_EQ(e.after, (std::string{e.before[1], e.before[0]}));
      if (i) {
        ASSERT_GE(e.position, out.edits[i - 1].position + 2);
      }
    }
    ASSERT_EQ(sadet::apply_edits(text, out.edits), out.text);
    ASSERT_EQ(sadet::apply_edits(out.text, sadet::invert(out.edits)), text);
  }
  EXPECT_GT(checked, 8000u);
  EXPECT_EQ(checked + insufficient, 10000u);
}

TEST(Perturb, SameStreamSameOutput) {
  const std::string text = "The battery lasts forever and the screen is bright";
  sadet::Rng r1(5), r2(5);
  EXPECT_EQ(sadet::inject_typos(text, 3, r1).text, sadet::inject_typos(text, 3, r2).text);
}

TEST(Perturb, InsufficientLength) {
  sadet::Rng rng(1);
  EXPECT_THROW(sadet::inject_typos("ok", 1, rng), sadet::InsufficientLengthError);
  EXPECT_THROW(sadet::inject_typos("abc", 2, rng), sadet::InsufficientLengthError);
  EXPECT_THROW(sadet::inject_typos("a bb ccc", 5, rng), sadet::InsufficientLengthError);
  EXPECT_NO_THROW(sadet::inject_typos("abcd", 2, rng));
}

TEST(Perturb, TransposeAt) {
  const auto out = sadet::transpose_at("great product", std::vector<std::size_t>{0, 6});
  EXPECT_EQ(out.text, "rgeat rpoduct");
  EXPECT_THROW(sadet::transpose_at("great", std::vector<std::size_t>{0, 1}), sadet::Error);
  EXPECT_THROW(sadet::transpose_at("a great", std::vector<std::size_t>{0}), sadet::Error);
}

TEST(Perturb, ApplyAndInvertEdits) {
  const EditOp op{EditKind::contract, 3, "is not", "isn't"};
  EXPECT_EQ(sadet::apply_edit("It is not bad", op), "It isn't bad");
  EXPECT_EQ(sadet::apply_edit("It isn't bad", sadet::invert(op)), "It is not bad");
  EXPECT_EQ(sadet::invert(op).kind, EditKind::expand);
  EXPECT_THROW(sadet::apply_edit("It was not bad", op), sadet::Error);
  EXPECT_EQ(sadet::edit_kind_from_string(sadet::to_string(EditKind::expand)), EditKind::expand);
  EXPECT_THROW(sadet::edit_kind_from_string("swap"), sadet::Error);
}

}  // namespace
