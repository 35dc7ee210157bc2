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

#include "sadet/synth.hpp"

#include <array>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sadet/error.hpp"
#include "sadet/hash.hpp"

namespace sadet {
namespace {

using Words = std::span<const std::string_view>;

constexpr std::array<std::string_view, 15> kPositiveAdj = {
    "great", "excellent", "good",  "amazing",  "wonderful", "perfect",  "fantastic", "superb",
    "awesome", "nice",    "solid", "reliable", "sturdy",    "lovely",   "brilliant"};
constexpr std::array<std::string_view, 15> kNegativeAdj = {
    "bad",   "terrible",  "awful",  "poor",          "horrible", "useless", "flimsy",   "cheap",
    "defective", "broken", "faulty", "disappointing", "worthless", "mediocre", "lousy"};
constexpr std::array<std::string_view, 5> kPositiveVerb = {"love", "enjoy", "like", "adore", "recommend"};
constexpr std::array<std::string_view, 5> kNegativeVerb = {"hate", "regret", "dislike", "returned", "despise"};
// Product categories, each with its own nouns and parts.
constexpr std::array<std::array<std::string_view, 5>, 4> kCategoryNoun = {{
    {"blender", "kettle", "toaster", "mug", "pan"},
    {"charger", "headset", "speaker", "keyboard", "router"},
    {"jacket", "backpack", "scarf", "boots", "hat"},
    {"lamp", "pillow", "vacuum", "curtain", "blanket"},
}};
constexpr std::array<std::array<std::string_view, 4>, 4> kCategoryPart = {{
    {"lid", "handle", "switch", "base"},
    {"battery", "cable", "button", "screen"},
    {"zipper", "fabric", "sole", "strap"},
    {"cord", "filter", "cover", "stitching"},
}};
constexpr std::array<std::array<std::string_view, 4>, 4> kCategoryUse = {{
    {"I make coffee with it every morning.", "It sits next to the stove.",
     "We use it for soup on weekends.", "It fits in the cupboard."},
    {"I use it at my desk.", "It pairs with my phone.", "I charge it every night.",
     "The firmware updated itself."},
    {"I wore it on a hike.", "I wear it to work.", "It is a size medium.",
     "I washed it twice already."},
    {"It is in the living room.", "We put it in the bedroom.", "It matches the sofa.",
     "The kids use it too."},
}};
constexpr std::array<std::string_view, 7> kAdverb = {"really", "very", "truly", "quite", "so", "absolutely", "pretty"};
constexpr std::array<std::string_view, 7> kDay = {"Monday", "Tuesday", "Wednesday", "Thursday",
                                                  "Friday", "Saturday", "Sunday"};
constexpr std::array<std::string_view, 10> kRelative = {"sister", "brother", "mother", "father", "son",
                                                        "daughter", "wife", "husband", "friend", "office"};
constexpr std::array<std::string_view, 7> kColor = {"black", "white", "red", "blue", "green", "grey", "silver"};
constexpr std::array<std::string_view, 5> kNumber = {"two", "three", "four", "five", "six"};
constexpr std::array<std::string_view, 5> kAccessory = {"manual", "case", "strap", "cable", "adapter"};

std::string pick(Rng& rng, Words words) { return std::string(words[rng.uniform_index(words.size())]); }

std::string capitalized(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

constexpr std::size_t kDirectWeight = 3;

std::string polar_sentence(Rng& rng, bool positive, std::size_t category, bool direct_only) {
  const Words adj = positive ? Words(kPositiveAdj) : Words(kNegativeAdj);
  const Words opposite = positive ? Words(kNegativeAdj) : Words(kPositiveAdj);
  const Words verb = positive ? Words(kPositiveVerb) : Words(kNegativeVerb);
  const Words noun(kCategoryNoun[category]);
  const Words part(kCategoryPart[category]);
  // Templates 0-5 state the polarity directly; 6-8 (negation, contrast) are rarer.
  const std::size_t draw = rng.uniform_index(direct_only ? kDirectWeight * 6 : kDirectWeight * 6 + 3);
  switch (draw < kDirectWeight * 6 ? draw / kDirectWeight : draw - kDirectWeight * 6 + 6) {
    case 0: return "The " + pick(rng, noun) + " is " + pick(rng, kAdverb) + " " + pick(rng, adj) + ".";
    case 1: return capitalized(pick(rng, kAdverb)) + " " + pick(rng, adj) + " " + pick(rng, noun) + ".";
    case 2: return "I " + pick(rng, verb) + " this " + pick(rng, noun) + ".";
    case 3: return capitalized(pick(rng, adj)) + " quality overall.";
    case 4: return capitalized(pick(rng, adj)) + "!";
    case 5: return "This " + pick(rng, noun) + " is " + pick(rng, adj) + ".";
    case 6: return "Not " + pick(rng, opposite) + " at all.";
    case 7: return "The " + pick(rng, part) + " is not " + pick(rng, opposite) + ".";
    default:
      return "The " + pick(rng, part) + " is a bit " + pick(rng, opposite) + " but the " + pick(rng, noun) +
             " is " + pick(rng, adj) + ".";
  }
}

std::string neutral_sentence(Rng& rng, std::size_t category) {
  switch (rng.uniform_index(11)) {
    case 8:
    case 9:
    case 10: return std::string(kCategoryUse[category][rng.uniform_index(4)]);
    case 0: return "It arrived on " + pick(rng, kDay) + ".";
    case 1: return "I bought it for my " + pick(rng, kRelative) + ".";
    case 2: return "The box was " + pick(rng, kColor) + ".";
    case 3: return "Shipping took " + pick(rng, kNumber) + " days.";
    case 4: return "I have used it for " + pick(rng, kNumber) + " weeks.";
    case 5: return "It came with a " + pick(rng, kAccessory) + ".";
    case 6: return "I ordered the " + pick(rng, kColor) + " one.";
    default: return "My " + pick(rng, kRelative) + " picked it out.";
  }
}

// Sentence count with weight 1/i.
std::size_t sentence_count(Rng& rng, std::size_t max_sentences) {
  double total = 0.0;
  for (std::size_t i = 1; i <= max_sentences; ++i) total += 1.0 / static_cast<double>(i);
  double u = rng.uniform01() * total;
  for (std::size_t i = 1; i <= max_sentences; ++i) {
    u -= 1.0 / static_cast<double>(i);
    if (u < 0.0) return i;
  }
  return max_sentences;
}

}  // namespace

Dataset generate_review_corpus(std::size_t n, std::uint64_t seed, Split split,
                               const SynthOptions& options) {
  if (options.max_sentences == 0) throw ConfigError("max_sentences must be >= 1");
  if (!(options.category_skew >= 0.0 && options.category_skew <= 0.5)) {
    throw ConfigError("category_skew must lie in [0, 0.5]");
  }
  const double skew = options.category_skew;
  const std::array<double, 4> rates = {0.5 + skew, 0.5 + skew / 2, 0.5 - skew / 2, 0.5 - skew};
  Dataset ds{{}, LabelSet::binary(), split};
  ds.items.reserve(n);
  Rng rng(mix64(seed ^ (split == Split::train ? 0x747261696eULL : 0x74657374ULL)));

  for (std::size_t row = 1; row <= n; ++row) {
    const std::size_t category = rng.uniform_index(kCategoryNoun.size());
    const bool positive = rng.uniform01() < rates[category];
    const std::size_t count = sentence_count(rng, options.max_sentences);
    const std::size_t polar = 1 + (count - 1) / 2;

    std::vector<std::string> sentences;
    for (std::size_t i = 0; i < polar; ++i) {
      sentences.push_back(polar_sentence(rng, positive, category, i == 0));
    }
    for (std::size_t i = polar; i < count; ++i) {
      sentences.push_back(neutral_sentence(rng, category));
    }
    if (count >= 3 && rng.uniform01() < options.mixed_rate) {
      sentences.back() = polar_sentence(rng, !positive, category, true);
    }
    rng.shuffle(std::span(sentences));

    std::string text;
    for (const auto& s : sentences) {
      if (!text.empty()) text.push_back(' ');
      text += s;
    }

    char id[32];
    std::snprintf(id, sizeof(id), "%s-%06zu", split == Split::train ? "train" : "test", row);
    const int rating = positive ? 4 + static_cast<int>(rng.uniform_index(2))
                                : 1 + static_cast<int>(rng.uniform_index(2));
    ds.items.push_back(LabeledText{id, std::move(text), ds.labels.at(positive ? 1 : 0), rating,
                                   Origin::original});
  }
  return ds;
}

}  // namespace sadet
