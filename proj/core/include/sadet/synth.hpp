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

#ifndef SADET_SYNTH_HPP
#define SADET_SYNTH_HPP

#include <cstddef>
#include <cstdint>

#include "sadet/datamodel.hpp"

namespace sadet {

struct SynthOptions {
  std::size_t max_sentences = 6;
  /// Chance that a review with 3+ sentences carries one sentence of the opposite polarity.
  double mixed_rate = 0.08;
  /// Shifts the share of positive reviews per product category to
  /// 0.5 + skew, 0.5 + skew/2, 0.5 - skew/2 and 0.5 - skew.
  double category_skew = 0.25;
};

/// Seeded two-class corpus of short product reviews built from a template grammar.
///
/// Each review is about one product from one of four categories and has
/// 1..max_sentences sentences (short reviews are the most common). The first
/// polar sentence states the review's polarity directly; later ones may use
/// negation ("Not bad at all.") or contrast. The rest are neutral remarks,
/// partly category-specific. Every item carries a rating consistent with
/// LabelMap::default_binary().
Dataset generate_review_corpus(std::size_t n, std::uint64_t seed, Split split = Split::train,
                               const SynthOptions& options = {});

}  // namespace sadet

#endif  // SADET_SYNTH_HPP
