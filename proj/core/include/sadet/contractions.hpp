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

#ifndef SADET_CONTRACTIONS_HPP
#define SADET_CONTRACTIONS_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sadet/perturb.hpp"

namespace sadet {

struct ContractionPair {
  std::string full;        ///< e.g. "has not"
  std::string contracted;  ///< e.g. "hasn't"
};

/// Bidirectional phrase dictionary. Construction rejects dictionaries that are
/// not loop-free: no surface form may appear twice, and rewriting any form in
/// either direction must not create another rewritable form.
class ContractionDictionary {
 public:
  explicit ContractionDictionary(std::vector<ContractionPair> pairs);

  /// The dictionary shipped in data/contractions.tsv (compiled in).
  static const ContractionDictionary& builtin();

  /// Two-column UTF-8 TSV (full form, contracted form). '#' lines are comments.
  static ContractionDictionary from_tsv(std::istream& in);

  std::span<const ContractionPair> pairs() const noexcept { return pairs_; }

 private:
  std::vector<ContractionPair> pairs_;
};

enum class ContractionDirection { contract, expand };

/// Rewrites every non-overlapping dictionary phrase, scanning left to right.
///
/// Matches must start and end on word boundaries (letters, digits and the
/// apostrophe are word characters). The first character matches
/// case-insensitively and keeps its case in the output; the rest must match
/// exactly. Longest phrase wins at a given position.
PerturbedText apply_contractions(std::string_view text, ContractionDirection direction,
                                 const ContractionDictionary& dictionary =
                                     ContractionDictionary::builtin());

}  // namespace sadet

#endif  // SADET_CONTRACTIONS_HPP
