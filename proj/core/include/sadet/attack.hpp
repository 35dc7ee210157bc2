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

#ifndef SADET_ATTACK_HPP
#define SADET_ATTACK_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sadet/classifier.hpp"
#include "sadet/datamodel.hpp"
#include "sadet/perturb.hpp"

namespace sadet {

struct PerturbationSpec {
  std::vector<std::size_t> typo_counts{1, 2, 3, 4, 5};
  /// Adds one contraction record per attacked item (a separate channel with typo_count 0).
  bool use_contractions = false;
  std::uint64_t seed = 0;
  /// Draws per (item, k) before the item is skipped for that k.
  std::size_t max_attempts_per_item = 3;

  /// Throws ConfigError when typo_counts is empty or max_attempts_per_item is 0.
  void validate() const;
};

/// One attacked text and what the classifier made of it.
struct PerturbationRecord {
  std::string id;  ///< "<item id>#t<k>" for typos, "<item id>#c" for contractions
  LabeledText original;
  std::vector<EditOp> edits;
  std::string perturbed_text;
  std::size_t typo_count = 0;
  ClassLabel original_pred;
  ClassLabel perturbed_pred;
  bool flipped = false;

  /// True for records of the contraction channel.
  bool is_contraction() const noexcept;
};

std::string typo_record_id(std::string_view item_id, std::size_t k);
std::string contraction_record_id(std::string_view item_id);

struct AttackSummary {
  std::size_t items = 0;          ///< dataset size
  std::size_t attacked = 0;       ///< items the classifier got right
  std::size_t misclassified = 0;  ///< items skipped because the original prediction was wrong
  std::size_t skipped = 0;        ///< (item, k) pairs dropped for lack of eligible positions
  std::size_t records = 0;
  std::size_t flipped = 0;
};

using RecordSink = std::function<void(const PerturbationRecord&)>;

/// Attacks every item the classifier classifies correctly, once per typo count
/// (and once with contractions when enabled). Records reach `sink` in dataset
/// order, typo counts in spec order, regardless of `jobs`.
///
/// The random stream of each (item, k) is seeded from (spec.seed, item id, k),
/// so output does not depend on which other items or counts are present.
/// A classifier failure is rethrown as ClassifierError (with the original
/// exception nested) after every record of earlier items has been delivered.
AttackSummary generate_adversarial_set(const Dataset& dataset, const TextClassifier& classifier,
                                       const PerturbationSpec& spec, const RecordSink& sink,
                                       std::size_t jobs = 1);

std::vector<PerturbationRecord> generate_adversarial_set(const Dataset& dataset,
                                                         const TextClassifier& classifier,
                                                         const PerturbationSpec& spec,
                                                         std::size_t jobs = 1);

/// One JSON object, no trailing newline. Fields: id, item_id, label,
/// original_text, perturbed_text, edits, typo_count, original_pred,
/// perturbed_pred, flipped.
std::string record_to_json(const PerturbationRecord& record);
PerturbationRecord record_from_json(std::string_view line, const LabelSet& labels);

void write_records(std::ostream& out, const std::vector<PerturbationRecord>& records);
std::vector<PerturbationRecord> read_records(std::istream& in, const LabelSet& labels);

}  // namespace sadet

#endif  // SADET_ATTACK_HPP
