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

#ifndef SADET_DATAMODEL_HPP
#define SADET_DATAMODEL_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sadet {

/// A class in the label set. Ids are dense 0..m-1.
struct ClassLabel {
  std::uint32_t id = 0;
  std::string name;

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

/// Ordered, duplicate-free set of m >= 2 class labels.
class LabelSet {
 public:
  explicit LabelSet(std::vector<std::string> names);

  /// {negative, positive}.
  static LabelSet binary();

  std::size_t size() const noexcept { return labels_.size(); }
  const ClassLabel& at(std::uint32_t id) const;
  std::optional<ClassLabel> find(std::string_view name) const;
  /// Like find, but throws UnknownClassError.
  const ClassLabel& require(std::string_view name) const;
  std::span<const ClassLabel> labels() const noexcept { return labels_; }

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  std::vector<ClassLabel> labels_;
};

enum class Origin { original, perturbed };
enum class Split { train, test };

std::string_view to_string(Split split) noexcept;

struct LabeledText {
  std::string id;
  std::string text;
  ClassLabel label;
  std::optional<int> rating;
  Origin origin = Origin::original;
};

struct Dataset {
  std::vector<LabeledText> items;
  LabelSet labels;
  Split split = Split::train;

  /// Checks item invariants: non-empty text, unique ids, labels drawn from `labels`.
  void validate() const;
};

/// Inclusive rating range mapped to one label.
struct RatingRule {
  int min = 0;
  int max = 0;
  ClassLabel label;
};

class LabelMap {
 public:
  /// Throws ConfigError if ranges overlap or a rule names a label outside `labels`.
  LabelMap(LabelSet labels, std::vector<RatingRule> rules);

  /// 1-2 -> negative, 4-5 -> positive; rating 3 is left unmapped.
  static LabelMap default_binary();

  const LabelSet& labels() const noexcept { return labels_; }
  std::span<const RatingRule> rules() const noexcept { return rules_; }

 private:
  LabelSet labels_;
  std::vector<RatingRule> rules_;
};

/// Label of the unique rule containing `rating`; throws UnmappedRatingError otherwise.
const ClassLabel& map_rating_to_label(int rating, const LabelMap& label_map);

enum class DataFormat { csv, jsonl };

/// ".csv" -> csv; ".jsonl", ".json", ".ndjson" -> jsonl. Throws ConfigError otherwise.
DataFormat format_from_path(const std::filesystem::path& path);

/// Reads a dataset. Columns/fields: text (required), label and/or rating, id (optional).
///
/// A row with a label keeps it; a row with only a rating goes through `label_map`.
/// Missing ids become "<split>-<row index, 6 digits>". Outer whitespace of the text is trimmed.
Dataset read_dataset(std::istream& in, DataFormat format, const LabelMap& label_map,
                     Split split = Split::train);

Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const LabelMap& label_map, Split split = Split::train);

/// Writes id, text, label (by name) and rating in the given format.
void write_dataset(std::ostream& out, const Dataset& dataset, DataFormat format);

/// Trims ASCII whitespace on both ends.
std::string_view trim(std::string_view text) noexcept;

}  // namespace sadet

#endif  // SADET_DATAMODEL_HPP
