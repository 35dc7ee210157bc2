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

#include "sadet/datamodel.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "sadet/csv.hpp"
#include "sadet/error.hpp"
#include "sadet/numfmt.hpp"

namespace sadet {
namespace {

using nlohmann::json;

std::string row_error(std::size_t row, std::string_view field, std::string_view what) {
  return "row " + std::to_string(row) + ": field '" + std::string(field) + "': " +
         std::string(what);
}

std::string auto_id(Split split, std::size_t row) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06zu", row);
  return std::string(to_string(split)) + "-" + buf;
}

// Raw fields of one input row before validation.
struct RawRow {
  std::optional<std::string> id;
  std::optional<std::string> text;
  std::optional<std::string> label;
  std::optional<std::string> rating;
};

LabeledText make_item(const RawRow& raw, std::size_t row, const LabelMap& label_map, Split split) {
  LabeledText item;
  if (!raw.text) throw DataError(row_error(row, "text", "missing"));
  const std::string_view text = trim(*raw.text);
  if (text.empty()) throw DataError(row_error(row, "text", "empty"));
  item.text = std::string(text);

  if (raw.id && !trim(*raw.id).empty()) {
    item.id = std::string(trim(*raw.id));
  } else {
    item.id = auto_id(split, row);
  }

  if (raw.rating && !trim(*raw.rating).empty()) {
    try {
      item.rating = static_cast<int>(parse_int(trim(*raw.rating)));
    } catch (const DataError& e) {
      throw DataError(row_error(row, "rating", e.what()));
    }
  }

  if (raw.label && !trim(*raw.label).empty()) {
    const std::string_view name = trim(*raw.label);
    if (auto found = label_map.labels().find(name)) {
      item.label = *found;
    } else {
      // Numeric class ids are accepted as well as names.
      long long id = -1;
      try {
        id = parse_int(name);
      } catch (const DataError&) {
      }
      if (id < 0 || static_cast<std::size_t>(id) >= label_map.labels().size()) {
        throw DataError(row_error(row, "label", "unknown label '" + std::string(name) + "'"));
      }
      item.label = label_map.labels().at(static_cast<std::uint32_t>(id));
    }
  } else if (item.rating) {
    try {
      item.label = map_rating_to_label(*item.rating, label_map);
    } catch (const UnmappedRatingError& e) {
      throw UnmappedRatingError(e.rating(), "row " + std::to_string(row) + ": ");
    }
  } else {
    throw DataError(row_error(row, "label", "neither label nor rating present"));
  }
  return item;
}

std::optional<std::string> json_field(const json& obj, const char* key, std::size_t row) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  throw DataError(row_error(row, key, "expected a string or integer"));
}

}  // namespace

LabelSet::LabelSet(std::vector<std::string> names) {
  if (names.size() < 2) throw ConfigError("a label set needs at least 2 classes");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].empty()) throw ConfigError("empty class name");
    if (!seen.insert(names[i]).second) throw ConfigError("duplicate class name '" + names[i] + "'");
    labels_.push_back(ClassLabel{static_cast<std::uint32_t>(i), std::move(names[i])});
  }
}

LabelSet LabelSet::binary() { return LabelSet({"negative", "positive"}); }

const ClassLabel& LabelSet::at(std::uint32_t id) const {
  if (id >= labels_.size()) {
    throw UnknownClassError("class id " + std::to_string(id) + " out of range");
  }
  return labels_[id];
}

std::optional<ClassLabel> LabelSet::find(std::string_view name) const {
  for (const auto& l : labels_) {
    if (l.name == name) return l;
  }
  return std::nullopt;
}

const ClassLabel& LabelSet::require(std::string_view name) const {
  for (const auto& l : labels_) {
    if (l.name == name) return l;
  }
  throw UnknownClassError("unknown class '" + std::string(name) + "'");
}

std::string_view to_string(Split split) noexcept {
  return split == Split::train ? "train" : "test";
}

void Dataset::validate() const {
  std::unordered_set<std::string_view> ids;
  for (const auto& item : items) {
    if (trim(item.text).empty()) throw DataError("item '" + item.id + "': empty text");
    if (item.label.id >= labels.size() || labels.at(item.label.id) != item.label) {
      throw DataError("item '" + item.id + "': label not in the class set");
    }
    if (!ids.insert(item.id).second) throw DataError("duplicate item id '" + item.id + "'");
  }
}

LabelMap::LabelMap(LabelSet labels, std::vector<RatingRule> rules)
    : labels_(std::move(labels)), rules_(std::move(rules)) {
  for (const auto& r : rules_) {
    if (r.min > r.max) throw ConfigError("rating rule with min > max");
    if (r.label.id >= labels_.size() || labels_.at(r.label.id) != r.label) {
      throw ConfigError("rating rule maps to unknown label '" + r.label.name + "'");
    }
  }
  for (std::size_t i = 0; i < rules_.size(); ++i) {
    for (std::size_t j = i + 1; j < rules_.size(); ++j) {
      if (rules_[i].min <= rules_[j].max && rules_[j].min <= rules_[i].max) {
        throw ConfigError("rating rules overlap");
      }
    }
  }
}

LabelMap LabelMap::default_binary() {
  LabelSet labels = LabelSet::binary();
  std::vector<RatingRule> rules{{1, 2, labels.at(0)}, {4, 5, labels.at(1)}};
  return LabelMap(std::move(labels), std::move(rules));
}

const ClassLabel& map_rating_to_label(int rating, const LabelMap& label_map) {
  for (const auto& r : label_map.rules()) {
    if (rating >= r.min && rating <= r.max) return r.label;
  }
  throw UnmappedRatingError(rating);
}

DataFormat format_from_path(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".csv") return DataFormat::csv;
  if (ext == ".jsonl" || ext == ".json" || ext == ".ndjson") return DataFormat::jsonl;
  throw ConfigError("cannot infer data format from '" + path.string() + "'");
}

Dataset read_dataset(std::istream& in, DataFormat format, const LabelMap& label_map, Split split) {
  Dataset ds{{}, label_map.labels(), split};
  std::size_t row = 0;

  if (format == DataFormat::csv) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw DataError("empty file");
    std::optional<std::size_t> c_id, c_text, c_label, c_rating;
    for (std::size_t i = 0; i < header->size(); ++i) {
      const std::string_view name = trim((*header)[i]);
      if (name == "id") c_id = i;
      else if (name == "text") c_text = i;
      else if (name == "label") c_label = i;
      else if (name == "rating") c_rating = i;
    }
    if (!c_text) throw DataError("header: missing 'text' column");
    if (!c_label && !c_rating) throw DataError("header: need a 'label' or 'rating' column");

    while (auto fields = reader.next()) {
      ++row;
      if (fields->size() != header->size()) {
        throw DataError("row " + std::to_string(row) + ": expected " +
                        std::to_string(header->size()) + " fields, got " +
                        std::to_string(fields->size()));
      }
      RawRow raw;
      auto get = [&](std::optional<std::size_t> col) -> std::optional<std::string> {
        if (!col) return std::nullopt;
        return (*fields)[*col];
      };
      raw.id = get(c_id);
      raw.text = get(c_text);
      raw.label = get(c_label);
      raw.rating = get(c_rating);
      ds.items.push_back(make_item(raw, row, label_map, split));
    }
  } else {
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      ++row;
      json obj;
      try {
        obj = json::parse(line);
      } catch (const json::parse_error& e) {
        throw DataError("row " + std::to_string(row) + ": invalid JSON: " + e.what());
      }
      if (!obj.is_object()) throw DataError("row " + std::to_string(row) + ": not a JSON object");
      RawRow raw;
      raw.id = json_field(obj, "id", row);
      auto text = obj.find("text");
      if (text != obj.end() && !text->is_null()) {
        if (!text->is_string()) throw DataError(row_error(row, "text", "expected a string"));
        raw.text = text->get<std::string>();
      }
      raw.label = json_field(obj, "label", row);
      raw.rating = json_field(obj, "rating", row);
      ds.items.push_back(make_item(raw, row, label_map, split));
    }
  }

  if (ds.items.empty()) throw DataError("empty file");
  ds.validate();
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path, DataFormat format,
                     const LabelMap& label_map, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  try {
    return read_dataset(in, format, label_map, split);
  } catch (const UnmappedRatingError&) {
    throw;
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_dataset(std::ostream& out, const Dataset& dataset, DataFormat format) {
  if (format == DataFormat::csv) {
    csv::write_row(out, {"id", "text", "label", "rating"});
    for (const auto& item : dataset.items) {
      csv::write_row(out, {item.id, item.text, item.label.name,
                           item.rating ? std::to_string(*item.rating) : std::string()});
    }
    return;
  }
  for (const auto& item : dataset.items) {
    json obj{{"id", item.id}, {"text", item.text}, {"label", item.label.name}};
    if (item.rating) obj["rating"] = *item.rating;
    out << obj.dump() << '\n';
  }
}

std::string_view trim(std::string_view text) noexcept {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = text.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(kSpace);
  return text.substr(first, last - first + 1);
}

}  // namespace sadet
