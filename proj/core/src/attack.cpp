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

#include "sadet/attack.hpp"

#include <algorithm>
#include <exception>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <thread>

#include <json.hpp>

#include "sadet/contractions.hpp"
#include "sadet/error.hpp"
#include "sadet/hash.hpp"
#include "sadet/log.hpp"

namespace sadet {
namespace {

using nlohmann::json;

struct ItemResult {
  std::vector<PerturbationRecord> records;
  bool misclassified = false;
  std::size_t skipped = 0;
};

Prediction classify(const TextClassifier& classifier, const std::string& item_id,
                    std::string_view query_id, std::string_view text) {
  try {
    return classifier.predict(query_id, text);
  } catch (const std::exception& e) {
    std::throw_with_nested(ClassifierError(item_id, std::string(text), e.what()));
  }
}

PerturbationRecord make_record(std::string id, const LabeledText& item, PerturbedText perturbed,
                               std::size_t typo_count, const ClassLabel& original_pred,
                               const TextClassifier& classifier) {
  PerturbationRecord r;
  r.id = std::move(id);
  r.original = item;
  r.perturbed_text = std::move(perturbed.text);
  r.edits = std::move(perturbed.edits);
  r.typo_count = typo_count;
  r.original_pred = original_pred;
  r.perturbed_pred = classify(classifier, item.id, r.id, r.perturbed_text).label;
  r.flipped = r.perturbed_pred.id != r.original_pred.id;
  return r;
}

ItemResult attack_item(const LabeledText& item, const TextClassifier& classifier,
                       const PerturbationSpec& spec) {
  ItemResult out;
  const ClassLabel original_pred = classify(classifier, item.id, item.id, item.text).label;
  if (original_pred.id != item.label.id) {
    out.misclassified = true;
    return out;
  }

  for (std::size_t k : spec.typo_counts) {
    Rng rng(derive_seed(spec.seed, item.id, k));
    std::optional<PerturbedText> perturbed;
    for (std::size_t attempt = 0; attempt < spec.max_attempts_per_item && !perturbed; ++attempt) {
      try {
        perturbed = inject_typos(item.text, k, rng);
      } catch (const InsufficientLengthError&) {
      }
    }
    if (!perturbed) {
      log(LogLevel::debug, "item '" + item.id + "': skipped k=" + std::to_string(k) +
                               " after " + std::to_string(spec.max_attempts_per_item) + " attempts");
      ++out.skipped;
      continue;
    }
    out.records.push_back(make_record(typo_record_id(item.id, k), item, std::move(*perturbed), k,
                                      original_pred, classifier));
  }

  if (spec.use_contractions) {
    PerturbedText perturbed = apply_contractions(item.text, ContractionDirection::contract);
    if (perturbed.edits.empty()) perturbed = apply_contractions(item.text, ContractionDirection::expand);
    if (!perturbed.edits.empty()) {
      out.records.push_back(make_record(contraction_record_id(item.id), item, std::move(perturbed), 0,
                                        original_pred, classifier));
    }
  }
  return out;
}

}  // namespace

void PerturbationSpec::validate() const {
  if (typo_counts.empty()) throw ConfigError("typo_counts must not be empty");
  if (max_attempts_per_item == 0) throw ConfigError("max_attempts_per_item must be >= 1");
  std::set<std::size_t> seen;
  for (std::size_t k : typo_counts) {
    if (!seen.insert(k).second) throw ConfigError("typo count " + std::to_string(k) + " listed twice");
  }
}

bool PerturbationRecord::is_contraction() const noexcept {
  return std::any_of(edits.begin(), edits.end(),
                     [](const EditOp& e) { return e.kind != EditKind::transpose; });
}

std::string typo_record_id(std::string_view item_id, std::size_t k) {
  return std::string(item_id) + "#t" + std::to_string(k);
}

std::string contraction_record_id(std::string_view item_id) { return std::string(item_id) + "#c"; }

AttackSummary generate_adversarial_set(const Dataset& dataset, const TextClassifier& classifier,
                                       const PerturbationSpec& spec, const RecordSink& sink,
                                       std::size_t jobs) {
  spec.validate();
  if (dataset.items.empty()) throw ConfigError("cannot attack an empty dataset");

  AttackSummary summary;
  summary.items = dataset.items.size();
  jobs = std::max<std::size_t>(1, jobs);
  const std::size_t window = jobs == 1 ? 1 : jobs * 4;

  std::vector<std::optional<ItemResult>> results(window);
  std::vector<std::exception_ptr> errors(window);

  for (std::size_t base = 0; base < dataset.items.size(); base += window) {
    const std::size_t count = std::min(window, dataset.items.size() - base);
    auto work = [&](std::size_t worker) {
      for (std::size_t i = worker; i < count; i += jobs) {
        try {
          results[i] = attack_item(dataset.items[base + i], classifier, spec);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    if (jobs == 1) {
      work(0);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < std::min(jobs, count); ++w) pool.emplace_back(work, w);
    }

    for (std::size_t i = 0; i < count; ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      ItemResult& r = *results[i];
      if (r.misclassified) {
        ++summary.misclassified;
      } else {
        ++summary.attacked;
      }
      summary.skipped += r.skipped;
      for (const auto& rec : r.records) {
        ++summary.records;
        if (rec.flipped) ++summary.flipped;
        sink(rec);
      }
      results[i].reset();
    }
  }
  return summary;
}

std::vector<PerturbationRecord> generate_adversarial_set(const Dataset& dataset,
                                                         const TextClassifier& classifier,
                                                         const PerturbationSpec& spec,
                                                         std::size_t jobs) {
  std::vector<PerturbationRecord> out;
  generate_adversarial_set(
      dataset, classifier, spec, [&](const PerturbationRecord& r) { out.push_back(r); }, jobs);
  return out;
}

std::string record_to_json(const PerturbationRecord& r) {
  json edits = json::array();
  for (const auto& e : r.edits) {
    edits.push_back({{"kind", std::string(to_string(e.kind))},
                     {"position", e.position},
                     {"before", e.before},
                     {"after", e.after}});
  }
  json j;
  j["id"] = r.id;
  j["item_id"] = r.original.id;
  j["label"] = r.original.label.name;
  j["original_text"] = r.original.text;
  j["perturbed_text"] = r.perturbed_text;
  j["edits"] = std::move(edits);
  j["typo_count"] = r.typo_count;
  j["original_pred"] = r.original_pred.name;
  j["perturbed_pred"] = r.perturbed_pred.name;
  j["flipped"] = r.flipped;
  return j.dump();
}

PerturbationRecord record_from_json(std::string_view line, const LabelSet& labels) {
  try {
    const json j = json::parse(line);
    PerturbationRecord r;
    r.id = j.at("id").get<std::string>();
    r.original.id = j.at("item_id").get<std::string>();
    r.original.text = j.at("original_text").get<std::string>();
    r.original.label = labels.require(j.at("label").get<std::string>());
    r.original.origin = Origin::original;
    r.perturbed_text = j.at("perturbed_text").get<std::string>();
    for (const auto& e : j.at("edits")) {
      r.edits.push_back(EditOp{edit_kind_from_string(e.at("kind").get<std::string>()),
                               e.at("position").get<std::size_t>(), e.at("before").get<std::string>(),
                               e.at("after").get<std::string>()});
    }
    r.typo_count = j.at("typo_count").get<std::size_t>();
    r.original_pred = labels.require(j.at("original_pred").get<std::string>());
    r.perturbed_pred = labels.require(j.at("perturbed_pred").get<std::string>());
    r.flipped = j.at("flipped").get<bool>();
    return r;
  } catch (const json::exception& e) {
    throw DataError(std::string("record: ") + e.what());
  } catch (const UnknownClassError& e) {
    throw DataError(std::string("record: ") + e.what());
  }
}

void write_records(std::ostream& out, const std::vector<PerturbationRecord>& records) {
  for (const auto& r : records) out << record_to_json(r) << '\n';
}

std::vector<PerturbationRecord> read_records(std::istream& in, const LabelSet& labels) {
  std::vector<PerturbationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      out.push_back(record_from_json(line, labels));
    } catch (const DataError& e) {
      throw DataError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace sadet
