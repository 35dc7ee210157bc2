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

#include "sadet/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "sadet/error.hpp"

namespace sadet {
namespace {

struct Counts {
  std::size_t anomalous = 0;
  std::size_t clean = 0;
};

Counts check(std::span<const ScoredExample> examples) {
  Counts c;
  for (const auto& e : examples) {
    if (std::isnan(e.score)) throw DataError("score of '" + e.input_id + "' is NaN");
    (e.is_anomalous ? c.anomalous : c.clean) += 1;
  }
  if (c.anomalous == 0 || c.clean == 0) {
    throw DataError("ROC/AUC needs at least one anomalous and one clean example");
  }
  return c;
}

std::vector<const ScoredExample*> sorted_by_score(std::span<const ScoredExample> examples,
                                                  bool descending) {
  std::vector<const ScoredExample*> order;
  order.reserve(examples.size());
  for (const auto& e : examples) order.push_back(&e);
  std::stable_sort(order.begin(), order.end(), [descending](const auto* a, const auto* b) {
    return descending ? a->score > b->score : a->score < b->score;
  });
  return order;
}

}  // namespace

std::vector<RocPoint> roc_curve(std::span<const ScoredExample> examples) {
  const Counts n = check(examples);
  const auto order = sorted_by_score(examples, true);
  std::vector<RocPoint> curve{{std::numeric_limits<double>::infinity(), 0.0, 0.0}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = order[i]->score;
    for (; i < order.size() && order[i]->score == s; ++i) (order[i]->is_anomalous ? tp : fp) += 1;
    curve.push_back({s, static_cast<double>(fp) / static_cast<double>(n.clean),
                     static_cast<double>(tp) / static_cast<double>(n.anomalous)});
  }
  return curve;
}

double auc(std::span<const ScoredExample> examples) {
  const Counts n = check(examples);
  const auto order = sorted_by_score(examples, false);
  // Twice the U statistic.
  std::uint64_t u2 = 0;
  std::uint64_t clean_below = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double s = order[i]->score;
    std::uint64_t anom = 0, clean = 0;
    for (; i < order.size() && order[i]->score == s; ++i) (order[i]->is_anomalous ? anom : clean) += 1;
    u2 += 2 * anom * clean_below + anom * clean;
    clean_below += clean;
  }
  return static_cast<double>(u2) /
         (2.0 * static_cast<double>(n.anomalous) * static_cast<double>(n.clean));
}

double auc_trapezoid(std::span<const RocPoint> curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    area += (curve[i].fpr - curve[i - 1].fpr) * (curve[i].tpr + curve[i - 1].tpr) / 2.0;
  }
  return area;
}

std::map<std::size_t, AsrEntry> attack_success_rate(std::span<const PerturbationRecord> records) {
  std::map<std::size_t, AsrEntry> out;
  for (const auto& r : records) {
    if (r.is_contraction()) continue;
    AsrEntry& e = out[r.typo_count];
    ++e.attacked;
    if (r.flipped) ++e.flipped;
  }
  for (auto& [k, e] : out) e.rate = static_cast<double>(e.flipped) / static_cast<double>(e.attacked);
  return out;
}

AsrEntry contraction_success_rate(std::span<const PerturbationRecord> records) {
  AsrEntry e;
  for (const auto& r : records) {
    if (!r.is_contraction()) continue;
    ++e.attacked;
    if (r.flipped) ++e.flipped;
  }
  if (e.attacked) e.rate = static_cast<double>(e.flipped) / static_cast<double>(e.attacked);
  return e;
}

std::size_t char_length(std::string_view text) noexcept {
  std::size_t n = 0;
  for (unsigned char c : text) {
    if ((c & 0xC0) != 0x80) ++n;
  }
  return n;
}

std::map<std::size_t, LengthStats> length_stats(std::span<const PerturbationRecord> records,
                                                bool flipped_only, std::size_t bin_width) {
  if (bin_width == 0) throw ConfigError("histogram bin width must be positive");
  std::map<std::size_t, LengthStats> out;
  std::map<std::size_t, std::size_t> sums;
  for (const auto& r : records) {
    if (r.is_contraction() || (flipped_only && !r.flipped)) continue;
    const std::size_t len = char_length(r.original.text);
    LengthStats& s = out[r.typo_count];
    s.bin_width = bin_width;
    ++s.count;
    sums[r.typo_count] += len;
    const std::size_t bin = len / bin_width;
    if (s.histogram.size() <= bin) s.histogram.resize(bin + 1, 0);
    ++s.histogram[bin];
  }
  for (auto& [k, s] : out) s.mean = static_cast<double>(sums[k]) / static_cast<double>(s.count);
  return out;
}

}  // namespace sadet
