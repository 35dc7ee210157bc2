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

#ifndef SADET_EVAL_HPP
#define SADET_EVAL_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sadet/attack.hpp"

namespace sadet {

struct ScoredExample {
  std::string input_id;
  double score = 0.0;  ///< may be +inf, never NaN
  bool is_anomalous = false;
};

/// Operating point for the rule "anomalous iff score >= threshold".
/// The first point of a curve is the reject-everything endpoint (0, 0); its
/// threshold is reported as +inf.
struct RocPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double tpr = 0.0;
};

/// One point per distinct score (descending) after the (0, 0) endpoint; the
/// last point is (1, 1). +inf scores rank above every finite score. Throws
/// DataError when either class is missing or a score is NaN.
std::vector<RocPoint> roc_curve(std::span<const ScoredExample> examples);

/// Mann-Whitney AUC: P(anomalous > clean) + P(tie) / 2 over all pairs.
double auc(std::span<const ScoredExample> examples);

/// Trapezoidal area under a ROC staircase.
double auc_trapezoid(std::span<const RocPoint> curve);

struct AsrEntry {
  std::size_t attacked = 0;
  std::size_t flipped = 0;
  double rate = 0.0;  ///< flipped / attacked
};

/// Attack success rate per typo count, over typo records only.
std::map<std::size_t, AsrEntry> attack_success_rate(std::span<const PerturbationRecord> records);

/// Success rate of the contraction channel.
AsrEntry contraction_success_rate(std::span<const PerturbationRecord> records);

/// Length of a UTF-8 string in code points.
std::size_t char_length(std::string_view text) noexcept;

struct LengthStats {
  std::size_t count = 0;
  double mean = 0.0;
  std::size_t bin_width = 50;
  std::vector<std::size_t> histogram;  ///< bin i counts lengths in [i*w, (i+1)*w)
};

/// Original-text length statistics per typo count (typo records only).
std::map<std::size_t, LengthStats> length_stats(std::span<const PerturbationRecord> records,
                                                bool flipped_only, std::size_t bin_width = 50);

}  // namespace sadet

#endif  // SADET_EVAL_HPP
