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

#ifndef SADET_SA_HPP
#define SADET_SA_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sadet/classifier.hpp"
#include "sadet/datamodel.hpp"

namespace sadet {

/// Distance-based surprise adequacy variants.
///
/// DSA0 is the original pairwise form: x_a is the nearest same-class training
/// trace to the test trace, x_b the nearest other-class trace to x_a, and the
/// score is |t - x_a| / |x_a - x_b|. DSA1-3 measure both distances from the
/// test trace to neighbourhood centres: the nearest point (DSA1), the whole
/// class (DSA2) or the k nearest points (DSA3).
enum class DsaVariant { dsa0, dsa1, dsa2, dsa3 };

std::string_view to_string(DsaVariant variant) noexcept;
DsaVariant dsa_variant_from_string(std::string_view name);

struct NeighborhoodSpec {
  enum class Kind { nearest_point, whole_class, k_nearest };

  Kind kind = Kind::nearest_point;
  std::size_t k = 1;

  static NeighborhoodSpec nearest_point() { return {Kind::nearest_point, 1}; }
  static NeighborhoodSpec whole_class() { return {Kind::whole_class, 0}; }
  /// Throws ConfigError when k == 0.
  static NeighborhoodSpec k_nearest(std::size_t k);

  /// DSA1, DSA2 or DSA3.
  DsaVariant variant() const noexcept;
};

/// How the other-class side is formed for the modified variants.
enum class OtherClassMode {
  pooled,         ///< all other classes form one candidate set (default)
  per_class_min,  ///< neighbourhood per other class; the smallest dist_b wins
};

struct DsaScore {
  double value = 0.0;  ///< dist_a / dist_b, or +inf when only dist_b is zero
  double dist_a = 0.0;
  double dist_b = 0.0;
  DsaVariant variant = DsaVariant::dsa0;
  std::string input_id;
};

/// dist_a / dist_b with the zero conventions: 0 when dist_a == 0, +inf when
/// only dist_b == 0.
double dsa_ratio(double dist_a, double dist_b) noexcept;

struct LabeledTrace {
  ActivationTrace trace;
  ClassLabel label;
};

/// Training traces grouped by class, with class centroids.
///
/// Rows keep their input order inside each class; that order (and the global
/// input index) breaks distance ties.
class ReferenceStore {
 public:
  struct ClassBlock {
    std::uint32_t class_id = 0;
    std::size_t count = 0;
    std::vector<double> rows;                ///< count x dim, row-major
    std::vector<std::size_t> global_index;   ///< input position of each row
    std::vector<double> centroid;            ///< mean of the rows
    std::vector<double> complement_centroid; ///< mean of all rows of other classes

    std::span<const double> row(std::size_t i, std::size_t dim) const {
      return {rows.data() + i * dim, dim};
    }
  };

  /// Throws ConfigError with fewer than two classes, DimensionError (naming
  /// the input id) when trace lengths differ.
  static ReferenceStore build(std::span<const LabeledTrace> training);

  std::size_t dim() const noexcept { return dim_; }
  /// One past the largest class id present.
  std::size_t num_classes() const noexcept { return slot_.size(); }
  std::size_t size() const noexcept { return total_; }
  std::span<const ClassBlock> blocks() const noexcept { return blocks_; }

  /// Block for `class_id`, or nullptr if the class has no training rows.
  const ClassBlock* find(std::uint32_t class_id) const noexcept;

 private:
  std::size_t dim_ = 0;
  std::size_t total_ = 0;
  std::vector<ClassBlock> blocks_;         // ascending class id
  std::vector<std::ptrdiff_t> slot_;       // class id -> index into blocks_, or -1
};

/// Original DSA (DSA0). Nearest-neighbour ties go to the lowest row index.
/// Throws UnknownClassError when `label` has no training rows.
DsaScore dsa0(const ActivationTrace& trace, const ClassLabel& label, const ReferenceStore& ref);

/// Modified DSA: distances from the trace to the centres of its same-class and
/// other-class neighbourhoods. k is capped at the size of each candidate set.
DsaScore dsa_modified(const ActivationTrace& trace, const ClassLabel& label,
                      const ReferenceStore& ref, const NeighborhoodSpec& nb,
                      OtherClassMode mode = OtherClassMode::pooled);

struct DsaConfig {
  DsaVariant variant = DsaVariant::dsa3;
  std::size_t k = 10;  ///< neighbourhood size for DSA3
  OtherClassMode other_class = OtherClassMode::pooled;
};

DsaScore score(const ActivationTrace& trace, const ClassLabel& label, const ReferenceStore& ref,
               const DsaConfig& config);

/// Pointwise `score` over a batch, split across up to `jobs` threads. Output
/// order equals input order. The lowest-index failure is rethrown as BatchError.
std::vector<DsaScore> score_batch(std::span<const ActivationTrace> traces,
                                  std::span<const ClassLabel> labels, const ReferenceStore& ref,
                                  const DsaConfig& config, std::size_t jobs = 1);

/// CSV with header input_id,variant,dist_a,dist_b,value; "inf" marks the sentinel.
void write_scores(std::ostream& out, std::span<const DsaScore> scores);
std::vector<DsaScore> read_scores(std::istream& in);

void save_scores(const std::filesystem::path& path, std::span<const DsaScore> scores);
std::vector<DsaScore> load_scores(const std::filesystem::path& path);

}  // namespace sadet

#endif  // SADET_SA_HPP
