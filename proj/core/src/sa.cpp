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

#include "sadet/sa.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <exception>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <thread>

#include "sadet/csv.hpp"
#include "sadet/error.hpp"
#include "sadet/log.hpp"
#include "sadet/numfmt.hpp"

namespace sadet {
namespace {

using Block = ReferenceStore::ClassBlock;

// Rows are scanned in fixed-size blocks.
constexpr std::size_t kScanBlock = 256;

double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

double distance(std::span<const double> a, std::span<const double> b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

struct Candidate {
  double d2;
  std::size_t global;
  const Block* block;
  std::size_t local;

  bool operator<(const Candidate& o) const noexcept {
    return d2 != o.d2 ? d2 < o.d2 : global < o.global;
  }
};

void scan(const Block& b, std::span<const double> x, std::size_t dim, std::vector<Candidate>& out) {
  double buf[kScanBlock];
  for (std::size_t start = 0; start < b.count; start += kScanBlock) {
    const std::size_t end = std::min(b.count, start + kScanBlock);
    for (std::size_t i = start; i < end; ++i) buf[i - start] = squared_distance(x, b.row(i, dim));
    for (std::size_t i = start; i < end; ++i) out.push_back({buf[i - start], b.global_index[i], &b, i});
  }
}

std::optional<Candidate> nearest(std::span<const Block* const> blocks, std::span<const double> x,
                                 std::size_t dim) {
  std::optional<Candidate> best;
  double buf[kScanBlock];
  for (const Block* b : blocks) {
    for (std::size_t start = 0; start < b->count; start += kScanBlock) {
      const std::size_t end = std::min(b->count, start + kScanBlock);
      for (std::size_t i = start; i < end; ++i) buf[i - start] = squared_distance(x, b->row(i, dim));
      for (std::size_t i = start; i < end; ++i) {
        const Candidate c{buf[i - start], b->global_index[i], b, i};
        if (!best || c < *best) best = c;
      }
    }
  }
  return best;
}

// Mean of the k nearest rows, summed in ascending input order.
std::vector<double> knn_centre(std::span<const Block* const> blocks, std::span<const double> x,
                               std::size_t dim, std::size_t k) {
  std::vector<Candidate> all;
  for (const Block* b : blocks) scan(*b, x, dim, all);
  k = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
  all.resize(k);
  std::sort(all.begin(), all.end(),
            [](const Candidate& a, const Candidate& b) { return a.global < b.global; });
  std::vector<double> centre(dim, 0.0);
  for (const auto& c : all) {
    const auto row = c.block->row(c.local, dim);
    for (std::size_t j = 0; j < dim; ++j) centre[j] += row[j];
  }
  for (double& v : centre) v /= static_cast<double>(k);
  return centre;
}

// Centre of the neighbourhood of x inside `blocks` (which are all same-class,
// or all other-class). `pooled_centroid` is the precomputed whole-set mean.
std::vector<double> neighbourhood_centre(std::span<const Block* const> blocks,
                                         std::span<const double> x, std::size_t dim,
                                         const NeighborhoodSpec& nb,
                                         std::span<const double> pooled_centroid) {
  switch (nb.kind) {
    case NeighborhoodSpec::Kind::nearest_point: {
      const auto c = nearest(blocks, x, dim);
      const auto row = c->block->row(c->local, dim);
      return {row.begin(), row.end()};
    }
    case NeighborhoodSpec::Kind::whole_class:
      return {pooled_centroid.begin(), pooled_centroid.end()};
    case NeighborhoodSpec::Kind::k_nearest:
      return knn_centre(blocks, x, dim, nb.k);
  }
  return {};
}

struct Sides {
  const Block* same = nullptr;
  std::vector<const Block*> others;
};

Sides sides_for(const ReferenceStore& ref, const ActivationTrace& trace, const ClassLabel& label) {
  if (trace.values.size() != ref.dim()) {
    throw DimensionError("trace '" + trace.input_id + "' has " + std::to_string(trace.values.size()) +
                         " values, reference dim is " + std::to_string(ref.dim()));
  }
  Sides s;
  s.same = ref.find(label.id);
  if (!s.same) {
    throw UnknownClassError("class '" + label.name + "' (id " + std::to_string(label.id) +
                            ") has no reference traces (input '" + trace.input_id + "')");
  }
  for (const auto& b : ref.blocks()) {
    if (b.class_id != label.id) s.others.push_back(&b);
  }
  return s;
}

DsaScore make_score(double dist_a, double dist_b, DsaVariant variant, const std::string& id) {
  if (dist_a == 0.0 && dist_b == 0.0) {
    log_warning("input '" + id + "': dist_a and dist_b are both zero; scoring as 0");
  }
  return DsaScore{dsa_ratio(dist_a, dist_b), dist_a, dist_b, variant, id};
}

}  // namespace

std::string_view to_string(DsaVariant variant) noexcept {
  switch (variant) {
    case DsaVariant::dsa0: return "DSA0";
    case DsaVariant::dsa1: return "DSA1";
    case DsaVariant::dsa2: return "DSA2";
    case DsaVariant::dsa3: return "DSA3";
  }
  return "DSA0";
}

DsaVariant dsa_variant_from_string(std::string_view name) {
  std::string upper(name);
  for (char& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "DSA0") return DsaVariant::dsa0;
  if (upper == "DSA1") return DsaVariant::dsa1;
  if (upper == "DSA2") return DsaVariant::dsa2;
  if (upper == "DSA3") return DsaVariant::dsa3;
  throw ConfigError("unknown DSA variant '" + std::string(name) + "'");
}

NeighborhoodSpec NeighborhoodSpec::k_nearest(std::size_t k) {
  if (k == 0) throw ConfigError("k_nearest neighbourhood needs k >= 1");
  return {Kind::k_nearest, k};
}

DsaVariant NeighborhoodSpec::variant() const noexcept {
  switch (kind) {
    case Kind::nearest_point: return DsaVariant::dsa1;
    case Kind::whole_class: return DsaVariant::dsa2;
    case Kind::k_nearest: return DsaVariant::dsa3;
  }
  return DsaVariant::dsa1;
}

double dsa_ratio(double dist_a, double dist_b) noexcept {
  if (dist_a == 0.0) return 0.0;
  if (dist_b == 0.0) return std::numeric_limits<double>::infinity();
  return dist_a / dist_b;
}

ReferenceStore ReferenceStore::build(std::span<const LabeledTrace> training) {
  if (training.empty()) throw ConfigError("reference store needs training traces");
  ReferenceStore ref;
  ref.dim_ = training.front().trace.values.size();
  if (ref.dim_ == 0) throw DimensionError("reference traces are empty vectors");

  std::uint32_t max_id = 0;
  for (const auto& t : training) {
    if (t.trace.values.size() != ref.dim_) {
      throw DimensionError("trace '" + t.trace.input_id + "' has " +
                           std::to_string(t.trace.values.size()) + " values, expected " +
                           std::to_string(ref.dim_));
    }
    for (double v : t.trace.values) {
      if (!std::isfinite(v)) throw DataError("trace '" + t.trace.input_id + "' has a non-finite value");
    }
    max_id = std::max(max_id, t.label.id);
  }

  std::vector<std::size_t> counts(max_id + 1, 0);
  for (const auto& t : training) ++counts[t.label.id];
  ref.slot_.assign(max_id + 1, -1);
  for (std::uint32_t c = 0; c <= max_id; ++c) {
    if (!counts[c]) continue;
    ref.slot_[c] = static_cast<std::ptrdiff_t>(ref.blocks_.size());
    Block b;
    b.class_id = c;
    b.rows.reserve(counts[c] * ref.dim_);
    b.global_index.reserve(counts[c]);
    ref.blocks_.push_back(std::move(b));
  }
  if (ref.blocks_.size() < 2) {
    throw ConfigError("reference store needs traces from at least 2 classes");
  }

  for (std::size_t g = 0; g < training.size(); ++g) {
    Block& b = ref.blocks_[static_cast<std::size_t>(ref.slot_[training[g].label.id])];
    const auto& v = training[g].trace.values;
    b.rows.insert(b.rows.end(), v.begin(), v.end());
    b.global_index.push_back(g);
    ++b.count;
  }
  ref.total_ = training.size();

  for (auto& b : ref.blocks_) {
    b.centroid.assign(ref.dim_, 0.0);
    for (std::size_t i = 0; i < b.count; ++i) {
      const auto row = b.row(i, ref.dim_);
      for (std::size_t j = 0; j < ref.dim_; ++j) b.centroid[j] += row[j];
    }
    for (double& x : b.centroid) x /= static_cast<double>(b.count);

    b.complement_centroid.assign(ref.dim_, 0.0);
    std::size_t n = 0;
    for (const auto& t : training) {
      if (t.label.id == b.class_id) continue;
      for (std::size_t j = 0; j < ref.dim_; ++j) b.complement_centroid[j] += t.trace.values[j];
      ++n;
    }
    for (double& x : b.complement_centroid) x /= static_cast<double>(n);
  }
  return ref;
}

const ReferenceStore::ClassBlock* ReferenceStore::find(std::uint32_t class_id) const noexcept {
  if (class_id >= slot_.size() || slot_[class_id] < 0) return nullptr;
  return &blocks_[static_cast<std::size_t>(slot_[class_id])];
}

DsaScore dsa0(const ActivationTrace& trace, const ClassLabel& label, const ReferenceStore& ref) {
  const Sides s = sides_for(ref, trace, label);
  const std::size_t dim = ref.dim();
  const Block* same[] = {s.same};
  const Candidate a = *nearest(same, trace.values, dim);
  const auto xa = a.block->row(a.local, dim);
  const Candidate b = *nearest(s.others, xa, dim);
  return make_score(std::sqrt(a.d2), std::sqrt(b.d2), DsaVariant::dsa0, trace.input_id);
}

DsaScore dsa_modified(const ActivationTrace& trace, const ClassLabel& label,
                      const ReferenceStore& ref, const NeighborhoodSpec& nb, OtherClassMode mode) {
  if (nb.kind == NeighborhoodSpec::Kind::k_nearest && nb.k == 0) {
    throw ConfigError("k_nearest neighbourhood needs k >= 1");
  }
  const Sides s = sides_for(ref, trace, label);
  const std::size_t dim = ref.dim();
  const auto x = std::span<const double>(trace.values);

  const Block* same[] = {s.same};
  const auto xa = neighbourhood_centre(same, x, dim, nb, s.same->centroid);
  const double dist_a = distance(x, xa);

  double dist_b = 0.0;
  if (mode == OtherClassMode::pooled) {
    const auto xb = neighbourhood_centre(s.others, x, dim, nb, s.same->complement_centroid);
    dist_b = distance(x, xb);
  } else {
    bool first = true;
    for (const Block* other : s.others) {
      const Block* one[] = {other};
      const double d = distance(x, neighbourhood_centre(one, x, dim, nb, other->centroid));
      if (first || d < dist_b) dist_b = d;
      first = false;
    }
  }
  return make_score(dist_a, dist_b, nb.variant(), trace.input_id);
}

DsaScore score(const ActivationTrace& trace, const ClassLabel& label, const ReferenceStore& ref,
               const DsaConfig& config) {
  switch (config.variant) {
    case DsaVariant::dsa0: return dsa0(trace, label, ref);
    case DsaVariant::dsa1:
      return dsa_modified(trace, label, ref, NeighborhoodSpec::nearest_point(), config.other_class);
    case DsaVariant::dsa2:
      return dsa_modified(trace, label, ref, NeighborhoodSpec::whole_class(), config.other_class);
    case DsaVariant::dsa3:
      return dsa_modified(trace, label, ref, NeighborhoodSpec::k_nearest(config.k), config.other_class);
  }
  throw ConfigError("unknown DSA variant");
}

std::vector<DsaScore> score_batch(std::span<const ActivationTrace> traces,
                                  std::span<const ClassLabel> labels, const ReferenceStore& ref,
                                  const DsaConfig& config, std::size_t jobs) {
  if (traces.size() != labels.size()) {
    throw DimensionError("score_batch: " + std::to_string(traces.size()) + " traces but " +
                         std::to_string(labels.size()) + " labels");
  }
  const std::size_t n = traces.size();
  std::vector<DsaScore> out(n);
  if (n == 0) return out;
  jobs = std::clamp<std::size_t>(jobs, 1, n);

  struct Failure {
    std::size_t index;
    std::string what;
  };
  std::vector<std::optional<Failure>> failures(jobs);
  auto run = [&](std::size_t worker, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        out[i] = score(traces[i], labels[i], ref, config);
      } catch (const std::exception& e) {
        failures[worker] = Failure{i, e.what()};
        return;
      }
    }
  };

  const std::size_t chunk = (n + jobs - 1) / jobs;
  if (jobs == 1) {
    run(0, 0, n);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < jobs; ++w) {
      const std::size_t begin = std::min(n, w * chunk);
      const std::size_t end = std::min(n, begin + chunk);
      pool.emplace_back(run, w, begin, end);
    }
  }
  for (const auto& f : failures) {
    if (f) throw BatchError(f->index, f->what);
  }
  return out;
}

void write_scores(std::ostream& out, std::span<const DsaScore> scores) {
  csv::write_row(out, {"input_id", "variant", "dist_a", "dist_b", "value"});
  for (const auto& s : scores) {
    csv::write_row(out, {s.input_id, std::string(to_string(s.variant)), format_double(s.dist_a),
                         format_double(s.dist_b), format_double(s.value)});
  }
}

std::vector<DsaScore> read_scores(std::istream& in) {
  csv::Reader reader(in);
  auto header = reader.next();
  if (!header || *header != csv::Row{"input_id", "variant", "dist_a", "dist_b", "value"}) {
    throw DataError("score file: bad header");
  }
  std::vector<DsaScore> out;
  while (auto row = reader.next()) {
    if (row->size() != 5) {
      throw DataError("score file row " + std::to_string(out.size() + 1) + ": expected 5 fields");
    }
    DsaScore s;
    s.input_id = (*row)[0];
    s.variant = dsa_variant_from_string((*row)[1]);
    s.dist_a = parse_double((*row)[2]);
    s.dist_b = parse_double((*row)[3]);
    s.value = parse_double((*row)[4]);
    out.push_back(std::move(s));
  }
  return out;
}

void save_scores(const std::filesystem::path& path, std::span<const DsaScore> scores) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_scores(out, scores);
}

std::vector<DsaScore> load_scores(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return read_scores(in);
}

}  // namespace sadet
