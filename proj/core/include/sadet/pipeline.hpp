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

#ifndef SADET_PIPELINE_HPP
#define SADET_PIPELINE_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sadet/attack.hpp"
#include "sadet/bow_model.hpp"
#include "sadet/datamodel.hpp"
#include "sadet/sa.hpp"

namespace sadet {

std::string_view version() noexcept;

struct ClassifierConfig {
  enum class Kind { builtin, remote };
  Kind kind = Kind::builtin;
  std::string endpoint;
  std::chrono::milliseconds timeout{10000};
  int retries = 2;
};

struct ModelConfig {
  Hyperparams hp;
  std::size_t min_count = 1;
  std::optional<std::size_t> max_vocab;
  TraceLayer layer = TraceLayer::hidden;
};

/// Class an evaluation input is scored under.
enum class LabelSource {
  predicted,  ///< the model's decision C(x), as for the reference rows
  annotated,  ///< the dataset label of the original review
};

struct DsaSettings {
  std::vector<DsaVariant> variants{DsaVariant::dsa0, DsaVariant::dsa1, DsaVariant::dsa2,
                                   DsaVariant::dsa3};
  std::size_t k = 10;
  OtherClassMode other_class = OtherClassMode::pooled;
  LabelSource label_source = LabelSource::predicted;
};

/// Everything a pipeline command needs. Relative paths in a config file are
/// resolved against the directory of that file.
struct RunConfig {
  std::filesystem::path train;
  std::filesystem::path test;
  std::filesystem::path output_dir = "sadet-out";
  /// Defaults to output_dir/model.json.
  std::optional<std::filesystem::path> model;
  std::vector<std::string> labels{"negative", "positive"};
  std::vector<RatingRule> rating_rules;  ///< empty: 1-2 -> labels[0], 4-5 -> labels[1]
  ClassifierConfig classifier;
  ModelConfig model_config;
  PerturbationSpec perturb;
  DsaSettings dsa;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::size_t histogram_bin_width = 50;
  bool force = false;

  /// Variant list non-empty and duplicate-free, DSA k >= 1, perturbation spec valid,
  /// remote endpoint present when selected. Throws ConfigError.
  void validate() const;
  std::filesystem::path model_path() const;
  LabelMap label_map() const;
  /// Canonical JSON of every field that affects outputs (paths, jobs and force excluded).
  std::string canonical_json() const;
};

/// Parses a JSON config document. Unknown keys are rejected.
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
RunConfig load_config(const std::filesystem::path& path);

/// Artifact names inside the output directory.
namespace artifacts {
inline constexpr const char* kModel = "model.json";
inline constexpr const char* kTrainReport = "train_report.json";
inline constexpr const char* kRecords = "records.jsonl";
inline constexpr const char* kAttackReport = "attack_report.json";
inline constexpr const char* kAsrCsv = "asr.csv";
inline constexpr const char* kTrainTraces = "traces_train.tsv";
inline constexpr const char* kEvalTraces = "traces_eval.tsv";
inline constexpr const char* kReport = "report.json";
inline constexpr const char* kAucCsv = "auc.csv";
inline constexpr const char* kLengthCsv = "length_stats.csv";
std::string scores(DsaVariant variant);
std::string roc(DsaVariant variant);
std::string manifest(std::string_view command);
}  // namespace artifacts

struct CommandResult {
  std::vector<std::filesystem::path> outputs;
  std::vector<std::string> warnings;
};

CommandResult cmd_train(const RunConfig& config);
/// Remote service failures in attack and score surface as RemoteModelError.
CommandResult cmd_attack(const RunConfig& config);
CommandResult cmd_score(const RunConfig& config);
CommandResult cmd_report(const RunConfig& config);
/// train (builtin only), attack, score, report.
CommandResult cmd_run(const RunConfig& config);

/// 2 for ConfigError, 3 for any other exception.
int exit_code_for(const std::exception& error) noexcept;

}  // namespace sadet

#endif  // SADET_PIPELINE_HPP
