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

#include "sadet/pipeline.hpp"

#include <algorithm>
#include <exception>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <map>
#include <memory>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "sadet/csv.hpp"
#include "sadet/error.hpp"
#include "sadet/eval.hpp"
#include "sadet/hash.hpp"
#include "sadet/log.hpp"
#include "sadet/model_io.hpp"
#include "sadet/numfmt.hpp"
#include "sadet/remote.hpp"
#include "sadet/trace_store.hpp"

#ifndef SADET_VERSION
#define SADET_VERSION "0.0.0"
#endif

namespace sadet {
namespace fs = std::filesystem;
using nlohmann::json;

std::string_view version() noexcept { return SADET_VERSION; }

namespace {

// ---------------------------------------------------------------------------
// Config parsing

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
void read_opt(const json& obj, const char* key, T& out, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + "." + key + ": wrong type");
  }
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

std::string_view to_string(OtherClassMode mode) noexcept {
  return mode == OtherClassMode::pooled ? "pooled" : "per_class_min";
}

std::string_view to_string(LabelSource source) noexcept {
  return source == LabelSource::predicted ? "predicted" : "annotated";
}

LabelSource label_source_from_string(std::string_view name) {
  if (name == "predicted") return LabelSource::predicted;
  if (name == "annotated") return LabelSource::annotated;
  throw ConfigError("unknown label_source '" + std::string(name) + "'");
}

OtherClassMode other_class_from_string(std::string_view name) {
  if (name == "pooled") return OtherClassMode::pooled;
  if (name == "per_class_min") return OtherClassMode::per_class_min;
  throw ConfigError("unknown other_class mode '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Files

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string digest(const fs::path& path) { return hex64(fnv1a64(read_file(path))); }

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << content;
  out.flush();
  if (!out) throw Error("write failed: " + path.string());
}

void require_file(const fs::path& path, std::string_view what, std::string_view hint = {}) {
  if (path.empty()) throw ConfigError(std::string(what) + " file not configured");
  if (!fs::is_regular_file(path)) {
    std::string msg = std::string(what) + " file not found: " + path.string();
    if (!hint.empty()) msg += " (" + std::string(hint) + ")";
    throw ConfigError(msg);
  }
}

/// Output paths of one command. Refuses existing files unless forced.
class Outputs {
 public:
  Outputs(const RunConfig& config, std::string_view command) : config_(config), command_(command) {}

  fs::path add(const std::string& name) {
    names_.push_back(name);
    return config_.output_dir / name;
  }

  void claim() const {
    fs::create_directories(config_.output_dir);
    for (const auto& name : names_) check(config_.output_dir / name);
    check(manifest_path());
  }

  fs::path manifest_path() const { return config_.output_dir / artifacts::manifest(command_); }

  CommandResult finish(const std::vector<fs::path>& inputs, std::vector<std::string> warnings) const {
    json in = json::array();
    for (const auto& p : inputs) in.push_back({{"path", p.generic_string()}, {"digest", digest(p)}});
    json out = json::array();
    CommandResult result;
    for (const auto& name : names_) {
      const fs::path p = config_.output_dir / name;
      out.push_back({{"name", name}, {"digest", digest(p)}});
      result.outputs.push_back(p);
    }
    json m;
    m["format"] = "sadet-manifest";
    m["version"] = 1;
    m["command"] = command_;
    m["sadet_version"] = std::string(version());
    m["seed"] = config_.seed;
    m["config_hash"] = hex64(fnv1a64(config_.canonical_json()));
    m["inputs"] = std::move(in);
    m["outputs"] = std::move(out);
    write_file(manifest_path(), m.dump(2) + "\n");
    result.outputs.push_back(manifest_path());
    result.warnings = std::move(warnings);
    return result;
  }

 private:
  void check(const fs::path& p) const {
    if (!config_.force && fs::exists(p)) {
      throw ConfigError("refusing to overwrite " + p.string() + " (use --force)");
    }
  }

  const RunConfig& config_;
  std::string command_;
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Classifiers and traces

struct Backend {
  std::unique_ptr<TextClassifier> classifier;
  const BowModel* builtin = nullptr;
  std::vector<fs::path> inputs;

  /// Prediction with its trace; remote services must supply one.
  Prediction observe(const std::string& id, std::string_view text) const {
    Prediction p = classifier->predict(id, text);
    if (!p.trace) throw RemoteModelError("remote service returned no trace", "");
    return p;
  }
};

Backend make_backend(const RunConfig& config) {
  const LabelSet labels(config.labels);
  Backend b;
  if (config.classifier.kind == ClassifierConfig::Kind::remote) {
    RemoteOptions opts;
    opts.timeout = config.classifier.timeout;
    opts.retries = config.classifier.retries;
    b.classifier = std::make_unique<RemoteClassifier>(config.classifier.endpoint, labels, opts);
    return b;
  }
  const fs::path path = config.model_path();
  require_file(path, "model", "run 'sadet train' first");
  auto model = std::make_unique<BowModel>(load_model(path));
  if (!(model->labels() == labels)) {
    throw ConfigError("model " + path.string() + " was trained on different labels");
  }
  b.builtin = model.get();
  b.classifier = std::move(model);
  b.inputs.push_back(path);
  return b;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads; rethrows the lowest-index failure.
void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t worker) {
    for (std::size_t i = worker; i < n; i += jobs) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < jobs; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

struct TraceInput {
  std::string id;
  std::string_view text;
  ClassLabel label;
};

enum class RowLabel { predicted, given };

/// Traces of `inputs`. Rows carry the model's predicted class or the input's
/// own label, per `row_label`.
TraceTable collect_traces(const Backend& backend, std::span<const TraceInput> inputs,
                          std::string layer, RowLabel row_label, std::size_t jobs) {
  TraceTable table;
  table.layer = std::move(layer);
  table.rows.resize(inputs.size());
  parallel_for(inputs.size(), jobs, [&](std::size_t i) {
    const TraceInput& in = inputs[i];
    try {
      Prediction p = backend.observe(in.id, in.text);
      const std::uint32_t label = row_label == RowLabel::predicted ? p.label.id : in.label.id;
      table.rows[i] = TraceRow{in.id, label, std::move(*p.trace)};
    } catch (const RemoteModelError& e) {
      throw RemoteModelError("input '" + in.id + "': " + e.what(), e.raw_response());
    } catch (const std::exception& e) {
      throw Error("input '" + in.id + "': " + e.what());
    }
  });
  table.dim = table.rows.empty() ? 0 : table.rows.front().values.size();
  for (const auto& r : table.rows) {
    if (r.values.size() != table.dim) {
      throw DimensionError("input '" + r.input_id + "': trace length " +
                           std::to_string(r.values.size()) + ", expected " +
                           std::to_string(table.dim));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Reports

json asr_json(const std::map<std::size_t, AsrEntry>& asr, std::size_t items) {
  json out = json::object();
  for (const auto& [k, e] : asr) {
    out[std::to_string(k)] = {{"attacked", e.attacked},
                              {"flipped", e.flipped},
                              {"rate", e.rate},
                              {"rate_over_test_items",
                               items ? static_cast<double>(e.flipped) / static_cast<double>(items) : 0.0}};
  }
  return out;
}

json length_json(const std::map<std::size_t, LengthStats>& stats) {
  json out = json::object();
  for (const auto& [k, s] : stats) {
    out[std::to_string(k)] = {
        {"count", s.count}, {"mean", s.mean}, {"bin_width", s.bin_width}, {"histogram", s.histogram}};
  }
  return out;
}

json mean_lengths(std::span<const PerturbationRecord> records) {
  std::size_t nf = 0, nn = 0, sf = 0, sn = 0;
  for (const auto& r : records) {
    if (r.is_contraction()) continue;
    const std::size_t len = char_length(r.original.text);
    if (r.flipped) {
      ++nf;
      sf += len;
    } else {
      ++nn;
      sn += len;
    }
  }
  json out;
  out["flipped"] = nf ? json(static_cast<double>(sf) / static_cast<double>(nf)) : json(nullptr);
  out["non_flipped"] = nn ? json(static_cast<double>(sn) / static_cast<double>(nn)) : json(nullptr);
  return out;
}

json length_section(std::span<const PerturbationRecord> records, std::size_t bin_width) {
  return {{"flipped", length_json(length_stats(records, true, bin_width))},
          {"attacked", length_json(length_stats(records, false, bin_width))},
          {"mean_length", mean_lengths(records)}};
}

std::string length_csv(std::span<const PerturbationRecord> records, std::size_t bin_width) {
  std::ostringstream out;
  csv::write_row(out, {"typo_count", "subset", "bin_start", "bin_end", "count"});
  for (bool flipped_only : {true, false}) {
    for (const auto& [k, s] : length_stats(records, flipped_only, bin_width)) {
      for (std::size_t b = 0; b < s.histogram.size(); ++b) {
        csv::write_row(out, {std::to_string(k), flipped_only ? "flipped" : "attacked",
                             std::to_string(b * s.bin_width), std::to_string((b + 1) * s.bin_width),
                             std::to_string(s.histogram[b])});
      }
    }
  }
  return out.str();
}

std::vector<PerturbationRecord> load_records(const fs::path& path, const LabelSet& labels) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  try {
    return read_records(in, labels);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Dataset load_split(const RunConfig& config, const fs::path& path, Split split) {
  return load_dataset(path, format_from_path(path), config.label_map(), split);
}

std::string sample_list(const std::vector<std::string>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size() && i < 5; ++i) out += (i ? ", " : "") + ids[i];
  if (ids.size() > 5) out += ", ... (" + std::to_string(ids.size()) + " total)";
  return out;
}

/// Looks up every expected id in the score file; any missing, duplicate or
/// unexpected id is a reconciliation failure.
std::unordered_map<std::string, double> reconcile(const std::vector<DsaScore>& scores,
                                                  const std::set<std::string>& expected,
                                                  const std::string& file) {
  std::unordered_map<std::string, double> by_id;
  std::vector<std::string> dup, unexpected, missing;
  for (const auto& s : scores) {
    if (!expected.count(s.input_id)) {
      unexpected.push_back(s.input_id);
    } else if (!by_id.emplace(s.input_id, s.value).second) {
      dup.push_back(s.input_id);
    }
  }
  for (const auto& id : expected) {
    if (!by_id.count(id)) missing.push_back(id);
  }
  std::string msg;
  if (!missing.empty()) msg += " missing ids: " + sample_list(missing) + ";";
  if (!unexpected.empty()) msg += " unknown ids: " + sample_list(unexpected) + ";";
  if (!dup.empty()) msg += " duplicate ids: " + sample_list(dup) + ";";
  if (!msg.empty()) throw ReconciliationError(file + " does not match the record and test files:" + msg);
  return by_id;
}

}  // namespace

// ---------------------------------------------------------------------------

namespace artifacts {
std::string scores(DsaVariant variant) { return "scores_" + std::string(to_string(variant)) + ".csv"; }
std::string roc(DsaVariant variant) { return "roc_" + std::string(to_string(variant)) + ".csv"; }
std::string manifest(std::string_view command) { return "manifest_" + std::string(command) + ".json"; }
}  // namespace artifacts

void RunConfig::validate() const {
  if (dsa.variants.empty()) throw ConfigError("dsa.variants must not be empty");
  std::set<DsaVariant> seen;
  for (DsaVariant v : dsa.variants) {
    if (!seen.insert(v).second) {
      throw ConfigError("dsa.variants lists " + std::string(to_string(v)) + " twice");
    }
  }
  if (dsa.k == 0) throw ConfigError("dsa.k must be >= 1");
  if (histogram_bin_width == 0) throw ConfigError("histogram_bin_width must be >= 1");
  if (jobs == 0) throw ConfigError("jobs must be >= 1");
  perturb.validate();
  label_map();
  if (classifier.kind == ClassifierConfig::Kind::remote && classifier.endpoint.empty()) {
    throw ConfigError("classifier.endpoint is required for a remote classifier");
  }
  if (classifier.retries < 0) throw ConfigError("classifier.retries must be >= 0");
  const Hyperparams& hp = model_config.hp;
  if (hp.hidden_dim == 0 || hp.epochs == 0 || hp.batch_size == 0 || !(hp.learning_rate > 0.0)) {
    throw ConfigError("model hyperparameters must be positive");
  }
}

fs::path RunConfig::model_path() const { return model ? *model : output_dir / artifacts::kModel; }

LabelMap RunConfig::label_map() const {
  LabelSet set(labels);
  if (!rating_rules.empty()) return LabelMap(set, rating_rules);
  if (set.size() == 2) return LabelMap(set, {{1, 2, set.at(0)}, {4, 5, set.at(1)}});
  return LabelMap(set, {});
}

std::string RunConfig::canonical_json() const {
  json rules = json::array();
  for (const auto& r : rating_rules) rules.push_back({{"min", r.min}, {"max", r.max}, {"label", r.label.name}});
  json variants = json::array();
  for (DsaVariant v : dsa.variants) variants.push_back(std::string(to_string(v)));
  json j;
  j["labels"] = labels;
  j["label_map"] = rules;
  j["classifier"] = {{"kind", classifier.kind == ClassifierConfig::Kind::builtin ? "builtin" : "remote"},
                     {"endpoint", classifier.endpoint}};
  j["model"] = {{"hidden_dim", model_config.hp.hidden_dim},
                {"epochs", model_config.hp.epochs},
                {"learning_rate", model_config.hp.learning_rate},
                {"batch_size", model_config.hp.batch_size},
                {"min_count", model_config.min_count},
                {"max_vocab", model_config.max_vocab ? json(*model_config.max_vocab) : json(nullptr)},
                {"trace_layer", std::string(to_string(model_config.layer))}};
  j["perturb"] = {{"typo_counts", perturb.typo_counts},
                  {"use_contractions", perturb.use_contractions},
                  {"max_attempts", perturb.max_attempts_per_item}};
  j["dsa"] = {{"variants", variants},
              {"k", dsa.k},
              {"other_class", std::string(to_string(dsa.other_class))},
              {"label_source", std::string(to_string(dsa.label_source))}};
  j["seed"] = seed;
  j["histogram_bin_width"] = histogram_bin_width;
  return j.dump();
}

RunConfig parse_config(std::string_view json_text, const fs::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  check_keys(root,
             {"train", "test", "output_dir", "model_file", "labels", "label_map", "classifier", "model",
              "perturb", "dsa", "seed", "jobs", "histogram_bin_width"},
             "config");
  RunConfig c;
  auto path_of = [&](const char* key) -> std::optional<fs::path> {
    std::string p;
    read_opt(root, key, p, "config");
    if (p.empty()) return std::nullopt;
    return resolve(base_dir, p);
  };
  if (auto p = path_of("train")) c.train = *p;
  if (auto p = path_of("test")) c.test = *p;
  if (auto p = path_of("output_dir")) c.output_dir = *p;
  c.model = path_of("model_file");
  read_opt(root, "labels", c.labels, "config");
  read_opt(root, "seed", c.seed, "config");
  read_opt(root, "jobs", c.jobs, "config");
  read_opt(root, "histogram_bin_width", c.histogram_bin_width, "config");

  try {
    const LabelSet labels(c.labels);
    if (auto it = root.find("label_map"); it != root.end()) {
      if (!it->is_array()) throw ConfigError("config.label_map: expected an array");
      for (const auto& r : *it) {
        check_keys(r, {"min", "max", "label"}, "config.label_map[]");
        RatingRule rule;
        read_opt(r, "min", rule.min, "config.label_map[]");
        read_opt(r, "max", rule.max, "config.label_map[]");
        std::string name;
        read_opt(r, "label", name, "config.label_map[]");
        rule.label = labels.require(name);
        c.rating_rules.push_back(rule);
      }
    }
  } catch (const UnknownClassError& e) {
    throw ConfigError(std::string("config.label_map: ") + e.what());
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("config.labels: ") + e.what());
  }

  if (auto it = root.find("classifier"); it != root.end()) {
    check_keys(*it, {"kind", "endpoint", "timeout_ms", "retries"}, "config.classifier");
    std::string kind = "builtin";
    read_opt(*it, "kind", kind, "config.classifier");
    if (kind == "builtin") {
      c.classifier.kind = ClassifierConfig::Kind::builtin;
    } else if (kind == "remote") {
      c.classifier.kind = ClassifierConfig::Kind::remote;
    } else {
      throw ConfigError("config.classifier.kind: expected 'builtin' or 'remote'");
    }
    read_opt(*it, "endpoint", c.classifier.endpoint, "config.classifier");
    long long timeout_ms = c.classifier.timeout.count();
    read_opt(*it, "timeout_ms", timeout_ms, "config.classifier");
    c.classifier.timeout = std::chrono::milliseconds(timeout_ms);
    read_opt(*it, "retries", c.classifier.retries, "config.classifier");
  }

  if (auto it = root.find("model"); it != root.end()) {
    const std::string w = "config.model";
    check_keys(*it,
               {"hidden_dim", "epochs", "learning_rate", "batch_size", "min_count", "max_vocab",
                "trace_layer"},
               w);
    Hyperparams& hp = c.model_config.hp;
    read_opt(*it, "hidden_dim", hp.hidden_dim, w);
    read_opt(*it, "epochs", hp.epochs, w);
    read_opt(*it, "learning_rate", hp.learning_rate, w);
    read_opt(*it, "batch_size", hp.batch_size, w);
    read_opt(*it, "min_count", c.model_config.min_count, w);
    std::size_t max_vocab = 0;
    read_opt(*it, "max_vocab", max_vocab, w);
    if (max_vocab) c.model_config.max_vocab = max_vocab;
    std::string layer = "hidden";
    read_opt(*it, "trace_layer", layer, w);
    try {
      c.model_config.layer = trace_layer_from_string(layer);
    } catch (const Error& e) {
      throw ConfigError(w + ".trace_layer: " + e.what());
    }
  }

  if (auto it = root.find("perturb"); it != root.end()) {
    check_keys(*it, {"typo_counts", "use_contractions", "max_attempts"}, "config.perturb");
    read_opt(*it, "typo_counts", c.perturb.typo_counts, "config.perturb");
    read_opt(*it, "use_contractions", c.perturb.use_contractions, "config.perturb");
    read_opt(*it, "max_attempts", c.perturb.max_attempts_per_item, "config.perturb");
  }

  if (auto it = root.find("dsa"); it != root.end()) {
    check_keys(*it, {"variants", "k", "other_class", "label_source"}, "config.dsa");
    std::vector<std::string> names;
    read_opt(*it, "variants", names, "config.dsa");
    if (it->contains("variants")) {
      c.dsa.variants.clear();
      for (const auto& n : names) {
        try {
          c.dsa.variants.push_back(dsa_variant_from_string(n));
        } catch (const Error& e) {
          throw ConfigError(std::string("config.dsa.variants: ") + e.what());
        }
      }
    }
    read_opt(*it, "k", c.dsa.k, "config.dsa");
    std::string mode = "pooled";
    read_opt(*it, "other_class", mode, "config.dsa");
    c.dsa.other_class = other_class_from_string(mode);
    std::string source = "predicted";
    read_opt(*it, "label_source", source, "config.dsa");
    c.dsa.label_source = label_source_from_string(source);
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file not found: " + path.string());
  return parse_config(read_file(path), path.parent_path());
}

CommandResult cmd_train(const RunConfig& config) {
  config.validate();
  if (config.classifier.kind != ClassifierConfig::Kind::builtin) {
    throw ConfigError("train requires the builtin classifier");
  }
  require_file(config.train, "train");
  if (!config.test.empty()) require_file(config.test, "test");

  Outputs outputs(config, "train");
  const fs::path model_path = config.model ? *config.model : outputs.add(artifacts::kModel);
  const fs::path report_path = outputs.add(artifacts::kTrainReport);
  outputs.claim();
  if (config.model && !config.force && fs::exists(model_path)) {
    throw ConfigError("refusing to overwrite " + model_path.string() + " (use --force)");
  }

  const Dataset train_set = load_split(config, config.train, Split::train);
  Hyperparams hp = config.model_config.hp;
  hp.seed = config.seed;
  BowModel fitted = BowModel::fit(train_set, hp, config.model_config.min_count,
                                  config.model_config.max_vocab.value_or(
                                      std::numeric_limits<std::size_t>::max()));
  BowModel model(fitted.vocab(), fitted.params(), fitted.labels(), config.model_config.layer);
  save_model(model_path, model);

  json report;
  report["train_items"] = train_set.items.size();
  report["train_accuracy"] = model.accuracy(train_set);
  report["vocab_size"] = model.vocab().size();
  report["hidden_dim"] = model.params().hidden_dim();
  report["epoch_loss"] = model.params().meta.epoch_loss;
  std::vector<fs::path> inputs{config.train};
  if (!config.test.empty()) {
    const Dataset test_set = load_split(config, config.test, Split::test);
    report["test_items"] = test_set.items.size();
    report["test_accuracy"] = model.accuracy(test_set);
    inputs.push_back(config.test);
  }
  write_file(report_path, report.dump(2) + "\n");
  log_info("train: accuracy " + format_double(report["train_accuracy"].get<double>()) + " on " +
           std::to_string(train_set.items.size()) + " items");
  CommandResult result = outputs.finish(inputs, {});
  if (config.model) result.outputs.insert(result.outputs.begin(), model_path);
  return result;
}

CommandResult cmd_attack(const RunConfig& config) {
  config.validate();
  require_file(config.test, "test");
  Backend backend = make_backend(config);

  Outputs outputs(config, "attack");
  const fs::path records_path = outputs.add(artifacts::kRecords);
  const fs::path report_path = outputs.add(artifacts::kAttackReport);
  const fs::path asr_path = outputs.add(artifacts::kAsrCsv);
  outputs.claim();

  const Dataset test_set = load_split(config, config.test, Split::test);
  PerturbationSpec spec = config.perturb;
  spec.seed = config.seed;

  std::vector<PerturbationRecord> records;
  std::ofstream out(records_path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + records_path.string());
  AttackSummary summary;
  try {
    summary = generate_adversarial_set(
        test_set, *backend.classifier, spec,
        [&](const PerturbationRecord& r) {
          out << record_to_json(r) << '\n';
          out.flush();
          records.push_back(r);
        },
        config.jobs);
  } catch (const ClassifierError& e) {
    try {
      std::rethrow_if_nested(e);
    } catch (const RemoteModelError& remote) {
      throw RemoteModelError("item '" + e.item_id() + "': " + remote.what(), remote.raw_response());
    } catch (...) {
    }
    throw;
  }
  out.close();

  const auto asr = attack_success_rate(records);
  json report;
  report["items"] = summary.items;
  report["attacked_items"] = summary.attacked;
  report["misclassified_items"] = summary.misclassified;
  report["skipped"] = summary.skipped;
  report["records"] = summary.records;
  report["flipped"] = summary.flipped;
  report["asr"] = asr_json(asr, summary.items);
  if (spec.use_contractions) {
    const AsrEntry c = contraction_success_rate(records);
    report["contraction_asr"] = {{"attacked", c.attacked}, {"flipped", c.flipped}, {"rate", c.rate}};
  }
  report["length_stats"] = length_section(records, config.histogram_bin_width);
  write_file(report_path, report.dump(2) + "\n");

  std::ostringstream table;
  csv::write_row(table, {"typo_count", "attacked", "flipped", "asr", "asr_over_test_items"});
  for (const auto& [k, e] : asr) {
    csv::write_row(table, {std::to_string(k), std::to_string(e.attacked), std::to_string(e.flipped),
                           format_double(e.rate),
                           format_double(static_cast<double>(e.flipped) /
                                         static_cast<double>(summary.items))});
  }
  write_file(asr_path, table.str());

  std::vector<std::string> warnings;
  if (summary.flipped == 0) warnings.push_back("attack produced no flipped records");
  std::vector<fs::path> inputs{config.test};
  inputs.insert(inputs.end(), backend.inputs.begin(), backend.inputs.end());
  return outputs.finish(inputs, std::move(warnings));
}

CommandResult cmd_score(const RunConfig& config) {
  config.validate();
  require_file(config.train, "train");
  require_file(config.test, "test");
  const fs::path records_path = config.output_dir / artifacts::kRecords;
  require_file(records_path, "records", "run 'sadet attack' first");
  Backend backend = make_backend(config);

  Outputs outputs(config, "score");
  const fs::path train_traces_path = outputs.add(artifacts::kTrainTraces);
  const fs::path eval_traces_path = outputs.add(artifacts::kEvalTraces);
  std::vector<fs::path> score_paths;
  for (DsaVariant v : config.dsa.variants) score_paths.push_back(outputs.add(artifacts::scores(v)));
  outputs.claim();

  const Dataset train_set = load_split(config, config.train, Split::train);
  const Dataset test_set = load_split(config, config.test, Split::test);
  const std::vector<PerturbationRecord> records = load_records(records_path, test_set.labels);

  std::vector<std::string> warnings;
  std::vector<TraceInput> train_inputs;
  for (const auto& item : train_set.items) train_inputs.push_back({item.id, item.text, item.label});
  std::vector<TraceInput> eval_inputs;
  for (const auto& item : test_set.items) eval_inputs.push_back({item.id, item.text, item.label});
  std::size_t flipped = 0;
  for (const auto& r : records) {
    if (!r.flipped) continue;
    eval_inputs.push_back({r.id, r.perturbed_text, r.original.label});
    ++flipped;
  }
  if (flipped == 0) {
    warnings.push_back("no flipped records: score files contain clean test items only");
    log_warning(warnings.back());
  }

  const std::string layer =
      backend.builtin ? std::string(to_string(backend.builtin->layer())) : backend.classifier->trace_layer();
  const RowLabel eval_label =
      config.dsa.label_source == LabelSource::predicted ? RowLabel::predicted : RowLabel::given;
  const TraceTable train_traces =
      collect_traces(backend, train_inputs, layer, RowLabel::predicted, config.jobs);
  const TraceTable eval_traces = collect_traces(backend, eval_inputs, layer, eval_label, config.jobs);
  save_traces(train_traces_path, train_traces);
  save_traces(eval_traces_path, eval_traces);

  std::vector<LabeledTrace> reference;
  reference.reserve(train_traces.rows.size());
  for (std::size_t i = 0; i < train_traces.rows.size(); ++i) {
    reference.push_back({{train_traces.rows[i].values, layer, train_traces.rows[i].input_id},
                         test_set.labels.at(train_traces.rows[i].label_id)});
  }
  const ReferenceStore store = ReferenceStore::build(reference);
  if (eval_traces.dim != store.dim() && !eval_traces.rows.empty()) {
    throw DimensionError("evaluation traces have length " + std::to_string(eval_traces.dim) +
                         ", training traces " + std::to_string(store.dim()));
  }

  std::vector<ActivationTrace> traces;
  std::vector<ClassLabel> labels;
  for (std::size_t i = 0; i < eval_traces.rows.size(); ++i) {
    traces.push_back({eval_traces.rows[i].values, layer, eval_traces.rows[i].input_id});
    labels.push_back(test_set.labels.at(eval_traces.rows[i].label_id));
  }
  for (std::size_t v = 0; v < config.dsa.variants.size(); ++v) {
    const DsaConfig dsa{config.dsa.variants[v], config.dsa.k, config.dsa.other_class};
    std::vector<DsaScore> scores;
    try {
      scores = score_batch(traces, labels, store, dsa, config.jobs);
    } catch (const BatchError& e) {
      throw Error("input '" + traces[e.index()].input_id + "': " + e.what());
    }
    save_scores(score_paths[v], scores);
  }

  std::vector<fs::path> inputs{config.train, config.test, records_path};
  inputs.insert(inputs.end(), backend.inputs.begin(), backend.inputs.end());
  return outputs.finish(inputs, std::move(warnings));
}

CommandResult cmd_report(const RunConfig& config) {
  config.validate();
  require_file(config.test, "test");
  const fs::path records_path = config.output_dir / artifacts::kRecords;
  require_file(records_path, "records", "run 'sadet attack' first");
  std::vector<fs::path> score_paths;
  for (DsaVariant v : config.dsa.variants) {
    score_paths.push_back(config.output_dir / artifacts::scores(v));
    require_file(score_paths.back(), "score", "run 'sadet score' first");
  }

  Outputs outputs(config, "report");
  const fs::path report_path = outputs.add(artifacts::kReport);
  const fs::path auc_path = outputs.add(artifacts::kAucCsv);
  const fs::path length_path = outputs.add(artifacts::kLengthCsv);
  std::vector<fs::path> roc_paths;
  for (DsaVariant v : config.dsa.variants) roc_paths.push_back(outputs.add(artifacts::roc(v)));
  outputs.claim();

  const Dataset test_set = load_split(config, config.test, Split::test);
  const std::vector<PerturbationRecord> records = load_records(records_path, test_set.labels);

  std::set<std::string> expected;
  for (const auto& item : test_set.items) expected.insert(item.id);
  // Anomalous subsets: "1".."n" per typo count, "contraction", "combined" (all typo counts).
  std::map<std::string, std::vector<std::string>> subsets;
  for (const auto& r : records) {
    if (!r.flipped) continue;
    if (!expected.insert(r.id).second) throw ReconciliationError("record id '" + r.id + "' is not unique");
    if (r.is_contraction()) {
      subsets["contraction"].push_back(r.id);
    } else {
      subsets[std::to_string(r.typo_count)].push_back(r.id);
      subsets["combined"].push_back(r.id);
    }
  }
  std::set<std::size_t> typo_counts;
  for (const auto& r : records) {
    if (!r.is_contraction()) typo_counts.insert(r.typo_count);
  }

  std::vector<std::string> warnings;
  json auc_all = json::object();
  json roc_all = json::object();
  std::ostringstream auc_table;
  csv::write_row(auc_table, {"variant", "subset", "anomalous", "clean", "auc"});

  for (std::size_t v = 0; v < config.dsa.variants.size(); ++v) {
    const std::string name(to_string(config.dsa.variants[v]));
    const auto by_id = reconcile(load_scores(score_paths[v]), expected, score_paths[v].filename().string());

    std::vector<ScoredExample> clean;
    for (const auto& item : test_set.items) clean.push_back({item.id, by_id.at(item.id), false});

    auto evaluate = [&](const std::vector<std::string>& ids) -> std::optional<std::vector<ScoredExample>> {
      if (ids.empty()) return std::nullopt;
      std::vector<ScoredExample> ex = clean;
      for (const auto& id : ids) ex.push_back({id, by_id.at(id), true});
      return ex;
    };
    auto auc_of = [&](const std::string& subset_name, const std::vector<std::string>& ids) -> json {
      const auto ex = evaluate(ids);
      std::string value = "";
      json out = nullptr;
      if (ex) {
        const double a = auc(*ex);
        out = a;
        value = format_double(a);
      }
      csv::write_row(auc_table, {name, subset_name, std::to_string(ids.size()),
                                 std::to_string(clean.size()), value});
      return out;
    };

    json entry;
    entry["per_k"] = json::object();
    for (std::size_t k : typo_counts) {
      const std::string key = std::to_string(k);
      const auto it = subsets.find(key);
      entry["per_k"][key] = auc_of(key, it == subsets.end() ? std::vector<std::string>{} : it->second);
    }
    entry["combined"] = auc_of("combined", subsets["combined"]);
    if (config.perturb.use_contractions) entry["contraction"] = auc_of("contraction", subsets["contraction"]);
    auc_all[name] = std::move(entry);

    std::ostringstream roc_table;
    csv::write_row(roc_table, {"threshold", "fpr", "tpr"});
    json points = json::array();
    if (const auto ex = evaluate(subsets["combined"])) {
      for (const RocPoint& p : roc_curve(*ex)) {
        points.push_back({p.fpr, p.tpr});
        csv::write_row(roc_table, {format_double(p.threshold), format_double(p.fpr), format_double(p.tpr)});
      }
    }
    roc_all[name] = std::move(points);
    write_file(roc_paths[v], roc_table.str());
  }
  if (subsets["combined"].empty()) {
    warnings.push_back("no flipped typo records: AUC is undefined");
    log_warning(warnings.back());
  }

  std::size_t attacked_items = 0;
  {
    std::set<std::string> items;
    for (const auto& r : records) items.insert(r.original.id);
    attacked_items = items.size();
  }
  json report;
  report["counts"] = {{"test_items", test_set.items.size()},
                      {"attacked_items", attacked_items},
                      {"records", records.size()},
                      {"flipped_typo_records", subsets["combined"].size()}};
  report["asr"] = asr_json(attack_success_rate(records), test_set.items.size());
  if (config.perturb.use_contractions) {
    const AsrEntry c = contraction_success_rate(records);
    report["contraction_asr"] = {{"attacked", c.attacked}, {"flipped", c.flipped}, {"rate", c.rate}};
  }
  report["auc"] = std::move(auc_all);
  report["roc"] = std::move(roc_all);
  report["length_stats"] = length_section(records, config.histogram_bin_width);
  write_file(report_path, report.dump(2) + "\n");
  write_file(auc_path, auc_table.str());
  write_file(length_path, length_csv(records, config.histogram_bin_width));

  std::vector<fs::path> inputs{config.test, records_path};
  inputs.insert(inputs.end(), score_paths.begin(), score_paths.end());
  return outputs.finish(inputs, std::move(warnings));
}

CommandResult cmd_run(const RunConfig& config) {
  CommandResult all;
  auto merge = [&](CommandResult r) {
    all.outputs.insert(all.outputs.end(), r.outputs.begin(), r.outputs.end());
    all.warnings.insert(all.warnings.end(), r.warnings.begin(), r.warnings.end());
  };
  if (config.classifier.kind == ClassifierConfig::Kind::builtin) merge(cmd_train(config));
  merge(cmd_attack(config));
  merge(cmd_score(config));
  merge(cmd_report(config));
  return all;
}

int exit_code_for(const std::exception& error) noexcept {
  return dynamic_cast<const ConfigError*>(&error) ? 2 : 3;
}

}  // namespace sadet
