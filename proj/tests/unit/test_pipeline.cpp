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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sadet/error.hpp"
#include "sadet/pipeline.hpp"
#include "sadet/synth.hpp"

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_corpus(const fs::path& p, std::size_t n, std::uint64_t seed, sadet::Split split) {
  std::ofstream out(p, std::ios::binary);
  sadet::write_dataset(out, sadet::generate_review_corpus(n, seed, split), sadet::format_from_path(p));
}

class Pipeline : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sadet_pipeline_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write_corpus(dir_ / "train.csv", 400, 5, sadet::Split::train);
    write_corpus(dir_ / "test.jsonl", 80, 5, sadet::Split::test);
  }
  void TearDown() override { fs::remove_all(dir_); }

  sadet::RunConfig config(const std::string& out = "out") const {
    sadet::RunConfig c;
    c.train = dir_ / "train.csv";
    c.test = dir_ / "test.jsonl";
    c.output_dir = dir_ / out;
    c.model_config.hp.hidden_dim = 16;
    c.model_config.hp.epochs = 6;
    c.perturb.typo_counts = {1, 2, 3};
    c.perturb.use_contractions = true;
    c.seed = 9;
    return c;
  }

  fs::path dir_;
};

TEST_F(Pipeline, RunWritesEveryArtifact) {
  const auto result = sadet::cmd_run(config());
  const fs::path out = dir_ / "out";
  namespace a = sadet::artifacts;
  for (const char* name : {a::kModel, a::kTrainReport, a::kRecords, a::kAttackReport, a::kAsrCsv,
                           a::kTrainTraces, a::kEvalTraces, a::kReport, a::kAucCsv, a::kLengthCsv}) {
    EXPECT_TRUE(fs::is_regular_file(out / name)) << name;
  }
  for (auto v : {sadet::DsaVariant::dsa0, sadet::DsaVariant::dsa3}) {
    EXPECT_TRUE(fs::is_regular_file(out / a::scores(v)));
    EXPECT_TRUE(fs::is_regular_file(out / a::roc(v)));
  }
  for (const char* cmd : {"train", "attack", "score", "report"}) {
    const auto m = nlohmann::json::parse(slurp(out / a::manifest(cmd)));
    EXPECT_EQ(m["format"], "sadet-manifest");
    EXPECT_EQ(m["command"], cmd);
    EXPECT_EQ(m["seed"], 9);
    EXPECT_FALSE(m["outputs"].empty());
  }
  const auto report = nlohmann::json::parse(slurp(out / a::kReport));
  EXPECT_TRUE(report["auc"].contains("DSA3"));
  EXPECT_TRUE(report["auc"]["DSA3"].contains("contraction"));
  EXPECT_EQ(report["counts"]["test_items"], 80);
}

TEST_F(Pipeline, RefusesToOverwriteWithoutForce) {
  auto c = config();
  sadet::cmd_run(c);
  EXPECT_THROW(sadet::cmd_attack(c), sadet::ConfigError);
  EXPECT_THROW(sadet::cmd_report(c), sadet::ConfigError);
  c.force = true;
  EXPECT_NO_THROW(sadet::cmd_report(c));
}

TEST_F(Pipeline, DeterministicAcrossRunsAndJobs) {
  auto c1 = config("a");
  auto c2 = config("b");
  c2.jobs = 4;
  sadet::cmd_run(c1);
  sadet::cmd_run(c2);
  for (const auto& entry : fs::directory_iterator(dir_ / "a")) {
    const auto name = entry.path().filename();
    if (name.string().rfind("manifest_", 0) == 0) continue;
    EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "b" / name)) << name;
  }
  for (const char* cmd : {"train", "attack", "score", "report"}) {
    const auto m1 = nlohmann::json::parse(slurp(dir_ / "a" / sadet::artifacts::manifest(cmd)));
    const auto m2 = nlohmann::json::parse(slurp(dir_ / "b" / sadet::artifacts::manifest(cmd)));
    EXPECT_EQ(m1["config_hash"], m2["config_hash"]);
    EXPECT_EQ(m1["outputs"], m2["outputs"]);
  }
}

TEST_F(Pipeline, MissingTrainFileIsConfigError) {
  auto c = config();
  c.train = dir_ / "nope.csv";
  try {
    sadet::cmd_run(c);
    FAIL();
  } catch (const sadet::ConfigError& e) {
    EXPECT_EQ(sadet::exit_code_for(e), 2);
    EXPECT_NE(std::string(e.what()).find("nope.csv"), std::string::npos);
  }
  EXPECT_EQ(sadet::exit_code_for(sadet::DataError("x")), 3);
}

TEST_F(Pipeline, ScoreWithoutRecordsIsConfigError) {
  auto c = config();
  sadet::cmd_train(c);
  EXPECT_THROW(sadet::cmd_score(c), sadet::ConfigError);
}

TEST_F(Pipeline, ReportDetectsScoreFileMismatch) {
  auto c = config();
  sadet::cmd_run(c);
  const fs::path scores = dir_ / "out" / sadet::artifacts::scores(sadet::DsaVariant::dsa1);
  std::string body = slurp(scores);
  body.erase(body.find('\n') + 1, body.find('\n', body.find('\n') + 1) - body.find('\n'));
  std::ofstream(scores, std::ios::binary | std::ios::trunc) << body;
  c.force = true;
  try {
    sadet::cmd_report(c);
    FAIL();
  } catch (const sadet::ReconciliationError& e) {
    EXPECT_NE(std::string(e.what()).find("missing ids"), std::string::npos);
  }
}

TEST_F(Pipeline, EmptyFlippedSetWarns) {
  auto c = config();
  sadet::cmd_run(c);
  const fs::path records_path = dir_ / "out" / sadet::artifacts::kRecords;
  std::vector<sadet::PerturbationRecord> records;
  {
    std::ifstream in(records_path);
    records = sadet::read_records(in, sadet::LabelSet::binary());
  }
  for (auto& r : records) {
    r.flipped = false;
    r.perturbed_pred = r.original_pred;
  }
  {
    std::ofstream out(records_path, std::ios::binary | std::ios::trunc);
    sadet::write_records(out, records);
  }
  c.force = true;
  EXPECT_FALSE(sadet::cmd_score(c).warnings.empty());
  const auto result = sadet::cmd_report(c);
  ASSERT_FALSE(result.warnings.empty());
  const auto report = nlohmann::json::parse(slurp(dir_ / "out" / sadet::artifacts::kReport));
  EXPECT_TRUE(report["auc"]["DSA3"]["combined"].is_null());
}

TEST_F(Pipeline, ParseConfig) {
  const auto c = sadet::parse_config(R"({
    "train": "data/train.csv", "test": "/abs/test.csv", "seed": 3,
    "model": {"hidden_dim": 8, "trace_layer": "logits"},
    "perturb": {"typo_counts": [2, 4], "use_contractions": true},
    "dsa": {"variants": ["DSA1", "DSA3"], "k": 5, "other_class": "per_class_min", "label_source": "annotated"},
    "label_map": [{"min": 1, "max": 3, "label": "negative"}, {"min": 4, "max": 5, "label": "positive"}]
  })", "/base");
  EXPECT_EQ(c.train, fs::path("/base/data/train.csv"));
  EXPECT_EQ(c.test, fs::path("/abs/test.csv"));
  EXPECT_EQ(c.seed, 3u);
  EXPECT_EQ(c.model_config.hp.hidden_dim, 8u);
  EXPECT_EQ(c.model_config.layer, sadet::TraceLayer::logits);
  EXPECT_EQ(c.perturb.typo_counts, (std::vector<std::size_t>{2, 4}));
  EXPECT_EQ(c.dsa.variants.size(), 2u);
  EXPECT_EQ(c.dsa.k, 5u);
  EXPECT_EQ(c.dsa.other_class, sadet::OtherClassMode::per_class_min);
  EXPECT_EQ(c.dsa.label_source, sadet::LabelSource::annotated);
  EXPECT_EQ(sadet::map_rating_to_label(3, c.label_map()).name, "negative");
  EXPECT_EQ(c.model_path(), fs::path("sadet-out/model.json"));
  EXPECT_EQ(sadet::parse_config(R"({"output_dir": "o"})", "/base").model_path(), fs::path("/base/o/model.json"));

  EXPECT_THROW(sadet::parse_config(R"({"trian": "x"})"), sadet::ConfigError);
  EXPECT_THROW(sadet::parse_config(R"({"dsa": {"k": "ten"}})"), sadet::ConfigError);
  // Semantic checks run when a command starts, after flag overrides.
  EXPECT_THROW(sadet::parse_config(R"({"dsa": {"variants": ["DSA1", "DSA1"]}})").validate(), sadet::ConfigError);
  EXPECT_THROW(sadet::parse_config(R"({"classifier": {"kind": "remote"}})").validate(), sadet::ConfigError);
  EXPECT_THROW(sadet::parse_config("not json"), sadet::ConfigError);
  EXPECT_THROW(sadet::load_config("/nonexistent/config.json"), sadet::ConfigError);
}

TEST_F(Pipeline, CanonicalJsonIgnoresExecutionKnobs) {
  auto a = config();
  auto b = config();
  b.jobs = 8;
  b.force = true;
  EXPECT_EQ(a.canonical_json(), b.canonical_json());
  b.seed = 10;
  EXPECT_NE(a.canonical_json(), b.canonical_json());
}

}  // namespace
