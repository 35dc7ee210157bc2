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

#include <atomic>
#include <sstream>
#include <stdexcept>

#include "sadet/attack.hpp"
#include "sadet/bow_model.hpp"
#include "sadet/error.hpp"
#include "sadet/synth.hpp"

namespace {

class Fixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    train_ = new sadet::Dataset(sadet::generate_review_corpus(400, 2));
    test_ = new sadet::Dataset(sadet::generate_review_corpus(80, 2, sadet::Split::test));
    sadet::Hyperparams hp;
    hp.hidden_dim = 16;
    hp.epochs = 8;
    model_ = new sadet::BowModel(sadet::BowModel::fit(*train_, hp));
  }
  static void TearDownTestSuite() {
    delete model_;
    delete test_;
    delete train_;
  }
  static inline sadet::Dataset* train_ = nullptr;
  static inline sadet::Dataset* test_ = nullptr;
  static inline sadet::BowModel* model_ = nullptr;
};

TEST_F(Fixture, RecordsOnlyForCorrectItemsInDatasetOrder) {
  sadet::PerturbationSpec spec;
  spec.typo_counts = {1, 3};
  spec.use_contractions = true;
  std::vector<sadet::PerturbationRecord> records;
  const auto summary =
      sadet::generate_adversarial_set(*test_, *model_, spec, [&](const auto& r) { records.push_back(r); });
  EXPECT_EQ(summary.items, test_->items.size());
  EXPECT_EQ(summary.attacked + summary.misclassified, summary.items);
  EXPECT_EQ(summary.records, records.size());
  std::size_t flipped = 0;
  std::size_t last_item = 0;
  for (const auto& r : records) {
    const auto pred = model_->predict(r.original.id, r.original.text);
    EXPECT_EQ(pred.label, r.original.label);
    EXPECT_EQ(r.original_pred, r.original.label);
    EXPECT_EQ(sadet::apply_edits(r.original.text, r.edits), r.perturbed_text);
    EXPECT_EQ(r.perturbed_pred, model_->predict(r.id, r.perturbed_text).label);
    EXPECT_EQ(r.flipped, r.perturbed_pred != r.original_pred);
    if (r.is_contraction()) {
      EXPECT_EQ(r.id, sadet::contraction_record_id(r.original.id));
      EXPECT_EQ(r.typo_count, 0u);
    } else {
      EXPECT_EQ(r.id, sadet::typo_record_id(r.original.id, r.typo_count));
      EXPECT_EQ(r.edits.size(), r.typo_count);
    }
    std::size_t pos = 0;
    while (test_->items[pos].id != r.original.id) ++pos;
    EXPECT_GE(pos, last_item);
    last_item = pos;
    flipped += r.flipped;
  }
  EXPECT_EQ(summary.flipped, flipped);
}

TEST_F(Fixture, OutputIndependentOfJobsAndSubset) {
  sadet::PerturbationSpec spec;
  spec.seed = 17;
  const auto one = sadet::generate_adversarial_set(*test_, *model_, spec, 1);
  const auto four = sadet::generate_adversarial_set(*test_, *model_, spec, 4);
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(sadet::record_to_json(one[i]), sadet::record_to_json(four[i]));

  sadet::Dataset head = *test_;
  head.items.resize(10);
  sadet::PerturbationSpec only3 = spec;
  only3.typo_counts = {3};
  for (const auto& r : sadet::generate_adversarial_set(head, *model_, only3)) {
    bool found = false;
    for (const auto& full : one) {
      if (full.id == r.id) {
        EXPECT_EQ(full.perturbed_text, r.perturbed_text);
        found = true;
      }
    }
    EXPECT_TRUE(found) << r.id;
  }
}

TEST_F(Fixture, RecordJsonRoundTrip) {
  sadet::PerturbationSpec spec;
  spec.use_contractions = true;
  const auto records = sadet::generate_adversarial_set(*test_, *model_, spec);
  std::stringstream ss;
  sadet::write_records(ss, records);
  const auto back = sadet::read_records(ss, test_->labels);
  ASSERT_EQ(back.size(), records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(sadet::record_to_json(back[i]), sadet::record_to_json(records[i]));
    EXPECT_EQ(back[i].edits, records[i].edits);
  }
  EXPECT_THROW(sadet::record_from_json("{}", test_->labels), sadet::Error);
}

class Failing final : public sadet::TextClassifier {
 public:
  explicit Failing(const sadet::TextClassifier& inner) : inner_(inner) {}
  sadet::Prediction predict(std::string_view id, std::string_view text) const override {
    if (id.find("000005") != std::string_view::npos) throw std::runtime_error("boom");
    return inner_.predict(id, text);
  }
  const sadet::LabelSet& labels() const override { return inner_.labels(); }
  std::string trace_layer() const override { return "hidden"; }

 private:
  const sadet::TextClassifier& inner_;
};

TEST_F(Fixture, ClassifierFailureAfterEarlierRecords) {
  const Failing failing(*model_);
  std::vector<std::string> seen;
  try {
    sadet::generate_adversarial_set(*test_, failing, {}, [&](const auto& r) { seen.push_back(r.original.id); }, 3);
    FAIL();
  } catch (const sadet::ClassifierError& e) {
    EXPECT_NE(e.item_id().find("000005"), std::string::npos);
  }
  for (const auto& id : seen) EXPECT_LT(id, "test-000005");
}

TEST(PerturbationSpec, Validate) {
  sadet::PerturbationSpec spec;
  EXPECT_NO_THROW(spec.validate());
  spec.typo_counts.clear();
  EXPECT_THROW(spec.validate(), sadet::ConfigError);
  spec.typo_counts = {1};
  spec.max_attempts_per_item = 0;
  EXPECT_THROW(spec.validate(), sadet::ConfigError);
}

}  // namespace
