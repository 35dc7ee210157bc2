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

#include <cmath>
#include <vector>

#include "sadet/bow_model.hpp"
#include "sadet/error.hpp"
#include "sadet/hash.hpp"

namespace {

using sadet::Example;
using sadet::ModelParams;
using sadet::SparseVector;

ModelParams micro_model(std::size_t in, std::size_t hidden, std::size_t classes, std::uint64_t seed) {
  auto p = sadet::init_params(in, hidden, classes, seed);
  sadet::Rng rng(seed + 1);
  for (double& b : p.b1) b = rng.uniform(-0.5, 0.5);
  for (double& b : p.b2) b = rng.uniform(-0.5, 0.5);
  return p;
}

std::vector<Example> micro_batch(std::size_t in, std::size_t classes, std::uint64_t seed) {
  sadet::Rng rng(seed);
  std::vector<Example> batch;
  for (int i = 0; i < 6; ++i) {
    Example e;
    e.x.dim = in;
    for (std::uint32_t j = 0; j < in; ++j) {
      if (rng.uniform01() < 0.6) e.x.entries.push_back({j, 1.0 + static_cast<double>(rng.uniform_index(3))});
    }
    e.label = static_cast<std::uint32_t>(rng.uniform_index(classes));
    batch.push_back(e);
  }
  return batch;
}

double rel_error(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-8});
  return std::abs(a - b) / scale;
}

TEST(Classifier, GradientsMatchCentralDifferences) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const std::size_t in = 5, hidden = 4, classes = 2 + seed % 2;
    auto p = micro_model(in, hidden, classes, seed);
    const auto batch = micro_batch(in, classes, seed * 10);
    sadet::Gradients g;
    sadet::loss_and_gradients(p, batch, &g);
    const double h = 1e-6;
    auto check = [&](std::vector<double>& params, const std::vector<double>& grad) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        const double saved = params[i];
        params[i] = saved + h;
        const double up = sadet::loss_and_gradients(p, batch, nullptr);
        params[i] = saved - h;
        const double down = sadet::loss_and_gradients(p, batch, nullptr);
        params[i] = saved;
        const double numeric = (up - down) / (2 * h);
        if (std::abs(numeric) < 1e-9 && std::abs(grad[i]) < 1e-9) continue;
        EXPECT_LT(rel_error(numeric, grad[i]), 1e-4) << "param " << i;
      }
    };
    check(p.w1.data, g.w1.data);
    check(p.b1, g.b1);
    check(p.w2.data, g.w2.data);
    check(p.b2, g.b2);
  }
}

TEST(Classifier, SoftmaxSumsToOneAndIsShiftInvariant) {
  sadet::Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    std::vector<double> z(2 + rng.uniform_index(5));
    for (double& v : z) v = rng.uniform(-50, 50);
    const auto p = sadet::softmax(z);
    double sum = 0.0;
    for (double v : p) sum += v;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    auto shifted = z;
    const double c = rng.uniform(-1000, 1000);
    for (double& v : shifted) v += c;
    const auto q = sadet::softmax(shifted);
    for (std::size_t j = 0; j < p.size(); ++j) EXPECT_NEAR(p[j], q[j], 1e-9);
  }
  const auto big = sadet::softmax(std::vector<double>{1000.0, 0.0});
  EXPECT_EQ(big[0], 1.0);
  EXPECT_TRUE(std::isfinite(big[1]));
}

TEST(Classifier, ArgmaxTiesGoLow) {
  EXPECT_EQ(sadet::argmax(std::vector<double>{0.5, 0.5}), 0u);
  EXPECT_EQ(sadet::argmax(std::vector<double>{0.1, 0.7, 0.7}), 1u);
}

TEST(Classifier, Tokenize) {
  EXPECT_EQ(sadet::tokenize("Great, GREAT value!! 10/10"),
            (std::vector<std::string>{"great", "great", "value", "10", "10"}));
  EXPECT_TRUE(sadet::tokenize("...").empty());
}

sadet::Dataset toy_corpus() {
  sadet::Dataset d{{}, sadet::LabelSet::binary(), sadet::Split::train};
  const char* pos[] = {"great value", "love it", "great screen", "works great", "love the fit", "excellent"};
  const char* neg[] = {"awful value", "hate it", "broken screen", "stopped working", "hate the fit", "terrible"};
  int id = 0;
  for (int r = 0; r < 4; ++r) {
    for (const char* t : pos) d.items.push_back({"i" + std::to_string(id++), t, d.labels.at(1), 5, {}});
    for (const char* t : neg) d.items.push_back({"i" + std::to_string(id++), t, d.labels.at(0), 1, {}});
  }
  return d;
}

TEST(Classifier, FitsSeparableToyCorpus) {
  const auto data = toy_corpus();
  sadet::Hyperparams hp;
  hp.hidden_dim = 8;
  hp.epochs = 40;
  hp.seed = 3;
  const auto model = sadet::BowModel::fit(data, hp);
  EXPECT_EQ(model.accuracy(data), 1.0);
  const auto& loss = model.params().meta.epoch_loss;
  ASSERT_EQ(loss.size(), hp.epochs);
  EXPECT_LT(loss.back(), loss.front());
  const auto p = model.predict("x", "great value");
  EXPECT_EQ(p.label.name, "positive");
  ASSERT_TRUE(p.trace);
  EXPECT_EQ(p.trace->size(), hp.hidden_dim);
  for (double v : *p.trace) EXPECT_GE(v, 0.0);
}

TEST(Classifier, TrainingIsDeterministic) {
  const auto data = toy_corpus();
  sadet::Hyperparams hp;
  hp.hidden_dim = 6;
  hp.epochs = 5;
  hp.seed = 11;
  const auto a = sadet::BowModel::fit(data, hp);
  const auto b = sadet::BowModel::fit(data, hp);
  EXPECT_EQ(a.params(), b.params());
  hp.seed = 12;
  EXPECT_FALSE(sadet::BowModel::fit(data, hp).params() == a.params());
}

TEST(Classifier, LogitsTraceMatchesForward) {
  const auto data = toy_corpus();
  sadet::Hyperparams hp;
  hp.hidden_dim = 4;
  hp.epochs = 2;
  const auto m = sadet::BowModel::fit(data, hp);
  const sadet::BowModel logits_model(m.vocab(), m.params(), m.labels(), sadet::TraceLayer::logits);
  const auto fp = sadet::forward(m.params(), sadet::featurize("great value", m.vocab()));
  EXPECT_EQ(logits_model.trace("x", "great value").values, fp.logits);
  EXPECT_EQ(sadet::logits_from_hidden(m.params(), fp.hidden), fp.logits);
  EXPECT_EQ(logits_model.trace_layer(), "logits");
}

TEST(Classifier, Errors) {
  auto data = toy_corpus();
  for (auto& it : data.items) it.label = data.labels.at(1);
  EXPECT_THROW(sadet::BowModel::fit(data, {}), sadet::TrainingError);
  auto p = sadet::init_params(3, 2, 2, 1);
  p.b2.push_back(0.0);
  EXPECT_THROW(p.validate(), sadet::DimensionError);
  EXPECT_THROW(sadet::Vocab({"a", "a"}, 1, 10), sadet::ConfigError);
}

TEST(Classifier, VocabOrderAndFeatures) {
  sadet::Dataset d{{}, sadet::LabelSet::binary(), sadet::Split::train};
  d.items.push_back({"1", "b a a c", d.labels.at(0), {}, {}});
  d.items.push_back({"2", "b a d", d.labels.at(1), {}, {}});
  const auto v = sadet::Vocab::build(d, 1, 3);
  EXPECT_EQ(std::vector<std::string>(v.tokens().begin(), v.tokens().end()),
            (std::vector<std::string>{"a", "b", "c"}));
  const auto x = sadet::featurize("a zz a c", v);
  ASSERT_EQ(x.entries.size(), 2u);
  EXPECT_EQ(x.entries[0], (std::pair<std::uint32_t, double>{0, 2.0}));
  EXPECT_EQ(x.entries[1], (std::pair<std::uint32_t, double>{2, 1.0}));
}

}  // namespace
