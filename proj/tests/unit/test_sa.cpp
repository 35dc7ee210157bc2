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
#include <limits>
#include <sstream>
#include <vector>

#include "oracle.hpp"
#include "sadet/error.hpp"
#include "sadet/hash.hpp"
#include "sadet/sa.hpp"

namespace {

using sadet::ActivationTrace;
using sadet::ClassLabel;
using sadet::DsaVariant;
using sadet::LabeledTrace;
using sadet::NeighborhoodSpec;
using sadet::OtherClassMode;
using sadet::ReferenceStore;

const ClassLabel kA{0, "a"};
const ClassLabel kB{1, "b"};
const ClassLabel kC{2, "c"};

LabeledTrace lt(std::vector<double> v, const ClassLabel& c, std::string id = {}) {
  return {{std::move(v), "hidden", std::move(id)}, c};
}

ActivationTrace at(std::vector<double> v, std::string id = "t") { return {std::move(v), "hidden", std::move(id)}; }

std::vector<oracle::Point> to_points(const std::vector<LabeledTrace>& training) {
  std::vector<oracle::Point> pts;
  for (const auto& t : training) pts.push_back({t.trace.values, t.label.id});
  return pts;
}

std::vector<LabeledTrace> worked_example() {
  return {lt({0, 0}, kA), lt({1, 0}, kA), lt({5, 0}, kB)};
}

TEST(Dsa, WorkedExample) {
  const auto ref = ReferenceStore::build(worked_example());
  const auto t = at({2, 0});
  const auto s0 = sadet::dsa0(t, kA, ref);
  EXPECT_DOUBLE_EQ(s0.dist_a, 1.0);
  EXPECT_DOUBLE_EQ(s0.dist_b, 4.0);
  EXPECT_NEAR(s0.value, 0.25, 1e-12);
  const auto s1 = sadet::dsa_modified(t, kA, ref, NeighborhoodSpec::nearest_point());
  EXPECT_NEAR(s1.value, 1.0 / 3.0, 1e-12);
  const auto s2 = sadet::dsa_modified(t, kA, ref, NeighborhoodSpec::whole_class());
  EXPECT_NEAR(s2.value, 0.5, 1e-12);
  EXPECT_EQ(s2.variant, DsaVariant::dsa2);
}

TEST(Dsa, RatioConventions) {
  EXPECT_EQ(sadet::dsa_ratio(0.0, 0.0), 0.0);
  EXPECT_EQ(sadet::dsa_ratio(0.0, 3.0), 0.0);
  EXPECT_TRUE(std::isinf(sadet::dsa_ratio(1.0, 0.0)));
  EXPECT_DOUBLE_EQ(sadet::dsa_ratio(1.0, 4.0), 0.25);
}

TEST(Dsa, DuplicateOutlierFailureMode) {
  std::vector<LabeledTrace> training;
  sadet::Rng rng(7);
  for (int i = 0; i < 30; ++i) training.push_back(lt({rng.uniform(-1, 1), rng.uniform(-1, 1)}, kA));
  for (int i = 0; i < 30; ++i) training.push_back(lt({10 + rng.uniform(-1, 1), rng.uniform(-1, 1)}, kB));
  training.push_back(lt({9.0, 0.5}, kA));  // class-A outlier inside class B
  const auto ref = ReferenceStore::build(training);
  const auto t = at({9.0, 0.5});
  EXPECT_EQ(sadet::dsa0(t, kA, ref).value, 0.0);
  const auto s3 = sadet::dsa_modified(t, kA, ref, NeighborhoodSpec::k_nearest(10));
  EXPECT_GT(s3.value, 0.5);
}

TEST(Dsa, NearestTieGoesToLowestIndex) {
  std::vector<LabeledTrace> training = {lt({1, 0}, kA), lt({-1, 0}, kA), lt({0, 3}, kB), lt({0, -4}, kB)};
  const auto ref = ReferenceStore::build(training);
  // Both A points are at distance 1; the first one (1,0) is x_a, nearest B to it is (0,3).
  const auto s = sadet::dsa0(at({0, 0}), kA, ref);
  EXPECT_DOUBLE_EQ(s.dist_b, std::sqrt(10.0));
}

TEST(Dsa, KSaturatesAtClassSize) {
  const auto training = worked_example();
  const auto ref = ReferenceStore::build(training);
  const auto t = at({2, 0});
  const auto whole = sadet::dsa_modified(t, kA, ref, NeighborhoodSpec::whole_class());
  for (std::size_t k : {2u, 3u, 50u}) {
    const auto s = sadet::dsa_modified(t, kA, ref, NeighborhoodSpec::k_nearest(k));
    EXPECT_EQ(s.dist_a, whole.dist_a) << k;
    EXPECT_EQ(s.dist_b, whole.dist_b) << k;
  }
  const auto k1 = sadet::dsa_modified(t, kA, ref, NeighborhoodSpec::k_nearest(1));
  const auto nearest = sadet::dsa_modified(t, kA, ref, NeighborhoodSpec::nearest_point());
  EXPECT_EQ(k1.value, nearest.value);
  EXPECT_THROW(NeighborhoodSpec::k_nearest(0), sadet::ConfigError);
}

TEST(Dsa, BothZeroScoresZeroAndOnlyDistBZeroIsInf) {
  const auto ref = ReferenceStore::build(std::vector<LabeledTrace>{lt({0, 0}, kA), lt({0, 0}, kB)});
  EXPECT_EQ(sadet::dsa0(at({0, 0}), kA, ref).value, 0.0);
  const auto s = sadet::dsa_modified(at({1, 0}), kA, ref, NeighborhoodSpec::nearest_point());
  EXPECT_EQ(s.value, 1.0);
  const auto s0 = sadet::dsa0(at({1, 0}), kA, ref);
  EXPECT_TRUE(std::isinf(s0.value));
}

TEST(Dsa, MatchesBruteForceOracle) {
  sadet::Rng rng(20260101);
  for (int store = 0; store < 20; ++store) {
    const std::size_t dim = 1 + rng.uniform_index(8);
    const std::uint32_t m = 2 + static_cast<std::uint32_t>(rng.uniform_index(2));
    const std::size_t n = m + rng.uniform_index(200 - m);
    std::vector<LabeledTrace> training;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> v(dim);
      // Coarse grid values produce distance ties.
      for (double& x : v) x = store % 2 ? rng.uniform(-3, 3) : static_cast<double>(rng.uniform_index(4));
      const auto c = static_cast<std::uint32_t>(i < m ? i : rng.uniform_index(m));
      training.push_back(lt(v, ClassLabel{c, "c" + std::to_string(c)}));
    }
    const auto ref = ReferenceStore::build(training);
    const auto pts = to_points(training);
    for (int q = 0; q < 20; ++q) {
      std::vector<double> v(dim);
      for (double& x : v) x = store % 2 ? rng.uniform(-3, 3) : static_cast<double>(rng.uniform_index(4));
      const auto c = static_cast<std::uint32_t>(rng.uniform_index(m));
      const ClassLabel label{c, "c" + std::to_string(c)};
      const auto t = at(v);
      const auto o0 = oracle::dsa0(pts, v, c);
      const auto s0 = sadet::dsa0(t, label, ref);
      ASSERT_EQ(s0.dist_a, o0.dist_a);
      ASSERT_EQ(s0.dist_b, o0.dist_b);
      const std::pair<NeighborhoodSpec, oracle::Hood> hoods[] = {
          {NeighborhoodSpec::nearest_point(), oracle::Hood::nearest},
          {NeighborhoodSpec::whole_class(), oracle::Hood::whole},
          {NeighborhoodSpec::k_nearest(10), oracle::Hood::knn}};
      for (const auto& [nb, hood] : hoods) {
        for (bool per_class : {false, true}) {
          const auto o = oracle::dsa_modified(pts, v, c, hood, 10, per_class);
          const auto s = sadet::dsa_modified(
              t, label, ref, nb, per_class ? OtherClassMode::per_class_min : OtherClassMode::pooled);
          ASSERT_EQ(s.dist_a, o.dist_a);
          ASSERT_EQ(s.dist_b, o.dist_b);
        }
      }
    }
  }
}

TEST(Dsa, InvariantUnderPermutationWithinTiesFree) {
  sadet::Rng rng(3);
  std::vector<LabeledTrace> training;
  for (int i = 0; i < 60; ++i) {
    training.push_back(lt({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}, i % 2 ? kA : kB));
  }
  auto shuffled = training;
  rng.shuffle(std::span<LabeledTrace>(shuffled));
  const auto r1 = ReferenceStore::build(training);
  const auto r2 = ReferenceStore::build(shuffled);
  const auto t = at({0.1, -0.2, 0.3});
  for (auto nb : {NeighborhoodSpec::nearest_point(), NeighborhoodSpec::whole_class(),
                  NeighborhoodSpec::k_nearest(5)}) {
    EXPECT_NEAR(sadet::dsa_modified(t, kA, r1, nb).value, sadet::dsa_modified(t, kA, r2, nb).value, 1e-12);
  }
  EXPECT_EQ(sadet::dsa0(t, kA, r1).value, sadet::dsa0(t, kA, r2).value);
}

TEST(Dsa, ScaleInvariant) {
  sadet::Rng rng(5);
  std::vector<LabeledTrace> training, scaled;
  for (int i = 0; i < 40; ++i) {
    std::vector<double> v{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    training.push_back(lt(v, i % 3 ? kA : kB));
    scaled.push_back(lt({v[0] * 4.0, v[1] * 4.0}, i % 3 ? kA : kB));
  }
  const auto r1 = ReferenceStore::build(training);
  const auto r2 = ReferenceStore::build(scaled);
  for (auto v : {DsaVariant::dsa0, DsaVariant::dsa1, DsaVariant::dsa2, DsaVariant::dsa3}) {
    const sadet::DsaConfig cfg{v, 10, OtherClassMode::pooled};
    EXPECT_NEAR(sadet::score(at({0.3, 0.1}), kB, r1, cfg).value,
                sadet::score(at({1.2, 0.4}), kB, r2, cfg).value, 1e-12);
  }
}

TEST(Dsa, BatchEqualsPointwiseForAnyJobs) {
  sadet::Rng rng(11);
  std::vector<LabeledTrace> training;
  for (int i = 0; i < 120; ++i) training.push_back(lt({rng.uniform(-1, 1), rng.uniform(-1, 1)}, i % 3 == 0 ? kC : (i % 2 ? kA : kB)));
  const auto ref = ReferenceStore::build(training);
  std::vector<ActivationTrace> traces;
  std::vector<ClassLabel> labels;
  for (int i = 0; i < 57; ++i) {
    traces.push_back(at({rng.uniform(-1, 1), rng.uniform(-1, 1)}, "q" + std::to_string(i)));
    labels.push_back(i % 3 == 0 ? kA : kC);
  }
  const sadet::DsaConfig cfg{DsaVariant::dsa3, 10, OtherClassMode::pooled};
  const auto one = sadet::score_batch(traces, labels, ref, cfg, 1);
  const auto many = sadet::score_batch(traces, labels, ref, cfg, 4);
  ASSERT_EQ(one.size(), traces.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    const auto s = sadet::score(traces[i], labels[i], ref, cfg);
    EXPECT_EQ(one[i].value, s.value);
    EXPECT_EQ(many[i].value, s.value);
    EXPECT_EQ(many[i].input_id, traces[i].input_id);
  }
}

TEST(Dsa, Errors) {
  const auto ref = ReferenceStore::build(worked_example());
  EXPECT_THROW(sadet::dsa0(at({1, 2, 3}), kA, ref), sadet::DimensionError);
  EXPECT_THROW(sadet::dsa0(at({1, 2}), kC, ref), sadet::UnknownClassError);
  EXPECT_THROW(ReferenceStore::build(std::vector<LabeledTrace>{lt({1}, kA), lt({2}, kA)}), sadet::ConfigError);
  EXPECT_THROW(ReferenceStore::build(std::vector<LabeledTrace>{lt({1}, kA), lt({2, 3}, kB, "bad")}),
               sadet::DimensionError);
  std::vector<ActivationTrace> traces{at({1, 0}, "ok"), at({1}, "short")};
  std::vector<ClassLabel> labels{kA, kA};
  try {
    sadet::score_batch(traces, labels, ref, {}, 2);
    FAIL();
  } catch (const sadet::BatchError& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(Dsa, ScoresCsvRoundTrip) {
  std::vector<sadet::DsaScore> scores{{0.25, 1.0, 4.0, DsaVariant::dsa0, "x"},
                                      {std::numeric_limits<double>::infinity(), 1.0, 0.0, DsaVariant::dsa0, "y"},
                                      {0.1 + 0.2, 0.3, 1.0, DsaVariant::dsa0, "z,with comma"}};
  std::stringstream ss;
  sadet::write_scores(ss, scores);
  const auto back = sadet::read_scores(ss);
  ASSERT_EQ(back.size(), scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    EXPECT_EQ(back[i].value, scores[i].value);
    EXPECT_EQ(back[i].input_id, scores[i].input_id);
    EXPECT_EQ(back[i].dist_b, scores[i].dist_b);
  }
}

TEST(Dsa, VariantNames) {
  for (auto v : {DsaVariant::dsa0, DsaVariant::dsa1, DsaVariant::dsa2, DsaVariant::dsa3}) {
    EXPECT_EQ(sadet::dsa_variant_from_string(sadet::to_string(v)), v);
  }
  EXPECT_THROW(sadet::dsa_variant_from_string("DSA9"), sadet::Error);
}

}  // namespace
