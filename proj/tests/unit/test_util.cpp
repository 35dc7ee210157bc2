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
#include <set>
#include <sstream>

#include "sadet/csv.hpp"
#include "sadet/error.hpp"
#include "sadet/hash.hpp"
#include "sadet/log.hpp"
#include "sadet/numfmt.hpp"
#include "sadet/trace_store.hpp"

namespace {

TEST(Hash, Fnv1aKnownVectors) {
  EXPECT_EQ(sadet::fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(sadet::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(sadet::fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(sadet::hex64(0xabcULL), "0000000000000abc");
}

TEST(Hash, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t k = 0; k < 50; ++k) {
    seen.insert(sadet::derive_seed(1, "item", k));
    seen.insert(sadet::derive_seed(2, "item", k));
    seen.insert(sadet::derive_seed(1, "item2", k));
  }
  EXPECT_EQ(seen.size(), 150u);
  EXPECT_EQ(sadet::derive_seed(3, "x", 1), sadet::derive_seed(3, "x", 1));
}

TEST(Rng, FixedSequenceAndBounds) {
  sadet::Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  sadet::Rng c(5489);
  EXPECT_EQ(c.next(), 14514284786278117030ULL);  // mt19937_64 default-seed first output
  sadet::Rng r(1);
  std::vector<int> hist(7, 0);
  for (int i = 0; i < 7000; ++i) {
    const auto v = r.uniform_index(7);
    ASSERT_LT(v, 7u);
    ++hist[v];
    const double u = r.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  for (int h : hist) EXPECT_GT(h, 800);
}

TEST(NumFmt, ShortestRoundTrip) {
  for (double v : {0.0, 0.1, 1.0 / 3.0, 1e-300, 123456789.125, -2.5, 5e-324}) {
    EXPECT_EQ(sadet::parse_double(sadet::format_double(v)), v);
  }
  EXPECT_EQ(sadet::format_double(0.1), "0.1");
  EXPECT_EQ(sadet::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_TRUE(std::isinf(sadet::parse_double("+inf")));
  EXPECT_LT(sadet::parse_double("-inf"), 0.0);
  EXPECT_THROW(sadet::parse_double("1.5x"), sadet::DataError);
  EXPECT_EQ(sadet::parse_int("-12"), -12);
  EXPECT_THROW(sadet::parse_int("99999999999999999999"), sadet::DataError);
  EXPECT_THROW(sadet::parse_int(""), sadet::DataError);
}

TEST(Csv, QuotingAndMultilineFields) {
  std::stringstream ss;
  sadet::csv::write_row(ss, {"a", "b,c", "say \"hi\"", "two\nlines"});
  sadet::csv::write_row(ss, {"x", "", "", ""});
  sadet::csv::Reader reader(ss);
  const auto r1 = reader.next();
  ASSERT_TRUE(r1);
  EXPECT_EQ(*r1, (sadet::csv::Row{"a", "b,c", "say \"hi\"", "two\nlines"}));
  const auto r2 = reader.next();
  ASSERT_TRUE(r2);
  EXPECT_EQ(r2->size(), 4u);
  EXPECT_EQ(reader.record_number(), 2u);
  EXPECT_FALSE(reader.next());
  EXPECT_EQ(sadet::csv::escape("plain"), "plain");
}

TEST(TraceStore, RoundTrip) {
  sadet::TraceTable t{"hidden", 3, {{"a", 0, {0.1, 0.0, 1e10}}, {"b\tc", 1, {1.0 / 3.0, -2.0, 0.0}}}};
  t.rows[1].input_id = "b";
  std::stringstream ss;
  sadet::write_traces(ss, t);
  const auto back = sadet::read_traces(ss);
  EXPECT_EQ(back.layer, "hidden");
  ASSERT_EQ(back.rows.size(), 2u);
  EXPECT_EQ(back.rows[1].values, t.rows[1].values);
  EXPECT_EQ(back.rows[1].label_id, 1u);
  std::istringstream bad("sadet-traces\t1\thidden\t2\t1\na\t0\t1\n");
  EXPECT_THROW(sadet::read_traces(bad), sadet::Error);
}

TEST(Log, SinkReplacement) {
  std::vector<std::string> got;
  auto prev = sadet::set_log_sink([&](sadet::LogLevel, std::string_view m) { got.emplace_back(m); });
  sadet::log_warning("hello");
  sadet::set_log_sink(prev);
  ASSERT_EQ(got.size(), 1u);
  EXPECT_EQ(got[0], "hello");
}

}  // namespace
