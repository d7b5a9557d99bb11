// Copyright 2026 The finimg Authors
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

#include "finimg/csv.hpp"
#include "finimg/error.hpp"
#include "finimg/rng.hpp"

namespace csv = finimg::csv;

TEST(Csv, SplitsQuotedFields) {
  const auto f = csv::split_line(R"(a,"b,c","d""e",,f)", 1);
  ASSERT_EQ(f.size(), 5u);
  EXPECT_EQ(f[0], "a");
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "d\"e");
  EXPECT_EQ(f[3], "");
  EXPECT_EQ(f[4], "f");
}

TEST(Csv, WriteThenReadRoundTrips) {
  std::ostringstream out;
  csv::write_row(out, {"plain", "with,comma", "with\"quote", ""});
  std::istringstream in(out.str());
  csv::Reader reader(in);
  std::vector<std::string> fields;
  ASSERT_TRUE(reader.next(fields));
  EXPECT_EQ(fields, (std::vector<std::string>{"plain", "with,comma", "with\"quote", ""}));
  EXPECT_FALSE(reader.next(fields));
}

TEST(Csv, ReaderHandlesCrlf) {
  std::istringstream in("a,b\r\n1,2\r\n");
  csv::Reader reader(in);
  std::vector<std::string> f;
  ASSERT_TRUE(reader.next(f));
  EXPECT_EQ(f.back(), "b");
  ASSERT_TRUE(reader.next(f));
  EXPECT_EQ(f.back(), "2");
  EXPECT_EQ(reader.line(), 2u);
}

TEST(Csv, DoublesRoundTripExactly) {
  finimg::Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    const double v = (rng.uniform() - 0.5) * std::pow(10.0, rng.uniform(-30, 30));
    const auto back = csv::parse_double(csv::format_double(v));
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(*back, v);
  }
  EXPECT_EQ(csv::format_double(0.1), "0.1");
}

TEST(Csv, RejectsNonFiniteAndGarbage) {
  EXPECT_FALSE(csv::parse_double("nan"));
  EXPECT_FALSE(csv::parse_double("inf"));
  EXPECT_FALSE(csv::parse_double("1.5x"));
  EXPECT_FALSE(csv::parse_double(""));
  EXPECT_EQ(csv::parse_double("+2.5"), 2.5);
  EXPECT_EQ(csv::parse_int("-12"), -12);
  EXPECT_FALSE(csv::parse_int("1.0"));
}

TEST(Csv, Trim) { EXPECT_EQ(csv::trim("  x y \t"), "x y"); }
