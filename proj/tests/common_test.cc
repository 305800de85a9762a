// Copyright (c) 2026 BiasFST Authors
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

#include <atomic>
#include <set>

#include <gtest/gtest.h>

#include "biasfst/common.h"

namespace biasfst {
namespace {

TEST(Rng, SeededSequencesRepeat) {
  Rng a(5), b(5), c(6);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    uint64_t x = a.Next();
    EXPECT_EQ(x, b.Next());
    differs |= x != c.Next();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, Ranges) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    double u = rng.Uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(rng.Index(7), 7u);
  }
}

TEST(DeriveSeed, StableAndKeyed) {
  EXPECT_EQ(DeriveSeed(1, "general"), DeriveSeed(1, "general"));
  EXPECT_NE(DeriveSeed(1, "general"), DeriveSeed(2, "general"));
  EXPECT_NE(DeriveSeed(1, "general"), DeriveSeed(1, "ood/sports"));
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  ParallelFor(hits.size(), 4, [&](size_t i) { ++hits[i]; });
  for (auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, RethrowsTaskErrors) {
  EXPECT_THROW(ParallelFor(10, 3,
                           [](size_t i) {
                             if (i == 7) throw Error("task failed");
                           }),
               Error);
}

TEST(Strings, SplitAndJoin) {
  EXPECT_EQ(SplitWhitespace("  a\tb  c \n"), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_TRUE(SplitWhitespace("   ").empty());
  EXPECT_EQ(Join({"a", "b", "c"}, " "), "a b c");
  EXPECT_EQ(Join({}, " "), "");
}

}  // namespace
}  // namespace biasfst
