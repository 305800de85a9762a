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

#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "biasfst/common.h"
#include "biasfst/corpus.h"
#include "test_util.h"

namespace biasfst {
namespace {

using testing::TempDir;
using testing::WriteFile;

TEST(LoadCorpus, SingleUtterance) {
  TempDir dir;
  WriteFile(dir.File("c.txt"), "play some music\n");
  Corpus c = LoadCorpus(dir.File("c.txt"));
  ASSERT_EQ(c.sentences.size(), 1u);
  EXPECT_EQ(c.sentences[0], (Sentence{"play", "some", "music"}));
  EXPECT_EQ(c.skipped_lines, 0u);
  EXPECT_EQ(c.NumTokens(), 3u);
}

TEST(LoadCorpus, BlankLinesAreSkippedAndCounted) {
  TempDir dir;
  WriteFile(dir.File("c.txt"), "play some music\n\ntune into the game\n");
  Corpus c = LoadCorpus(dir.File("c.txt"));
  EXPECT_EQ(c.sentences.size(), 2u);
  EXPECT_EQ(c.skipped_lines, 1u);
}

TEST(LoadCorpus, Lowercases) {
  TempDir dir;
  WriteFile(dir.File("c.txt"), "Tune into the Freiburg game\n");
  EXPECT_EQ(LoadCorpus(dir.File("c.txt")).sentences[0],
            (Sentence{"tune", "into", "the", "freiburg", "game"}));
  EXPECT_EQ(LoadCorpus(dir.File("c.txt"), false).sentences[0][0], "Tune");
}

TEST(LoadCorpus, MarkersInRawTextAreDropped) {
  Corpus c = testing::Lines({"<s> a b </s>"});
  EXPECT_EQ(c.sentences[0], (Sentence{"a", "b"}));
}

TEST(LoadCorpus, Errors) {
  TempDir dir;
  EXPECT_THROW(LoadCorpus(dir.File("missing.txt")), Error);
  WriteFile(dir.File("blank.txt"), "\n   \n\t\n");
  EXPECT_THROW(LoadCorpus(dir.File("blank.txt")), Error);
}

TEST(SplitUtf8, CodePoints) {
  EXPECT_EQ(SplitUtf8("ab"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(SplitUtf8("f\xC3\xBC" "r"), (std::vector<std::string>{"f", "\xC3\xBC", "r"}));
}

TEST(SubwordInventory, TinyCorpus) {
  SubwordInventory inv = BuildSubwordInventory(testing::Lines({"aa"}), 4);
  EXPECT_GE(inv.Find("a", false), 0);
  EXPECT_GE(inv.Find("a", true), 0);
  EXPECT_GE(inv.Find("aa", true), 0);
  // "aa" never occurs word-internally, so it is not a candidate.
  EXPECT_EQ(inv.Find("aa", false), -1);
  EXPECT_EQ(inv.size(), 3u);
  // Ids are dense and zero-based.
  for (size_t i = 0; i < inv.size(); ++i) {
    EXPECT_EQ(inv.Find(inv.unit(i).text, inv.unit(i).word_final), static_cast<int>(i));
  }
}

TEST(SubwordInventory, BudgetForcesCharacterUnits) {
  SubwordInventory inv = BuildSubwordInventory(testing::Lines({"ab ab abc"}), 6);
  EXPECT_EQ(inv.size(), 6u);
  for (const auto& u : inv.units()) EXPECT_EQ(SplitUtf8(u.text).size(), 1u);
  EXPECT_THROW(BuildSubwordInventory(testing::Lines({"ab ab abc"}), 5), Error);
}

TEST(SubwordInventory, Deterministic) {
  Corpus c = testing::Lines({"tune into the freiburg game", "play some music", "the game"});
  std::ostringstream a, b;
  BuildSubwordInventory(c, 40).Write(a);
  BuildSubwordInventory(c, 40).Write(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(SubwordInventory, FrequencyThenLexicographicRanking) {
  SubwordInventory inv = BuildSubwordInventory(testing::Lines({"xy xy yx"}), 5);
  // Characters take four slots; "xy" (final, twice) beats "yx" (final, once).
  ASSERT_EQ(inv.size(), 5u);
  EXPECT_EQ(inv.unit(4), (SubwordUnit{"xy", true}));
}

TEST(SubwordInventory, WriteReadRoundTrip) {
  Corpus c = testing::Lines({"tune into the freiburg game"});
  SubwordInventory inv = BuildSubwordInventory(c, 30);
  std::stringstream ss;
  inv.Write(ss);
  EXPECT_EQ(SubwordInventory::Read(ss), inv);
  std::istringstream bad("a\tsideways\t0\n");
  EXPECT_THROW(SubwordInventory::Read(bad), Error);
}

TEST(SegmentWord, SingleCharacter) {
  SubwordInventory inv = BuildSubwordInventory(testing::Lines({"a"}), 2);
  auto seg = SegmentWord("a", inv);
  ASSERT_EQ(seg.size(), 1u);
  EXPECT_EQ(inv.unit(seg[0]), (SubwordUnit{"a", true}));
}

TEST(SegmentWord, CharacterOnlyInventory) {
  Corpus c = testing::Lines({"freiburg"});
  std::set<std::string> chars;
  for (auto& ch : SplitUtf8("freiburg")) chars.insert(ch);
  SubwordInventory inv = BuildSubwordInventory(c, 2 * chars.size());
  auto seg = SegmentWord("freiburg", inv);
  ASSERT_EQ(seg.size(), 8u);
  for (size_t i = 0; i + 1 < seg.size(); ++i) EXPECT_FALSE(inv.unit(seg[i]).word_final);
  EXPECT_TRUE(inv.unit(seg.back()).word_final);
}

TEST(SegmentWord, LongestMatchAndErrors) {
  SubwordInventory inv({{"a", false}, {"a", true}, {"b", false}, {"b", true},
                        {"ab", false}, {"abb", true}});
  auto seg = SegmentWord("ababb", inv);
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_EQ(inv.unit(seg[0]).text, "ab");
  EXPECT_EQ(inv.unit(seg[1]).text, "abb");
  EXPECT_THROW(SegmentWord("abc", inv), Error);
  EXPECT_THROW(SegmentWord("", inv), Error);
}

// Deterministic pseudo-words over a small alphabet.
std::vector<std::string> SyntheticWords(size_t n) {
  Rng rng(42);
  const std::string letters = "abcdefghij";
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    std::string w;
    size_t len = 1 + rng.Index(9);
    for (size_t k = 0; k < len; ++k) w += letters[rng.Index(letters.size())];
    out.push_back(w);
  }
  return out;
}

TEST(SegmentWord, RoundTripOverCorpus) {
  auto words = SyntheticWords(100);
  Corpus c;
  for (const auto& w : words) c.sentences.push_back({w});
  SubwordInventory inv = BuildSubwordInventory(c, 64);
  for (const auto& w : words) {
    auto seg = SegmentWord(w, inv);
    std::string joined;
    size_t finals = 0;
    for (int id : seg) {
      joined += inv.unit(id).text;
      finals += inv.unit(id).word_final;
    }
    EXPECT_EQ(joined, w);
    EXPECT_EQ(finals, 1u);
    EXPECT_TRUE(inv.unit(seg.back()).word_final);
  }
}

TEST(UnitsToWords, PendingHandling) {
  Corpus c = testing::Lines({"play some music"});
  SubwordInventory inv = BuildSubwordInventory(c, 2 * 11);
  auto units = SegmentSentence(Sentence{"play", "some"}, inv);
  EXPECT_EQ(UnitsToWords(units, inv), (std::vector<std::string>{"play", "some"}));
  std::vector<int> partial(units.begin(), units.end() - 1);
  EXPECT_EQ(UnitsToWords(partial, inv, true), (std::vector<std::string>{"play", "som"}));
  EXPECT_EQ(UnitsToWords(partial, inv, false), (std::vector<std::string>{"play"}));
}

}  // namespace
}  // namespace biasfst
