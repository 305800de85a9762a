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

#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "biasfst/common.h"
#include "biasfst/synth.h"
#include "test_util.h"

namespace biasfst {
namespace {

SynthOptions Small(uint64_t seed = 1) {
  SynthOptions o;
  o.seed = seed;
  o.general_sentences = 800;
  o.ood_sentences = 120;
  o.ood_test_utterances = 40;
  o.control_test_utterances = 60;
  return o;
}

std::set<std::string> WordsOf(const std::vector<Sentence>& sentences) {
  std::set<std::string> out;
  for (const auto& s : sentences) out.insert(s.begin(), s.end());
  return out;
}

TEST(GenerateSuite, SizesAndShape) {
  SynthSuite s = GenerateSuite(Small());
  EXPECT_EQ(s.general.sentences.size(), 800u);
  EXPECT_EQ(s.control.size(), 60u);
  EXPECT_EQ(s.control.name, "control");
  ASSERT_EQ(s.domains.size(), 3u);
  EXPECT_EQ(s.domains[0].name, "sports");
  EXPECT_EQ(s.domains[1].name, "grocery");
  EXPECT_EQ(s.domains[2].name, "fuel");
  std::set<std::string> ids(s.control.ids.begin(), s.control.ids.end());
  for (const auto& d : s.domains) {
    EXPECT_EQ(d.corpus.sentences.size(), 120u);
    EXPECT_EQ(d.test.size(), 40u);
    EXPECT_EQ(d.test.references.size(), 40u);
    EXPECT_FALSE(d.entities.empty());
    ids.insert(d.test.ids.begin(), d.test.ids.end());
    for (const auto& r : d.test.references) EXPECT_FALSE(r.empty());
  }
  EXPECT_EQ(ids.size(), 60u + 3 * 40u);  // utterance ids are globally unique
}

TEST(GenerateSuite, Deterministic) {
  SynthSuite a = GenerateSuite(Small(5));
  SynthSuite b = GenerateSuite(Small(5));
  EXPECT_EQ(a.general.sentences, b.general.sentences);
  EXPECT_EQ(a.control.references, b.control.references);
  for (size_t i = 0; i < a.domains.size(); ++i) {
    EXPECT_EQ(a.domains[i].corpus.sentences, b.domains[i].corpus.sentences);
    EXPECT_EQ(a.domains[i].test.references, b.domains[i].test.references);
    EXPECT_EQ(a.domains[i].entities, b.domains[i].entities);
  }
  SynthSuite c = GenerateSuite(Small(6));
  EXPECT_NE(a.general.sentences, c.general.sentences);
}

TEST(GenerateSuite, EntitiesAreOutOfDomainAndUsed) {
  SynthSuite s = GenerateSuite(Small());
  std::set<std::string> general = WordsOf(s.general.sentences);
  for (const auto& d : s.domains) {
    std::set<std::string> ood = WordsOf(d.corpus.sentences);
    size_t with_entity = 0;
    for (const auto& e : d.entities) EXPECT_EQ(general.count(e), 0u) << e;
    std::set<std::string> entities(d.entities.begin(), d.entities.end());
    for (const auto& r : d.test.references) {
      bool hit = false;
      for (const auto& w : r) hit = hit || entities.count(w);
      with_entity += hit;
    }
    // Most test requests carry at least one rare entity.
    EXPECT_GT(with_entity * 2, d.test.size()) << d.name;
    size_t seen = 0;
    for (const auto& e : d.entities) seen += ood.count(e);
    EXPECT_GT(seen, 0u) << d.name;
  }
  // The control set is drawn from the general grammar.
  for (const auto& d : s.domains) {
    std::set<std::string> entities(d.entities.begin(), d.entities.end());
    for (const auto& r : s.control.references) {
      for (const auto& w : r) EXPECT_EQ(entities.count(w), 0u) << w;
    }
  }
}

TEST(GenerateSuite, RejectsEmptySizes) {
  SynthOptions o = Small();
  o.ood_sentences = 0;
  EXPECT_THROW(GenerateSuite(o), Error);
}

TEST(WriteSuite, FilesRoundTrip) {
  testing::TempDir dir;
  SynthSuite s = GenerateSuite(Small());
  SuitePaths p = WriteSuite(s, dir.File("suite"));
  ASSERT_EQ(p.ood_corpora.size(), 3u);
  ASSERT_EQ(p.ood_testsets.size(), 3u);
  EXPECT_EQ(LoadCorpus(p.general_corpus).sentences, s.general.sentences);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(LoadCorpus(p.ood_corpora[i]).sentences, s.domains[i].corpus.sentences);
    Testset t = ReadTestset(p.ood_testsets[i], s.domains[i].name);
    EXPECT_EQ(t.ids, s.domains[i].test.ids);
    EXPECT_EQ(t.references, s.domains[i].test.references);
  }
  EXPECT_EQ(ReadTestset(p.control_testset, "control").references, s.control.references);
  std::string cfg = testing::ReadFile(p.config);
  EXPECT_NE(cfg.find("general-corpus = " + p.general_corpus), std::string::npos);
  EXPECT_NE(cfg.find("control-testset = " + p.control_testset), std::string::npos);
}

}  // namespace
}  // namespace biasfst
