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

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "biasfst/common.h"
#include "biasfst/ngram_lm.h"
#include "biasfst/synth.h"
#include "worked_example.h"
#include "test_util.h"

namespace biasfst {
namespace {

using Words = std::vector<std::string>;
using testing::DataPath;
using testing::Lines;
using testing::MaxNormalizationError;

NGramModel Train(const Corpus& c, int order, int cutoff = 5) {
  return EstimateKatz(CountNGrams(c, order), KatzOptions{cutoff});
}

double Prob(const NGramModel& m, const std::string& w, const Words& h) {
  return std::exp(m.LogProb(w, h));
}

// ---------------------------------------------------------------------------
// Counting

TEST(CountNGrams, Bigrams) {
  CountTable t = CountNGrams(Lines({"a b"}), 2);
  const auto& v = t.vocab;
  EXPECT_EQ(t.counts[0].size(), 3u);
  EXPECT_EQ(t.Count(NGram{v.Find("a")}), 1);
  EXPECT_EQ(t.Count(NGram{v.Find("b")}), 1);
  EXPECT_EQ(t.Count(NGram{Vocabulary::kEosId}), 1);
  EXPECT_EQ(t.counts[1].size(), 3u);
  EXPECT_EQ(t.Count(NGram{Vocabulary::kBosId, v.Find("a")}), 1);
  EXPECT_EQ(t.Count(NGram{v.Find("a"), v.Find("b")}), 1);
  EXPECT_EQ(t.Count(NGram{v.Find("b"), Vocabulary::kEosId}), 1);
}

TEST(CountNGrams, Unigrams) {
  CountTable t = CountNGrams(Lines({"a a a"}), 1);
  EXPECT_EQ(t.counts[0].size(), 2u);
  EXPECT_EQ(t.Count(NGram{t.vocab.Find("a")}), 3);
  EXPECT_EQ(t.Count(NGram{Vocabulary::kEosId}), 1);
}

Corpus RandomCorpus(size_t n, uint64_t seed, size_t vocab = 6) {
  Rng rng(seed);
  std::vector<std::string> lines;
  for (size_t i = 0; i < n; ++i) {
    std::string line;
    size_t len = 1 + rng.Index(7);
    for (size_t k = 0; k < len; ++k) {
      if (k) line += ' ';
      line += static_cast<char>('a' + rng.Index(vocab));
    }
    lines.push_back(line);
  }
  return CorpusFromLines(lines);
}

TEST(CountNGrams, MatchesSlidingWindowRecount) {
  Corpus c = RandomCorpus(50, 7);
  CountTable t = CountNGrams(c, 4);
  std::map<Words, int64_t> oracle;
  for (const auto& s : c.sentences) {
    Words padded = {"<s>"};
    padded.insert(padded.end(), s.begin(), s.end());
    padded.push_back("</s>");
    for (size_t start = 0; start < padded.size(); ++start) {
      for (size_t len = 1; len <= 4 && start + len <= padded.size(); ++len) {
        Words g(padded.begin() + start, padded.begin() + start + len);
        if (g == Words{"<s>"}) continue;
        ++oracle[g];
      }
    }
  }
  size_t total_entries = 0;
  for (int k = 1; k <= 4; ++k) {
    for (const auto& [ngram, count] : t.counts[k - 1]) {
      EXPECT_EQ(count, oracle[t.vocab.Strings(ngram)]);
      EXPECT_GT(count, 0);
      // <s> is never counted as a unigram, so "<s> w" has no counted prefix.
      if (k > 2 || (k == 2 && ngram[0] != Vocabulary::kBosId)) {
        NGram prefix(ngram.begin(), ngram.end() - 1);
        EXPECT_GT(t.Count(prefix), 0) << "k=" << k;
      }
      ++total_entries;
    }
  }
  EXPECT_EQ(total_entries, oracle.size());
}

TEST(CountNGrams, Errors) {
  EXPECT_THROW(CountNGrams(Lines({"a"}), 0), Error);
  EXPECT_THROW(CountNGrams(Lines({"a"}), kMaxOrder + 1), Error);
  EXPECT_THROW(CountNGrams(Corpus{}, 2), Error);
}

// ---------------------------------------------------------------------------
// Katz estimation

TEST(Katz, UnigramNormalization) {
  NGramModel m = Train(Lines({"a", "a", "a", "b"}), 1);
  double total = Prob(m, "a", {}) + Prob(m, "b", {}) + Prob(m, "</s>", {}) +
                 Prob(m, "<unk>", {});
  EXPECT_NEAR(total, 1.0, 1e-9);
}

TEST(Katz, OneWordCorpusApproachesMaximumLikelihood) {
  std::vector<std::string> lines(1000, "a");
  NGramModel m = Train(CorpusFromLines(lines), 1);
  // ML estimate: a and </s> each take half of the 2000 tokens.
  EXPECT_NEAR(m.LogProb("a", {}), std::log(0.5), 1e-3);
}

TEST(Katz, StoredProbabilitiesAreProper) {
  for (const char* name : {"lm_weather.txt", "lm_music.txt", "lm_mixed.txt"}) {
    NGramModel m = Train(LoadCorpus(DataPath(name)), 4);
    for (int k = 1; k <= 4; ++k) {
      for (const auto& [ngram, e] : m.Entries(k)) {
        EXPECT_TRUE(std::isfinite(e.log_prob));
        EXPECT_LE(e.log_prob, 0.0);
        EXPECT_TRUE(std::isfinite(e.backoff));
      }
    }
  }
}

// Straight-line Katz backoff written from the textbook definition: string
// n-grams, Good-Turing coefficients
//   d_r = (r*/r - (K+1) n_{K+1} / n_1) / (1 - (K+1) n_{K+1} / n_1),
//   r* = (r+1) n_{r+1} / n_r,
// leftover unigram mass on <unk>, and the one-count denominator bump when a
// context has no leftover at all.
class KatzOracle {
 public:
  KatzOracle(const std::vector<Words>& sentences, int order, int cutoff)
      : order_(order) {
    for (const auto& s : sentences) {
      Words p = {"<s>"};
      p.insert(p.end(), s.begin(), s.end());
      p.push_back("</s>");
      for (size_t end = 1; end < p.size(); ++end) {
        for (int k = 1; k <= order && static_cast<size_t>(k) <= end + 1; ++k) {
          ++counts_[Words(p.begin() + (end + 1 - k), p.begin() + end + 1)];
        }
      }
      for (size_t i = 1; i < p.size(); ++i) vocab_.insert(p[i]);
    }
    vocab_.insert("<unk>");
    for (int k = 1; k <= order; ++k) {
      std::map<int64_t, double> n;
      for (const auto& [g, c] : counts_) {
        if (static_cast<int>(g.size()) == k) n[c] += 1;
      }
      double common = (cutoff + 1) * n[cutoff + 1] / n[1];
      std::vector<double> d(cutoff + 1, 1.0);
      for (int r = 1; r <= cutoff; ++r) {
        double rstar = (r + 1) * n[r + 1] / n[r];
        d[r] = (rstar / r - common) / (1 - common);
        all_buckets_discounted_ &= d[r] > 0.0 && d[r] < 1.0;
      }
      discounts_.push_back(d);
    }
    // Conditional distributions for every context with continuations.
    std::map<Words, std::map<std::string, int64_t>> followers;
    for (const auto& [g, c] : counts_) {
      followers[Words(g.begin(), g.end() - 1)][g.back()] = c;
    }
    for (const auto& [h, next] : followers) {
      const auto& d = discounts_[h.size()];
      double total = 0;
      for (const auto& [w, c] : next) total += c;
      auto discounted = [&](int64_t c) {
        return (c < static_cast<int64_t>(d.size()) ? d[c] : 1.0) * c;
      };
      double seen_mass;
      for (;;) {
        seen_mass = 0;
        for (const auto& [w, c] : next) seen_mass += discounted(c) / total;
        if (1 - seen_mass >= 3e-6 || next.size() >= vocab_.size()) break;
        total += 1;
      }
      for (const auto& [w, c] : next) dist_[h][w] = discounted(c) / total;
      if (h.empty()) dist_[h]["<unk>"] += std::max(0.0, 1 - seen_mass);
    }
  }

  bool all_buckets_discounted() const { return all_buckets_discounted_; }
  const std::set<std::string>& vocab() const { return vocab_; }

  double P(const std::string& w, Words h) const {
    if (static_cast<int>(h.size()) > order_ - 1) h.erase(h.begin(), h.end() - (order_ - 1));
    auto ctx = dist_.find(h);
    if (h.empty()) {
      auto it = ctx->second.find(w);
      return it == ctx->second.end() ? 0.0 : it->second;
    }
    Words shorter(h.begin() + 1, h.end());
    if (ctx == dist_.end()) return P(w, shorter);
    auto it = ctx->second.find(w);
    if (it != ctx->second.end()) return it->second;
    double num = 1, den = 1;
    for (const auto& [v, p] : ctx->second) {
      num -= p;
      den -= P(v, shorter);
    }
    return num / den * P(w, shorter);
  }

 private:
  int order_;
  std::map<Words, int64_t> counts_;
  std::set<std::string> vocab_;
  std::vector<std::vector<double>> discounts_;
  std::map<Words, std::map<std::string, double>> dist_;
  bool all_buckets_discounted_ = true;
};

TEST(Katz, MatchesIndependentOracle) {
  Corpus c = Lines({"d a f b a", "i f", "a k f", "a a a a a", "g f p b", "a i a",
                    "k e f f a", "m n b", "a k b", "d", "a a"});
  KatzOracle oracle(c.sentences, 3, 2);
  ASSERT_TRUE(oracle.all_buckets_discounted());
  NGramModel m = Train(c, 3, 2);

  std::vector<std::string> symbols(oracle.vocab().begin(), oracle.vocab().end());
  symbols.push_back("<s>");
  std::vector<Words> histories = {{}};
  for (const auto& a : symbols) {
    histories.push_back({a});
    for (const auto& b : symbols) histories.push_back({a, b});
  }
  size_t checked = 0;
  for (const auto& h : histories) {
    for (const auto& w : oracle.vocab()) {
      ASSERT_NEAR(Prob(m, w, h), oracle.P(w, h), 1e-12)
          << "p(" << w << " | " << Join(h, " ") << ")";
      ++checked;
    }
  }
  EXPECT_EQ(checked, histories.size() * oracle.vocab().size());
}

TEST(Katz, GoodTuringDegenerateBucketsFallBackToOne) {
  // No singletons: every coefficient stays 1.
  auto d = GoodTuringDiscounts({{2, 3}, {3, 1}}, 2, 1);
  EXPECT_EQ(d, (std::vector<double>{1.0, 1.0, 1.0}));
  EXPECT_THROW(GoodTuringDiscounts({{1, 1}}, 0, 1), Error);
}

TEST(Katz, FixtureCorporaNormalize) {
  for (const char* name : {"lm_weather.txt", "lm_music.txt", "lm_mixed.txt"}) {
    Corpus c = LoadCorpus(DataPath(name));
    for (int order = 1; order <= 4; ++order) {
      EXPECT_LT(MaxNormalizationError(Train(c, order)), 1e-9) << name << " order " << order;
    }
  }
}

// ---------------------------------------------------------------------------
// Queries

TEST(LogProb, BackoffTrace) {
  NGramModel m = Train(Lines({"a b", "b c", "a c"}), 2);
  const auto& v = m.vocab();
  // "c a" was never seen: p(a | c) = bo(c) * p(a).
  NGram bigram = {v.Find("c"), v.Find("a")};
  ASSERT_EQ(m.Find(bigram), nullptr);
  const auto* c_entry = m.Find(NGram{v.Find("c")});
  const auto* a_entry = m.Find(NGram{v.Find("a")});
  ASSERT_NE(c_entry, nullptr);
  ASSERT_NE(a_entry, nullptr);
  EXPECT_DOUBLE_EQ(m.LogProb("a", Words{"c"}), c_entry->backoff + a_entry->log_prob);
  // The backoff weight itself: leftover over the lower-order mass of the
  // unseen words. Only "c </s>" follows c.
  const auto* c_eos = m.Find(NGram{v.Find("c"), Vocabulary::kEosId});
  const auto* eos = m.Find(NGram{Vocabulary::kEosId});
  ASSERT_NE(c_eos, nullptr);
  double expected = std::log((1 - std::exp(c_eos->log_prob)) / (1 - std::exp(eos->log_prob)));
  EXPECT_NEAR(c_entry->backoff, expected, 1e-12);
}

TEST(LogProb, LongHistoriesAreTruncated) {
  NGramModel m = Train(LoadCorpus(DataPath("lm_weather.txt")), 2);
  EXPECT_EQ(m.LogProb("today", Words{"what", "is", "weather"}),
            m.LogProb("today", Words{"weather"}));
}

TEST(SentenceLogProb, EmptySentence) {
  NGramModel m = Train(LoadCorpus(DataPath("lm_music.txt")), 3);
  EXPECT_EQ(m.SentenceLogProb(Words{}), m.LogProb("</s>", Words{"<s>"}));
}

TEST(SentenceLogProb, SumOfTokens) {
  NGramModel m = Train(LoadCorpus(DataPath("lm_music.txt")), 3);
  Words s = {"play", "some", "jazz", "music"};
  double total = 0;
  Words h = {"<s>"};
  for (const auto& w : s) {
    total += m.LogProb(w, h);
    h.push_back(w);
  }
  total += m.LogProb("</s>", h);
  EXPECT_DOUBLE_EQ(m.SentenceLogProb(s), total);
}

TEST(SentenceLogProb, InjectedScores) {
  NGramModel ood = testing::WorkedModel(true);
  EXPECT_NEAR(ood.SentenceLogProb(testing::WorkedSentence2()), -13.85, 1e-9);
}

// ---------------------------------------------------------------------------
// Interpolation

std::vector<Words> QueryHistories(const NGramModel& m, size_t random, uint64_t seed) {
  std::vector<Words> out = {{}};
  for (int k = 1; k < m.order(); ++k) {
    for (const auto& [ngram, e] : m.Entries(k)) out.push_back(m.vocab().Strings(ngram));
  }
  Rng rng(seed);
  auto words = m.PredictableWords();
  for (size_t i = 0; i < random; ++i) {
    Words h;
    size_t len = 1 + rng.Index(m.order());
    for (size_t k = 0; k < len; ++k) h.push_back(m.vocab().Word(words[rng.Index(words.size())]));
    out.push_back(h);
  }
  return out;
}

void ExpectSameDistributions(const NGramModel& a, const NGramModel& b, double tol) {
  for (const auto& h : QueryHistories(a, 200, 3)) {
    for (WordId id : a.PredictableWords()) {
      const auto& w = a.vocab().Word(id);
      ASSERT_NEAR(Prob(a, w, h), Prob(b, w, h), tol) << w << " | " << Join(h, " ");
    }
  }
}

TEST(Interpolate, SingleComponentIsIdentity) {
  NGramModel m = Train(LoadCorpus(DataPath("lm_weather.txt")), 3);
  InterpolationComponent only{&m, 1.0};
  ExpectSameDistributions(m, Interpolate(std::span(&only, 1)), 1e-9);
}

TEST(Interpolate, IdenticalComponentsAreIdempotent) {
  NGramModel m = Train(LoadCorpus(DataPath("lm_music.txt")), 3);
  std::vector<NGramModel> two = {m, m};
  ExpectSameDistributions(m, InterpolateEqual(two), 1e-9);
}

TEST(Interpolate, DisjointVocabularies) {
  NGramModel a = Train(Lines({"x y", "y x x"}), 2);
  NGramModel b = Train(Lines({"p q", "q q p"}), 2);
  std::vector<NGramModel> models = {a, b};
  NGramModel mix = InterpolateEqual(models);
  for (const char* w : {"x", "y"}) EXPECT_NEAR(Prob(mix, w, {}), 0.5 * Prob(a, w, {}), 1e-12);
  for (const char* w : {"p", "q"}) EXPECT_NEAR(Prob(mix, w, {}), 0.5 * Prob(b, w, {}), 1e-12);
  EXPECT_LT(MaxNormalizationError(mix), 1e-9);
}

TEST(Interpolate, LinearOnExplicitNGrams) {
  NGramModel a = Train(LoadCorpus(DataPath("lm_weather.txt")), 3);
  NGramModel b = Train(LoadCorpus(DataPath("lm_mixed.txt")), 3);
  std::vector<InterpolationComponent> comps = {{&a, 0.3}, {&b, 0.7}};
  NGramModel mix = Interpolate(comps);
  size_t checked = 0;
  for (int k = 1; k <= mix.order(); ++k) {
    for (const auto& [ngram, e] : mix.Entries(k)) {
      Words g = mix.vocab().Strings(ngram);
      if (g.back() == "<s>") continue;
      Words h(g.begin(), g.end() - 1);
      // Words outside a component's vocabulary get zero from it.
      auto component = [&](const NGramModel& m) {
        return m.vocab().Contains(g.back()) ? Prob(m, g.back(), h) : 0.0;
      };
      ASSERT_NEAR(std::exp(e.log_prob), 0.3 * component(a) + 0.7 * component(b), 1e-9)
          << Join(g, " ");
      ++checked;
    }
  }
  EXPECT_GT(checked, 100u);
  EXPECT_LT(MaxNormalizationError(mix), 1e-9);
}

TEST(Interpolate, Errors) {
  NGramModel a = Train(Lines({"x y"}), 2);
  NGramModel b = Train(Lines({"x y"}), 3);
  EXPECT_THROW(Interpolate({}), Error);
  std::vector<InterpolationComponent> bad_sum = {{&a, 0.5}, {&a, 0.4}};
  EXPECT_THROW(Interpolate(bad_sum), Error);
  std::vector<InterpolationComponent> negative = {{&a, 1.5}, {&a, -0.5}};
  EXPECT_THROW(Interpolate(negative), Error);
  std::vector<InterpolationComponent> orders = {{&a, 0.5}, {&b, 0.5}};
  EXPECT_THROW(Interpolate(orders), Error);
  std::vector<InterpolationComponent> null_model = {{nullptr, 1.0}};
  EXPECT_THROW(Interpolate(null_model), Error);
}

// ---------------------------------------------------------------------------
// ARPA

TEST(Arpa, RoundTrip) {
  NGramModel m = Train(Lines({"play some music", "play some jazz", "tune into the game"}), 3);
  std::stringstream ss;
  WriteArpa(m, ss);
  NGramModel back = ReadArpa(ss);
  EXPECT_EQ(back.order(), 3);
  EXPECT_EQ(back.NumEntries(), m.NumEntries());
  for (const auto& h : QueryHistories(m, 100, 5)) {
    for (WordId id : m.PredictableWords()) {
      const auto& w = m.vocab().Word(id);
      ASSERT_NEAR(back.LogProb(w, h), m.LogProb(w, h), 1e-9);
    }
  }
}

TEST(Arpa, DeterministicText) {
  Corpus c = LoadCorpus(DataPath("lm_mixed.txt"));
  std::ostringstream a, b;
  WriteArpa(Train(c, 4), a);
  WriteArpa(Train(c, 4), b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Arpa, HandWrittenBigramFixture) {
  NGramModel m = ReadArpa(DataPath("bigram.arpa"));
  const double ln10 = std::log(10.0);
  EXPECT_NEAR(m.LogProb("a", Words{"<s>"}), -0.30103 * ln10, 1e-12);
  EXPECT_NEAR(m.LogProb("b", Words{"a"}), -0.1249387 * ln10, 1e-12);
  // Unseen bigrams back off through the history's weight.
  EXPECT_NEAR(m.LogProb("b", Words{"<s>"}), (-0.30103 - 0.5228787) * ln10, 1e-12);
  EXPECT_NEAR(m.LogProb("a", Words{"b"}), (-0.2218487 - 0.6989700) * ln10, 1e-12);
  EXPECT_NEAR(m.LogProb("<unk>", Words{"a"}), (-0.1760913 - 1.0) * ln10, 1e-12);
  EXPECT_NEAR(m.LogProb("zebra", Words{"a"}), (-0.1760913 - 1.0) * ln10, 1e-12);
  EXPECT_NEAR(m.LogProb("</s>", Words{}), -0.6989700 * ln10, 1e-12);
}

TEST(Arpa, HeaderCountsMustMatch) {
  std::istringstream is(
      "\\data\\\nngram 1=3\n\n\\1-grams:\n-1\t</s>\n-1\ta\n\n\\end\\\n");
  EXPECT_THROW(ReadArpa(is), Error);
}

TEST(Arpa, MalformedInputs) {
  std::istringstream no_data("ngram 1=1\n");
  EXPECT_THROW(ReadArpa(no_data), Error);
  std::istringstream no_end("\\data\\\nngram 1=1\n\n\\1-grams:\n-1\ta\n");
  EXPECT_THROW(ReadArpa(no_end), Error);
  std::istringstream bad_number("\\data\\\nngram 1=1\n\n\\1-grams:\nx\ta\n\n\\end\\\n");
  EXPECT_THROW(ReadArpa(bad_number), Error);
  std::istringstream wrong_length(
      "\\data\\\nngram 1=1\nngram 2=1\n\n\\1-grams:\n-1\ta\t0\n\n\\2-grams:\n-1\ta\n\n\\end\\\n");
  EXPECT_THROW(ReadArpa(wrong_length), Error);
  EXPECT_THROW(ReadArpa(std::string("/nonexistent/model.arpa")), Error);
}

// ---------------------------------------------------------------------------
// Pruning

TEST(Prune, ThresholdOneIsIdentity) {
  Corpus c = LoadCorpus(DataPath("lm_weather.txt"));
  CountTable counts = CountNGrams(c, 4);
  NGramModel m = EstimateKatz(counts);
  NGramModel p = PruneModel(m, counts, PruneOptions{1, 0});
  std::ostringstream a, b;
  WriteArpa(m, a);
  WriteArpa(p, b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(Prune, RemovingAllFourGramsFallsBackToTrigrams) {
  Corpus c = LoadCorpus(DataPath("lm_music.txt"));
  CountTable counts = CountNGrams(c, 4);
  NGramModel m = EstimateKatz(counts);
  NGramModel p = PruneModel(m, counts, PruneOptions{1'000'000, 0});
  EXPECT_TRUE(p.Entries(4).empty());
  // Orders 1-3 of a 4-gram Katz model equal a trigram Katz model on the same
  // counts, so every query must now agree with the trigram model.
  NGramModel tri = Train(c, 3);
  for (const auto& h : QueryHistories(m, 300, 11)) {
    for (WordId id : m.PredictableWords()) {
      const auto& w = m.vocab().Word(id);
      ASSERT_NEAR(p.LogProb(w, h), tri.LogProb(w, h), 1e-12) << w << " | " << Join(h, " ");
    }
  }
  EXPECT_LT(MaxNormalizationError(p), 1e-9);
}

TEST(Prune, PerplexityDoesNotImproveOnTrainingText) {
  // Desk-scale text. On toy corpora Good-Turing discounts singleton 4-grams so
  // heavily that their backed-off estimate can exceed the explicit one, and
  // count pruning then lowers training perplexity.
  Corpus c = GenerateSuite(SynthOptions{}).general;
  CountTable counts = CountNGrams(c, 4);
  NGramModel m = EstimateKatz(counts);
  for (int64_t min_count : {3, 5}) {
    NGramModel p = PruneModel(m, counts, PruneOptions{min_count, 0});
    EXPECT_LT(p.NumEntries(), m.NumEntries());
    EXPECT_GE(Perplexity(p, c), Perplexity(m, c)) << "min_count " << min_count;
  }
}

TEST(Prune, PrunedFixturesStayNormalized) {
  for (const char* name : {"lm_weather.txt", "lm_music.txt", "lm_mixed.txt"}) {
    Corpus c = LoadCorpus(DataPath(name));
    CountTable counts = CountNGrams(c, 4);
    NGramModel p = PruneModel(EstimateKatz(counts), counts, PruneOptions{2, 0});
    EXPECT_LT(MaxNormalizationError(p), 1e-9) << name;
  }
}

TEST(Prune, EntryBudget) {
  Corpus c = LoadCorpus(DataPath("lm_mixed.txt"));
  CountTable counts = CountNGrams(c, 4);
  NGramModel m = EstimateKatz(counts);
  size_t budget = m.Entries(1).size() + 20;
  NGramModel p = PruneModel(m, counts, PruneOptions{1, budget});
  EXPECT_LE(p.NumEntries(), budget);
  EXPECT_LT(MaxNormalizationError(p), 1e-9);
  // Every query stays defined.
  for (const auto& h : QueryHistories(m, 100, 13)) {
    for (WordId id : m.PredictableWords()) {
      EXPECT_TRUE(std::isfinite(p.LogProb(m.vocab().Word(id), h)));
    }
  }
  EXPECT_THROW(PruneModel(m, counts, PruneOptions{1, 3}), Error);
}

}  // namespace
}  // namespace biasfst
