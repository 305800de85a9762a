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

#ifndef BIASFST_NGRAM_LM_H_
#define BIASFST_NGRAM_LM_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "biasfst/corpus.h"

namespace biasfst {

using WordId = int32_t;
using NGram = std::vector<WordId>;

// Natural-log stand-in for log(0); equals ARPA's -99 in log10 units.
inline constexpr double kLogZero = -99.0 * 2.302585092994045684;

inline constexpr int kMaxOrder = 4;

class Vocabulary {
 public:
  static constexpr WordId kUnkId = 0;
  static constexpr WordId kBosId = 1;
  static constexpr WordId kEosId = 2;

  Vocabulary();

  WordId Add(std::string_view word);
  // Unknown words map to kUnkId.
  WordId Find(std::string_view word) const;
  bool Contains(std::string_view word) const;
  const std::string& Word(WordId id) const { return words_.at(id); }
  size_t size() const { return words_.size(); }

  NGram Map(std::span<const std::string> words) const;
  std::vector<std::string> Strings(std::span<const WordId> ids) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, WordId> index_;
};

// Lexicographic order on id sequences, usable with spans for lookups.
struct NGramLess {
  using is_transparent = void;
  bool operator()(std::span<const WordId> a, std::span<const WordId> b) const;
};

struct CountTable {
  int order = 0;
  Vocabulary vocab;
  // counts[k - 1] holds k-grams. <s> appears only as a history word.
  std::vector<std::map<NGram, int64_t, NGramLess>> counts;

  int64_t Count(std::span<const WordId> ngram) const;
};

CountTable CountNGrams(const Corpus& corpus, int order);

// Backoff n-gram model. Log-probabilities and backoff weights are natural log.
class NGramModel {
 public:
  struct Entry {
    double log_prob = kLogZero;
    double backoff = 0.0;
  };
  using Table = std::map<NGram, Entry, NGramLess>;

  NGramModel(int order, Vocabulary vocab);

  int order() const { return order_; }
  const Vocabulary& vocab() const { return vocab_; }
  const std::string& id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }

  // log p(word | history); histories longer than order-1 are truncated to the
  // most recent words.
  double LogProb(WordId word, std::span<const WordId> history) const;
  double LogProb(std::string_view word, std::span<const std::string> history) const;
  // Sum over the words and </s>, starting from the <s> context.
  double SentenceLogProb(std::span<const std::string> sentence) const;

  const Entry* Find(std::span<const WordId> ngram) const;
  // Inserts or replaces an entry; no consistency checks.
  void SetEntry(std::span<const WordId> ngram, double log_prob, double backoff = 0.0);
  void SetEntry(std::span<const std::string> ngram, double log_prob, double backoff = 0.0);
  bool Erase(std::span<const WordId> ngram);

  // Entries of length k (1..order).
  const Table& Entries(int k) const { return tables_.at(k - 1); }
  size_t NumEntries() const;

  // Ids over which conditional distributions are defined: everything but <s>.
  std::vector<WordId> PredictableWords() const;

  // Recomputes every backoff weight, lowest order first, so that each context
  // distribution sums to one given the stored probabilities.
  void RecomputeBackoffs();

 private:
  int order_;
  Vocabulary vocab_;
  std::vector<Table> tables_;
  std::string id_;
};

struct KatzOptions {
  // Good-Turing discounting applies to counts <= discount_cutoff.
  int discount_cutoff = 5;
};

// Good-Turing discount coefficients d_1..d_cutoff for one order, indexed by
// count (index 0 unused). Degenerate buckets get 1.0.
std::vector<double> GoodTuringDiscounts(const std::map<int64_t, int64_t>& count_of_counts,
                                        int cutoff, int order);

NGramModel EstimateKatz(const CountTable& counts, const KatzOptions& options = {});

struct InterpolationComponent {
  const NGramModel* model = nullptr;
  double weight = 0.0;
};

// Static mixture over the union of component n-grams. Words outside a
// component's vocabulary get probability zero from that component.
NGramModel Interpolate(std::span<const InterpolationComponent> components);

// Equal-weight mixture helper.
NGramModel InterpolateEqual(std::span<const NGramModel> models);

struct PruneOptions {
  // Highest-order entries with a count below this are removed.
  int64_t min_count = 1;
  // When nonzero, entries are removed from the highest order down (lowest
  // count first) until the model holds at most this many entries.
  size_t max_entries = 0;
};

NGramModel PruneModel(const NGramModel& model, const CountTable& counts,
                      const PruneOptions& options);

double Perplexity(const NGramModel& model, const Corpus& corpus);

void WriteArpa(const NGramModel& model, std::ostream& os);
void WriteArpa(const NGramModel& model, const std::string& path);
NGramModel ReadArpa(std::istream& is);
NGramModel ReadArpa(const std::string& path);

}  // namespace biasfst

#endif  // BIASFST_NGRAM_LM_H_
