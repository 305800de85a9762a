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

#ifndef BIASFST_DECODER_H_
#define BIASFST_DECODER_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biasfst/boost_fst.h"
#include "biasfst/corpus.h"
#include "biasfst/ngram_lm.h"

namespace biasfst {

// Per-step log-posteriors over subword units, standing in for p(y|x).
struct PosteriorSequence {
  std::vector<std::vector<double>> steps;
  std::string utterance_id;
  double beta = 0.0;
  double epsilon = 0.0;
  uint64_t seed = 0;

  size_t num_units() const { return steps.empty() ? 0 : steps[0].size(); }
};

struct SurrogateOptions {
  // Weight of the internal-LM prior in each emission, in [0, 1).
  double beta = 0.0;
  // Additive floor before normalization.
  double epsilon = 1e-3;
  // Per-step relative jitter on beta: beta_i = beta * (1 + jitter * U(-1, 1)).
  double jitter = 0.2;
  uint64_t seed = 0;
};

// Seeded emission channel. Step i puts (1 - beta_i) on the true unit and
// beta_i on the subword prior given the preceding true units, plus epsilon.
class SurrogateChannel {
 public:
  // `prior` is a unit-level model whose tokens are SubwordInventory::Token.
  SurrogateChannel(const SubwordInventory& inv, const NGramModel& prior);

  PosteriorSequence Emit(std::span<const std::string> reference,
                         const SurrogateOptions& options,
                         const std::string& utterance_id = "") const;

  // Prior distribution over inventory units after a history of unit ids.
  std::vector<double> PriorDistribution(std::span<const int> history) const;

 private:
  const SubwordInventory& inv_;
  const NGramModel& prior_;
  std::vector<WordId> token_ids_;  // unit id -> prior vocabulary id
  size_t unknown_units_ = 0;
};

PosteriorSequence SurrogateEmit(std::span<const std::string> reference,
                                const SubwordInventory& inv, const NGramModel& prior,
                                const SurrogateOptions& options);

// Trains the unit-level prior from word text segmented by `inv`.
NGramModel TrainSubwordPrior(const Corpus& corpus, const SubwordInventory& inv, int order,
                             const KatzOptions& katz = {});

struct Hypothesis {
  std::vector<int> tokens;
  double model_score = 0.0;
  // Boost accumulated before scaling by lambda.
  double fusion_score = 0.0;
  double total = 0.0;
  FstCursor cursor;
  std::vector<std::string> words;
  std::optional<double> rescore_total;
};

// Descending total, then ascending token sequence.
bool RanksBefore(const Hypothesis& a, const Hypothesis& b);

struct NBestList {
  std::string utterance_id;
  std::vector<Hypothesis> hyps;
};

struct BeamOptions {
  size_t beam = 8;
  size_t nbest = 8;
  double lambda = 0.0;
  // Null disables fusion.
  const BoostingFst* fst = nullptr;
};

// Step-synchronous beam search with shallow fusion: every expansion adds
// log q(v) to the model score and the cursor delta to the fusion score; the
// ranking key is model_score + lambda * fusion_score. The last step forces
// word completion and reads </s> before the final ranking. The returned list
// keeps the best hypothesis per distinct word sequence.
NBestList BeamSearch(const PosteriorSequence& posteriors, const SubwordInventory& inv,
                     const BeamOptions& options);

void WriteNBest(std::span<const NBestList> lists, std::ostream& os);
void WriteNBest(std::span<const NBestList> lists, const std::string& path);
std::vector<NBestList> ReadNBest(std::istream& is);
std::vector<NBestList> ReadNBest(const std::string& path);

}  // namespace biasfst

#endif  // BIASFST_DECODER_H_
