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

#ifndef BIASFST_RESCORE_H_
#define BIASFST_RESCORE_H_

#include <span>
#include <string>
#include <vector>

#include "biasfst/decoder.h"
#include "biasfst/ngram_lm.h"

namespace biasfst {

// Anything that assigns a log-probability to a whole word sequence.
class SentenceScorer {
 public:
  virtual ~SentenceScorer() = default;
  virtual double Score(std::span<const std::string> words) const = 0;
};

class NGramSentenceScorer : public SentenceScorer {
 public:
  explicit NGramSentenceScorer(const NGramModel& model) : model_(model) {}
  double Score(std::span<const std::string> words) const override {
    return model_.SentenceLogProb(words);
  }

 private:
  const NGramModel& model_;
};

struct RescoreConfig {
  double alpha = 0.0;
  double word_reward = 0.0;
  const SentenceScorer* scorer = nullptr;
};

// total' = total + alpha * log P(words) + word_reward * |words|, where total
// is the first-pass model_score + lambda * fusion_score. Hypotheses are
// stably re-sorted on total' with the token-sequence tie-break and get
// rescore_total set.
NBestList RescoreNBest(const NBestList& nbest, const RescoreConfig& config);

}  // namespace biasfst

#endif  // BIASFST_RESCORE_H_
