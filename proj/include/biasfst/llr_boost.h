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

#ifndef BIASFST_LLR_BOOST_H_
#define BIASFST_LLR_BOOST_H_

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "biasfst/ngram_lm.h"

namespace biasfst {

using WordSeq = std::vector<std::string>;

// Boost scores live on a dyadic grid of 2^-19 so that sums and differences of
// a few thousand scores are exact in double precision. The grid step is
// below half a unit of the sixth decimal, so 6-decimal text round-trips.
inline constexpr double kBoostQuantum = 0x1.0p-19;
double QuantizeBoost(double score);

struct BoostTable {
  double threshold = 0.0;
  // n-gram (may start with <s>, may end with </s>) -> clipped log-ratio.
  std::map<WordSeq, double> entries;
  std::string gen_id;
  std::string ood_id;

  size_t MaxOrder() const;
  double MaxScore() const;
};

// log p_ood(w | h) - log p_gen(w | h) for ngram = h + w, both sides resolved
// with backoff.
double LlrScore(const NGramModel& gen, const NGramModel& ood,
                std::span<const std::string> ngram);

// Scores every explicit n-gram of the OOD model and keeps the ones whose
// (quantized) log-ratio exceeds the threshold.
BoostTable BuildBoostTable(const NGramModel& gen, const NGramModel& ood,
                           double threshold, int jobs = 1);

// Reference scorer: for each position of <s> sentence </s>, adds the score
// of the longest table n-gram ending there.
double SentenceBoostOracle(const BoostTable& table, std::span<const std::string> sentence);

void WriteBoostTable(const BoostTable& table, std::ostream& os);
void WriteBoostTable(const BoostTable& table, const std::string& path);
BoostTable ReadBoostTable(std::istream& is);
BoostTable ReadBoostTable(const std::string& path);

}  // namespace biasfst

#endif  // BIASFST_LLR_BOOST_H_
