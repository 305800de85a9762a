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

#include <algorithm>

#include "biasfst/common.h"
#include "biasfst/rescore.h"

namespace biasfst {

NBestList RescoreNBest(const NBestList& nbest, const RescoreConfig& config) {
  if (nbest.hyps.empty()) throw Error("cannot rescore an empty n-best list");
  if (!(config.alpha >= 0.0)) throw Error("rescoring weight alpha must be >= 0");
  if (config.alpha != 0.0 && config.scorer == nullptr) {
    throw Error("rescoring with alpha > 0 needs a scorer");
  }
  NBestList out = nbest;
  for (auto& h : out.hyps) {
    double lm = 0.0;
    if (config.alpha != 0.0) lm = config.alpha * config.scorer->Score(h.words);
    h.rescore_total = h.total + lm + config.word_reward * static_cast<double>(h.words.size());
  }
  std::stable_sort(out.hyps.begin(), out.hyps.end(), [](const Hypothesis& a, const Hypothesis& b) {
    if (*a.rescore_total != *b.rescore_total) return *a.rescore_total > *b.rescore_total;
    return a.tokens < b.tokens;
  });
  return out;
}

}  // namespace biasfst
