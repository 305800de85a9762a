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
#include <cmath>

#include "biasfst/common.h"
#include "biasfst/decoder.h"

namespace biasfst {

SurrogateChannel::SurrogateChannel(const SubwordInventory& inv, const NGramModel& prior)
    : inv_(inv), prior_(prior), token_ids_(inv.size(), -1) {
  for (size_t u = 0; u < inv.size(); ++u) {
    std::string token = inv.Token(static_cast<int>(u));
    if (prior.vocab().Contains(token)) {
      token_ids_[u] = prior.vocab().Find(token);
    } else {
      ++unknown_units_;
    }
  }
}

std::vector<double> SurrogateChannel::PriorDistribution(std::span<const int> history) const {
  size_t keep = std::min<size_t>(history.size(), prior_.order() - 1);
  NGram context;
  if (keep < static_cast<size_t>(prior_.order() - 1)) context.push_back(Vocabulary::kBosId);
  for (size_t i = history.size() - keep; i < history.size(); ++i) {
    WordId id = token_ids_.at(history[i]);
    context.push_back(id < 0 ? Vocabulary::kUnkId : id);
  }
  std::vector<double> dist(inv_.size());
  double unk_share = 0.0;
  if (unknown_units_ > 0) {
    unk_share = std::exp(prior_.LogProb(Vocabulary::kUnkId, context)) /
                static_cast<double>(unknown_units_);
  }
  double z = 0.0;
  for (size_t u = 0; u < inv_.size(); ++u) {
    dist[u] = token_ids_[u] < 0 ? unk_share : std::exp(prior_.LogProb(token_ids_[u], context));
    z += dist[u];
  }
  for (auto& p : dist) p /= z;
  return dist;
}

PosteriorSequence SurrogateChannel::Emit(std::span<const std::string> reference,
                                         const SurrogateOptions& options,
                                         const std::string& utterance_id) const {
  if (!(options.beta >= 0.0 && options.beta < 1.0)) throw Error("surrogate beta must be in [0, 1)");
  if (!(options.epsilon >= 0.0)) throw Error("surrogate epsilon must be >= 0");
  if (!(options.jitter >= 0.0 && options.jitter < 1.0)) {
    throw Error("surrogate jitter must be in [0, 1)");
  }
  std::vector<int> truth = SegmentSentence(reference, inv_);
  PosteriorSequence out;
  out.utterance_id = utterance_id;
  out.beta = options.beta;
  out.epsilon = options.epsilon;
  out.seed = options.seed;
  out.steps.reserve(truth.size());
  Rng rng(options.seed);
  std::span<const int> truth_span(truth);
  for (size_t i = 0; i < truth.size(); ++i) {
    double beta = options.beta * (1.0 + options.jitter * (2.0 * rng.Uniform() - 1.0));
    beta = std::clamp(beta, 0.0, 1.0 - 1e-9);
    std::vector<double> q(inv_.size());
    if (beta > 0.0) {
      auto prior = PriorDistribution(truth_span.first(i));
      for (size_t u = 0; u < q.size(); ++u) q[u] = beta * prior[u];
    }
    q[truth[i]] += 1.0 - beta;
    double z = 0.0;
    for (auto& p : q) {
      p += options.epsilon;
      z += p;
    }
    for (auto& p : q) p = std::log(p / z);
    out.steps.push_back(std::move(q));
  }
  return out;
}

PosteriorSequence SurrogateEmit(std::span<const std::string> reference,
                                const SubwordInventory& inv, const NGramModel& prior,
                                const SurrogateOptions& options) {
  return SurrogateChannel(inv, prior).Emit(reference, options);
}

NGramModel TrainSubwordPrior(const Corpus& corpus, const SubwordInventory& inv, int order,
                             const KatzOptions& katz) {
  Corpus units;
  units.sentences.reserve(corpus.sentences.size());
  for (const auto& s : corpus.sentences) {
    Sentence tokens;
    for (int id : SegmentSentence(s, inv)) tokens.push_back(inv.Token(id));
    units.sentences.push_back(std::move(tokens));
  }
  NGramModel prior = EstimateKatz(CountNGrams(units, order), katz);
  prior.set_id("subword-prior");
  return prior;
}

}  // namespace biasfst
