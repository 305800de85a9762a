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
#include <set>

#include "biasfst/common.h"
#include "biasfst/ngram_lm.h"

namespace biasfst {

NGramModel Interpolate(std::span<const InterpolationComponent> components) {
  if (components.empty()) throw Error("interpolation needs at least one component");
  int order = 0;
  double weight_sum = 0.0;
  for (const auto& c : components) {
    if (c.model == nullptr) throw Error("interpolation component without a model");
    if (!(c.weight >= 0.0)) throw Error("interpolation weights must be nonnegative");
    if (order == 0) order = c.model->order();
    if (c.model->order() != order) {
      throw Error("interpolation components have mismatched orders (" +
                  std::to_string(order) + " vs " + std::to_string(c.model->order()) + ")");
    }
    weight_sum += c.weight;
  }
  if (std::abs(weight_sum - 1.0) > 1e-12) {
    throw Error("interpolation weights must sum to 1");
  }

  std::set<std::string> words;
  for (const auto& c : components) {
    const auto& v = c.model->vocab();
    for (WordId id = 0; id < static_cast<WordId>(v.size()); ++id) words.insert(v.Word(id));
  }
  Vocabulary vocab;
  for (const auto& w : words) vocab.Add(w);

  // Union of explicit n-grams, keyed by the merged vocabulary.
  std::vector<std::set<NGram, NGramLess>> ngrams(order);
  for (const auto& c : components) {
    for (int k = 1; k <= order; ++k) {
      for (const auto& [ngram, entry] : c.model->Entries(k)) {
        NGram mapped;
        for (WordId id : ngram) mapped.push_back(vocab.Find(c.model->vocab().Word(id)));
        ngrams[k - 1].insert(std::move(mapped));
      }
    }
  }

  NGramModel mixed(order, vocab);
  std::string id = "interp(";
  for (size_t i = 0; i < components.size(); ++i) {
    if (i) id += ",";
    id += components[i].model->id();
  }
  mixed.set_id(id + ")");

  for (int k = 1; k <= order; ++k) {
    for (const auto& ngram : ngrams[k - 1]) {
      if (ngram.back() == Vocabulary::kBosId) {
        mixed.SetEntry(ngram, kLogZero);
        continue;
      }
      auto strings = vocab.Strings(ngram);
      const std::string& word = strings.back();
      std::span<const std::string> history(strings.data(), strings.size() - 1);
      double p = 0.0;
      for (const auto& c : components) {
        if (c.weight == 0.0 || !c.model->vocab().Contains(word)) continue;
        p += c.weight * std::exp(c.model->LogProb(word, history));
      }
      mixed.SetEntry(ngram, p > 0.0 ? std::log(p) : kLogZero);
    }
  }
  mixed.RecomputeBackoffs();
  return mixed;
}

NGramModel InterpolateEqual(std::span<const NGramModel> models) {
  std::vector<InterpolationComponent> components;
  for (const auto& m : models) {
    components.push_back({&m, 1.0 / static_cast<double>(models.size())});
  }
  return Interpolate(components);
}

}  // namespace biasfst
