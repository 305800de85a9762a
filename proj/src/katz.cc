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

#include "biasfst/common.h"
#include "biasfst/ngram_lm.h"

namespace biasfst {

namespace {

// Smallest leftover mass accepted before the denominator is bumped by one
// count (the Doug Paul adjustment used by SRILM and the CMU toolkit).
constexpr double kMinLeftover = 3e-6;

double DiscountFor(const std::vector<double>& discounts, int64_t count) {
  return count < static_cast<int64_t>(discounts.size()) ? discounts[count] : 1.0;
}

}  // namespace

std::vector<double> GoodTuringDiscounts(const std::map<int64_t, int64_t>& count_of_counts,
                                        int cutoff, int order) {
  if (cutoff < 1) throw Error("discount cutoff must be >= 1");
  std::vector<double> d(cutoff + 1, 1.0);
  auto n = [&](int64_t r) -> double {
    auto it = count_of_counts.find(r);
    return it == count_of_counts.end() ? 0.0 : static_cast<double>(it->second);
  };
  if (n(1) == 0.0) {
    Log().warn("order {}: no singletons, Good-Turing discounting disabled", order);
    return d;
  }
  double common = (cutoff + 1) * n(cutoff + 1) / n(1);
  if (common >= 1.0) {
    Log().warn("order {}: count-of-counts too irregular, discounting disabled", order);
    return d;
  }
  for (int r = 1; r <= cutoff; ++r) {
    if (n(r) == 0.0) continue;  // no n-gram uses this bucket
    if (n(r + 1) == 0.0) {
      Log().warn("order {}: no n-grams with count {}, count {} left undiscounted", order,
                 r + 1, r);
      continue;
    }
    double coeff = ((r + 1) * n(r + 1) / (r * n(r)) - common) / (1.0 - common);
    if (!(coeff > 0.0 && coeff <= 1.0)) {
      Log().warn("order {}: discount {} for count {} out of range, left undiscounted",
                 order, coeff, r);
      continue;
    }
    d[r] = coeff;
  }
  return d;
}

NGramModel EstimateKatz(const CountTable& counts, const KatzOptions& options) {
  if (counts.counts.empty() || counts.counts[0].empty()) {
    throw Error("cannot estimate a model from empty counts");
  }
  NGramModel model(counts.order, counts.vocab);
  const size_t predictable = counts.vocab.size() - 1;

  std::vector<std::vector<double>> discounts;
  for (int k = 1; k <= counts.order; ++k) {
    std::map<int64_t, int64_t> coc;
    for (const auto& [ngram, c] : counts.counts[k - 1]) ++coc[c];
    discounts.push_back(GoodTuringDiscounts(coc, options.discount_cutoff, k));
  }

  // Unigrams: leftover mass goes to <unk>.
  {
    const auto& table = counts.counts[0];
    const auto& d = discounts[0];
    double total = 0.0;
    for (const auto& [ngram, c] : table) total += static_cast<double>(c);
    double explicit_mass = 0.0;
    for (;;) {
      explicit_mass = 0.0;
      for (const auto& [ngram, c] : table) explicit_mass += DiscountFor(d, c) * c / total;
      if (1.0 - explicit_mass >= kMinLeftover || table.size() >= predictable) break;
      Log().warn("no unigram mass left for <unk>; incrementing denominator");
      total += 1.0;
    }
    double unk_prob = std::max(0.0, 1.0 - explicit_mass);
    for (const auto& [ngram, c] : table) {
      double p = DiscountFor(d, c) * c / total;
      if (ngram[0] == Vocabulary::kUnkId) p += unk_prob;
      model.SetEntry(ngram, std::log(p));
    }
    if (!table.count(NGram{Vocabulary::kUnkId})) {
      model.SetEntry(NGram{Vocabulary::kUnkId}, unk_prob > 0 ? std::log(unk_prob) : kLogZero);
    }
    model.SetEntry(NGram{Vocabulary::kBosId}, kLogZero);
  }

  for (int k = 2; k <= counts.order; ++k) {
    const auto& table = counts.counts[k - 1];
    const auto& d = discounts[k - 1];
    auto it = table.begin();
    while (it != table.end()) {
      std::span<const WordId> prefix(it->first.data(), k - 1);
      auto group_end = it;
      double total = 0.0;
      size_t observed = 0;
      for (; group_end != table.end() &&
             std::equal(prefix.begin(), prefix.end(), group_end->first.begin());
           ++group_end) {
        total += static_cast<double>(group_end->second);
        ++observed;
      }
      for (;;) {
        double explicit_mass = 0.0;
        for (auto g = it; g != group_end; ++g) {
          explicit_mass += DiscountFor(d, g->second) * g->second / total;
        }
        if (1.0 - explicit_mass >= kMinLeftover || observed >= predictable) break;
        total += 1.0;
      }
      for (auto g = it; g != group_end; ++g) {
        model.SetEntry(g->first, std::log(DiscountFor(d, g->second) * g->second / total));
      }
      it = group_end;
    }
  }
  model.RecomputeBackoffs();
  return model;
}

}  // namespace biasfst
