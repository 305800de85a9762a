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
#include <cctype>
#include <fstream>
#include <limits>

#include "biasfst/common.h"
#include "biasfst/eval.h"

namespace biasfst {

double WerBreakdown::wer() const {
  if (reference_words == 0) return 0.0;
  return static_cast<double>(errors()) / static_cast<double>(reference_words);
}

WerBreakdown& WerBreakdown::operator+=(const WerBreakdown& other) {
  substitutions += other.substitutions;
  deletions += other.deletions;
  insertions += other.insertions;
  reference_words += other.reference_words;
  return *this;
}

WerBreakdown ComputeWer(std::span<const std::string> reference,
                        std::span<const std::string> hypothesis) {
  if (reference.empty()) throw Error("WER needs a non-empty reference");
  const size_t n = reference.size();
  const size_t m = hypothesis.size();
  std::vector<std::vector<int>> d(n + 1, std::vector<int>(m + 1));
  for (size_t i = 0; i <= n; ++i) d[i][0] = static_cast<int>(i);
  for (size_t j = 0; j <= m; ++j) d[0][j] = static_cast<int>(j);
  for (size_t i = 1; i <= n; ++i) {
    for (size_t j = 1; j <= m; ++j) {
      int sub = d[i - 1][j - 1] + (reference[i - 1] == hypothesis[j - 1] ? 0 : 1);
      d[i][j] = std::min({sub, d[i][j - 1] + 1, d[i - 1][j] + 1});
    }
  }
  WerBreakdown out;
  out.reference_words = static_cast<int64_t>(n);
  size_t i = n, j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      int cost = reference[i - 1] == hypothesis[j - 1] ? 0 : 1;
      if (d[i - 1][j - 1] + cost == d[i][j]) {
        out.substitutions += cost;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && d[i][j - 1] + 1 == d[i][j]) {
      ++out.insertions;
      --j;
    } else {
      ++out.deletions;
      --i;
    }
  }
  return out;
}

size_t OracleIndex(std::span<const std::string> reference, const NBestList& nbest) {
  if (nbest.hyps.empty()) throw Error("oracle WER over an empty n-best list");
  size_t best = 0;
  int64_t best_errors = std::numeric_limits<int64_t>::max();
  for (size_t k = 0; k < nbest.hyps.size(); ++k) {
    int64_t e = ComputeWer(reference, nbest.hyps[k].words).errors();
    if (e < best_errors) {
      best_errors = e;
      best = k;
    }
  }
  return best;
}

WerBreakdown OracleWer(std::span<const std::string> reference, const NBestList& nbest) {
  return ComputeWer(reference, nbest.hyps[OracleIndex(reference, nbest)].words);
}

double Werr(double baseline_wer, double new_wer) {
  if (!(baseline_wer > 0.0)) throw Error("WERR needs a positive baseline WER");
  return 100.0 * (baseline_wer - new_wer) / baseline_wer;
}

double SafeWerr(double baseline_wer, double new_wer) {
  if (baseline_wer > 0.0) return Werr(baseline_wer, new_wer);
  if (new_wer == 0.0) return 0.0;
  return -std::numeric_limits<double>::infinity();
}

Testset ReadTestset(const std::string& path, const std::string& name) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read testset " + path);
  Testset out;
  out.name = name;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(path + ":" + std::to_string(lineno) + ": expected `id<TAB>reference`");
    }
    std::string text = line.substr(tab + 1);
    for (auto& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    auto words = SplitWhitespace(text);
    if (words.empty()) throw Error(path + ":" + std::to_string(lineno) + ": empty reference");
    out.ids.push_back(line.substr(0, tab));
    out.references.push_back(std::move(words));
  }
  if (out.ids.empty()) throw Error("testset " + path + " is empty");
  return out;
}

void WriteTestset(const Testset& testset, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write testset " + path);
  for (size_t i = 0; i < testset.size(); ++i) {
    os << testset.ids[i] << '\t' << Join(testset.references[i], " ") << '\n';
  }
  if (!os) throw Error("write failed for " + path);
}

WerBreakdown CorpusWer(const Testset& testset, std::span<const NBestList> lists,
                       bool use_rescore) {
  if (lists.size() != testset.size()) throw Error("n-best count does not match the testset");
  WerBreakdown total;
  for (size_t i = 0; i < lists.size(); ++i) {
    const auto& hyps = lists[i].hyps;
    static const std::vector<std::string> kEmpty;
    const std::vector<std::string>* words = &kEmpty;
    if (!hyps.empty()) {
      size_t best = 0;
      if (use_rescore) {
        // Lists written by RescoreNBest are already sorted; anything else is
        // ranked here by rescore_total, falling back to the first-pass total.
        for (size_t k = 1; k < hyps.size(); ++k) {
          double a = hyps[k].rescore_total.value_or(hyps[k].total);
          double b = hyps[best].rescore_total.value_or(hyps[best].total);
          if (a > b) best = k;
        }
      }
      words = &hyps[best].words;
    }
    total += ComputeWer(testset.references[i], *words);
  }
  return total;
}

WerBreakdown CorpusOracleWer(const Testset& testset, std::span<const NBestList> lists) {
  if (lists.size() != testset.size()) throw Error("n-best count does not match the testset");
  WerBreakdown total;
  for (size_t i = 0; i < lists.size(); ++i) {
    total += OracleWer(testset.references[i], lists[i]);
  }
  return total;
}

}  // namespace biasfst
