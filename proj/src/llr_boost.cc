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

#include "biasfst/llr_boost.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "biasfst/common.h"

namespace biasfst {

double QuantizeBoost(double score) {
  if (!std::isfinite(score)) return score;
  return std::nearbyint(score / kBoostQuantum) * kBoostQuantum;
}

size_t BoostTable::MaxOrder() const {
  size_t k = 0;
  for (const auto& [ngram, score] : entries) k = std::max(k, ngram.size());
  return k;
}

double BoostTable::MaxScore() const {
  double m = 0.0;
  for (const auto& [ngram, score] : entries) m = std::max(m, score);
  return m;
}

double LlrScore(const NGramModel& gen, const NGramModel& ood,
                std::span<const std::string> ngram) {
  if (ngram.empty()) throw Error("LLR of an empty n-gram");
  const std::string& word = ngram.back();
  auto history = ngram.first(ngram.size() - 1);
  return ood.LogProb(word, history) - gen.LogProb(word, history);
}

BoostTable BuildBoostTable(const NGramModel& gen, const NGramModel& ood, double threshold,
                           int jobs) {
  if (std::isnan(threshold)) throw Error("boost threshold must be a number");
  if (ood.NumEntries() == 0) throw Error("OOD model has no n-grams to score");
  std::vector<WordSeq> candidates;
  for (int k = 1; k <= ood.order(); ++k) {
    for (const auto& [ngram, entry] : ood.Entries(k)) {
      WordId last = ngram.back();
      if (last == Vocabulary::kBosId || last == Vocabulary::kUnkId) continue;
      candidates.push_back(ood.vocab().Strings(ngram));
    }
  }
  std::vector<double> scores(candidates.size());
  ParallelFor(candidates.size(), jobs, [&](size_t i) {
    scores[i] = QuantizeBoost(LlrScore(gen, ood, candidates[i]));
  });
  BoostTable table;
  table.threshold = threshold;
  table.gen_id = gen.id();
  table.ood_id = ood.id();
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (scores[i] > threshold) table.entries.emplace(std::move(candidates[i]), scores[i]);
  }
  Log().info("boost table at T={}: {} of {} n-grams kept", threshold, table.entries.size(),
             candidates.size());
  return table;
}

double SentenceBoostOracle(const BoostTable& table, std::span<const std::string> sentence) {
  WordSeq padded;
  padded.reserve(sentence.size() + 2);
  padded.emplace_back(kBos);
  padded.insert(padded.end(), sentence.begin(), sentence.end());
  padded.emplace_back(kEos);
  const size_t max_order = table.MaxOrder();
  double total = 0.0;
  for (size_t end = 1; end < padded.size(); ++end) {
    size_t longest = std::min(max_order, end + 1);
    for (size_t len = longest; len >= 1; --len) {
      WordSeq ngram(padded.begin() + (end + 1 - len), padded.begin() + end + 1);
      auto it = table.entries.find(ngram);
      if (it != table.entries.end()) {
        total += it->second;
        break;
      }
    }
  }
  return total;
}

void WriteBoostTable(const BoostTable& table, std::ostream& os) {
  os << "#threshold=" << fmt::format("{}", table.threshold) << "\n";
  if (!table.gen_id.empty()) os << "#gen=" << table.gen_id << "\n";
  if (!table.ood_id.empty()) os << "#ood=" << table.ood_id << "\n";
  for (const auto& [ngram, score] : table.entries) {
    os << Join(ngram, " ") << '\t' << fmt::format("{:.6f}", score) << '\n';
  }
}

void WriteBoostTable(const BoostTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write boost table: " + path);
  WriteBoostTable(table, out);
}

BoostTable ReadBoostTable(std::istream& is) {
  BoostTable table;
  std::string line;
  bool have_threshold = false;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      auto eq = line.find('=');
      std::string key = line.substr(1, eq == std::string::npos ? std::string::npos : eq - 1);
      std::string value = eq == std::string::npos ? "" : line.substr(eq + 1);
      if (key == "threshold") {
        try {
          table.threshold = std::stod(value);
        } catch (const std::exception&) {
          throw Error("boost table: bad threshold '" + value + "'");
        }
        have_threshold = true;
      } else if (key == "gen") {
        table.gen_id = value;
      } else if (key == "ood") {
        table.ood_id = value;
      }
      continue;
    }
    auto tab = line.rfind('\t');
    if (tab == std::string::npos) {
      throw Error("boost table line " + std::to_string(line_no) + ": missing score column");
    }
    auto words = SplitWhitespace(std::string_view(line).substr(0, tab));
    if (words.empty()) {
      throw Error("boost table line " + std::to_string(line_no) + ": empty n-gram");
    }
    double score;
    try {
      score = std::stod(line.substr(tab + 1));
    } catch (const std::exception&) {
      throw Error("boost table line " + std::to_string(line_no) + ": bad score");
    }
    table.entries[words] = QuantizeBoost(score);
  }
  if (!have_threshold) throw Error("boost table: missing #threshold header");
  return table;
}

BoostTable ReadBoostTable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read boost table: " + path);
  return ReadBoostTable(in);
}

}  // namespace biasfst
