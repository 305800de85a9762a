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
#include <array>
#include <cmath>
#include <set>

#include "biasfst/common.h"
#include "biasfst/ngram_lm.h"

namespace biasfst {

namespace {

constexpr size_t kMaxQueryOrder = 16;

}  // namespace

Vocabulary::Vocabulary() {
  Add(kUnk);
  Add(kBos);
  Add(kEos);
}

WordId Vocabulary::Add(std::string_view word) {
  auto [it, inserted] =
      index_.emplace(std::string(word), static_cast<WordId>(words_.size()));
  if (inserted) words_.emplace_back(word);
  return it->second;
}

WordId Vocabulary::Find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  return it == index_.end() ? kUnkId : it->second;
}

bool Vocabulary::Contains(std::string_view word) const {
  return index_.count(std::string(word)) > 0;
}

NGram Vocabulary::Map(std::span<const std::string> words) const {
  NGram out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(Find(w));
  return out;
}

std::vector<std::string> Vocabulary::Strings(std::span<const WordId> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (WordId id : ids) out.push_back(Word(id));
  return out;
}

bool NGramLess::operator()(std::span<const WordId> a, std::span<const WordId> b) const {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

int64_t CountTable::Count(std::span<const WordId> ngram) const {
  if (ngram.empty() || ngram.size() > counts.size()) return 0;
  const auto& table = counts[ngram.size() - 1];
  auto it = table.find(ngram);
  return it == table.end() ? 0 : it->second;
}

CountTable CountNGrams(const Corpus& corpus, int order) {
  if (order < 1 || order > kMaxOrder) {
    throw Error("n-gram order must be in 1.." + std::to_string(kMaxOrder) + ", got " +
                std::to_string(order));
  }
  if (corpus.sentences.empty()) throw Error("cannot count an empty corpus");
  CountTable table;
  table.order = order;
  std::set<std::string> words;
  for (const auto& s : corpus.sentences) words.insert(s.begin(), s.end());
  for (const auto& w : words) table.vocab.Add(w);
  table.counts.resize(order);
  NGram tokens;
  for (const auto& s : corpus.sentences) {
    tokens.assign(1, Vocabulary::kBosId);
    for (const auto& w : s) tokens.push_back(table.vocab.Find(w));
    tokens.push_back(Vocabulary::kEosId);
    for (size_t end = 1; end < tokens.size(); ++end) {
      for (int k = 1; k <= order && static_cast<size_t>(k) <= end + 1; ++k) {
        NGram ngram(tokens.begin() + (end + 1 - k), tokens.begin() + end + 1);
        ++table.counts[k - 1][std::move(ngram)];
      }
    }
  }
  return table;
}

NGramModel::NGramModel(int order, Vocabulary vocab)
    : order_(order), vocab_(std::move(vocab)), tables_(order) {
  if (order < 1 || order > static_cast<int>(kMaxQueryOrder)) {
    throw Error("unsupported model order " + std::to_string(order));
  }
}

const NGramModel::Entry* NGramModel::Find(std::span<const WordId> ngram) const {
  if (ngram.empty() || ngram.size() > tables_.size()) return nullptr;
  const auto& table = tables_[ngram.size() - 1];
  auto it = table.find(ngram);
  return it == table.end() ? nullptr : &it->second;
}

void NGramModel::SetEntry(std::span<const WordId> ngram, double log_prob, double backoff) {
  if (ngram.empty() || ngram.size() > tables_.size()) {
    throw Error("n-gram length " + std::to_string(ngram.size()) +
                " outside model order " + std::to_string(order_));
  }
  tables_[ngram.size() - 1][NGram(ngram.begin(), ngram.end())] = {log_prob, backoff};
}

void NGramModel::SetEntry(std::span<const std::string> ngram, double log_prob,
                          double backoff) {
  NGram ids;
  for (const auto& w : ngram) ids.push_back(vocab_.Add(w));
  SetEntry(ids, log_prob, backoff);
}

bool NGramModel::Erase(std::span<const WordId> ngram) {
  if (ngram.empty() || ngram.size() > tables_.size()) return false;
  auto& table = tables_[ngram.size() - 1];
  auto it = table.find(ngram);
  if (it == table.end()) return false;
  table.erase(it);
  return true;
}

size_t NGramModel::NumEntries() const {
  size_t n = 0;
  for (const auto& t : tables_) n += t.size();
  return n;
}

std::vector<WordId> NGramModel::PredictableWords() const {
  std::vector<WordId> out;
  for (WordId id = 0; id < static_cast<WordId>(vocab_.size()); ++id) {
    if (id != Vocabulary::kBosId) out.push_back(id);
  }
  return out;
}

double NGramModel::LogProb(WordId word, std::span<const WordId> history) const {
  size_t h = std::min<size_t>(history.size(), order_ - 1);
  std::array<WordId, kMaxQueryOrder> buf;
  std::copy(history.end() - h, history.end(), buf.begin());
  buf[h] = word;
  double acc = 0.0;
  for (size_t len = h;; --len) {
    std::span<const WordId> ngram(buf.data() + (h - len), len + 1);
    if (const Entry* e = Find(ngram)) return acc + e->log_prob;
    if (len == 0) break;
    if (const Entry* ctx = Find(ngram.first(len))) acc += ctx->backoff;
  }
  return acc + kLogZero;
}

double NGramModel::LogProb(std::string_view word, std::span<const std::string> history) const {
  size_t h = std::min<size_t>(history.size(), order_ - 1);
  std::array<WordId, kMaxQueryOrder> ids;
  for (size_t i = 0; i < h; ++i) ids[i] = vocab_.Find(history[history.size() - h + i]);
  return LogProb(vocab_.Find(word), std::span<const WordId>(ids.data(), h));
}

double NGramModel::SentenceLogProb(std::span<const std::string> sentence) const {
  NGram tokens;
  tokens.reserve(sentence.size() + 2);
  tokens.push_back(Vocabulary::kBosId);
  for (const auto& w : sentence) tokens.push_back(vocab_.Find(w));
  tokens.push_back(Vocabulary::kEosId);
  double total = 0.0;
  std::span<const WordId> all(tokens);
  for (size_t i = 1; i < tokens.size(); ++i) {
    total += LogProb(tokens[i], all.first(i));
  }
  return total;
}

void NGramModel::RecomputeBackoffs() {
  for (int k = 1; k < order_; ++k) {
    auto& contexts = tables_[k - 1];
    for (auto& [ngram, entry] : contexts) entry.backoff = 0.0;
    auto& table = tables_[k];
    auto it = table.begin();
    while (it != table.end()) {
      std::span<const WordId> prefix(it->first.data(), k);
      auto group_end = it;
      double explicit_mass = 0.0;
      double lower_mass = 0.0;
      for (; group_end != table.end() &&
             std::equal(prefix.begin(), prefix.end(), group_end->first.begin());
           ++group_end) {
        explicit_mass += std::exp(group_end->second.log_prob);
        lower_mass += std::exp(LogProb(group_end->first.back(), prefix.subspan(1)));
      }
      auto ctx = contexts.find(prefix);
      if (ctx == contexts.end()) {
        Log().warn("{}-gram context without its own entry; backoff left at 0", k);
      } else {
        double numerator = 1.0 - explicit_mass;
        double denominator = 1.0 - lower_mass;
        if (denominator <= 1e-12) {
          // Every word is explicit: fold the leftover into the explicit ones.
          double shift = -std::log(explicit_mass);
          for (auto g = it; g != group_end; ++g) g->second.log_prob += shift;
          ctx->second.backoff = 0.0;
        } else if (numerator <= 0.0) {
          Log().warn("no backoff mass left for a {}-gram context", k);
          ctx->second.backoff = kLogZero;
        } else {
          ctx->second.backoff = std::log(numerator) - std::log(denominator);
        }
      }
      it = group_end;
    }
  }
}

NGramModel PruneModel(const NGramModel& model, const CountTable& counts,
                      const PruneOptions& options) {
  size_t unigrams = model.Entries(1).size();
  if (options.max_entries > 0 && options.max_entries < unigrams) {
    throw Error("pruning budget " + std::to_string(options.max_entries) +
                " is smaller than the unigram section (" + std::to_string(unigrams) + ")");
  }
  NGramModel pruned = model;
  auto count_of = [&](const NGram& ngram) {
    NGram mapped;
    for (WordId id : ngram) {
      const auto& w = model.vocab().Word(id);
      if (!counts.vocab.Contains(w)) return int64_t{0};
      mapped.push_back(counts.vocab.Find(w));
    }
    return counts.Count(mapped);
  };
  int top = model.order();
  if (top > 1 && options.min_count > 1) {
    std::vector<NGram> doomed;
    for (const auto& [ngram, entry] : pruned.Entries(top)) {
      if (count_of(ngram) < options.min_count) doomed.push_back(ngram);
    }
    for (const auto& ngram : doomed) pruned.Erase(ngram);
  }
  if (options.max_entries > 0) {
    for (int k = top; k > 1 && pruned.NumEntries() > options.max_entries; --k) {
      std::vector<std::pair<int64_t, NGram>> ranked;
      for (const auto& [ngram, entry] : pruned.Entries(k)) {
        ranked.emplace_back(count_of(ngram), ngram);
      }
      std::sort(ranked.begin(), ranked.end());
      for (const auto& [count, ngram] : ranked) {
        if (pruned.NumEntries() <= options.max_entries) break;
        pruned.Erase(ngram);
      }
    }
  }
  pruned.RecomputeBackoffs();
  return pruned;
}

double Perplexity(const NGramModel& model, const Corpus& corpus) {
  double log_sum = 0.0;
  size_t tokens = 0;
  for (const auto& s : corpus.sentences) {
    log_sum += model.SentenceLogProb(s);
    tokens += s.size() + 1;
  }
  return std::exp(-log_sum / static_cast<double>(tokens));
}

}  // namespace biasfst
