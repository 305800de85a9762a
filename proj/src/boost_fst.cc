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

#include "biasfst/boost_fst.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "biasfst/common.h"

namespace biasfst {

namespace {

constexpr std::string_view kEpsilon = "ε";

bool IsMarker(std::string_view w) { return w == kBos || w == kEos; }

}  // namespace

size_t BoostingFst::NumArcs() const {
  size_t n = 0;
  for (const auto& a : arcs_) n += a.size();
  return n;
}

void BoostingFst::Finish(const SubwordInventory& inv) {
  max_weight_ = 0.0;
  min_weight_ = 0.0;
  bool first = true;
  for (auto& arcs : arcs_) {
    std::sort(arcs.begin(), arcs.end(),
              [](const FstArc& a, const FstArc& b) { return a.word < b.word; });
    for (size_t i = 1; i < arcs.size(); ++i) {
      if (arcs[i - 1].word == arcs[i].word) {
        throw Error("boosting FST: duplicate arc label '" + arcs[i].word + "'");
      }
    }
    for (auto& arc : arcs) {
      if (!IsMarker(arc.word)) arc.units = SegmentWord(arc.word, inv);
      max_weight_ = first ? arc.weight : std::max(max_weight_, arc.weight);
      min_weight_ = first ? arc.weight : std::min(min_weight_, arc.weight);
      first = false;
    }
  }
  start_ = root();
  for (size_t s = 0; s < histories_.size(); ++s) {
    if (histories_[s].size() == 1 && histories_[s][0] == kBos) start_ = static_cast<StateId>(s);
  }
}

BoostingFst BuildBoostingFst(const BoostTable& table, const SubwordInventory& inv) {
  std::set<WordSeq> prefixes{WordSeq{}};
  for (const auto& [ngram, score] : table.entries) {
    for (size_t i = 1; i < ngram.size(); ++i) {
      prefixes.emplace(ngram.begin(), ngram.begin() + i);
    }
  }
  BoostingFst fst;
  fst.order_ = static_cast<int>(table.MaxOrder());
  std::map<WordSeq, StateId> index;
  for (const auto& h : prefixes) {
    index.emplace(h, static_cast<StateId>(fst.histories_.size()));
    fst.histories_.push_back(h);
  }
  auto longest_state_suffix = [&](const WordSeq& seq, size_t min_drop) {
    for (size_t drop = min_drop; drop <= seq.size(); ++drop) {
      auto it = index.find(WordSeq(seq.begin() + drop, seq.end()));
      if (it != index.end()) return it->second;
    }
    return BoostingFst::root();
  };
  auto longest_table_suffix = [&](const WordSeq& seq) {
    for (size_t drop = 0; drop < seq.size(); ++drop) {
      auto it = table.entries.find(WordSeq(seq.begin() + drop, seq.end()));
      if (it != table.entries.end()) return it->second;
    }
    return 0.0;
  };

  fst.arcs_.resize(fst.histories_.size());
  fst.backoff_.assign(fst.histories_.size(), kNoState);
  for (size_t s = 1; s < fst.histories_.size(); ++s) {
    fst.backoff_[s] = longest_state_suffix(fst.histories_[s], 1);
  }
  std::set<std::pair<StateId, std::string>> labels;
  for (const auto& [ngram, score] : table.entries) {
    for (size_t i = 0; i < ngram.size(); ++i) {
      StateId src = index.at(WordSeq(ngram.begin(), ngram.begin() + i));
      labels.emplace(src, ngram[i]);
    }
  }
  for (const auto& [src, word] : labels) {
    WordSeq extended = fst.histories_[src];
    extended.push_back(word);
    FstArc arc;
    arc.word = word;
    arc.weight = longest_table_suffix(extended);
    arc.next = longest_state_suffix(extended, 0);
    fst.arcs_[src].push_back(std::move(arc));
  }
  fst.Finish(inv);
  return fst;
}

std::pair<StateId, double> BoostingFst::Advance(StateId state, std::string_view word) const {
  for (StateId s = state; s != kNoState; s = backoff_[s]) {
    const auto& arcs = arcs_[s];
    auto it = std::lower_bound(arcs.begin(), arcs.end(), word,
                               [](const FstArc& a, std::string_view w) { return a.word < w; });
    if (it != arcs.end() && it->word == word) return {it->next, it->weight};
  }
  return {root(), 0.0};
}

std::pair<size_t, size_t> BoostingFst::PrefixRange(StateId state,
                                                    std::string_view prefix) const {
  const auto& arcs = arcs_.at(state);
  auto lo = std::partition_point(arcs.begin(), arcs.end(),
                                 [&](const FstArc& a) { return a.word < prefix; });
  auto hi = std::partition_point(lo, arcs.end(), [&](const FstArc& a) {
    return a.word.compare(0, prefix.size(), prefix) == 0;
  });
  return {static_cast<size_t>(lo - arcs.begin()), static_cast<size_t>(hi - arcs.begin())};
}

std::pair<size_t, size_t> BoostingFst::PrefixRange(StateId state, std::span<const int> units,
                                                    const SubwordInventory& inv) const {
  std::string prefix;
  for (int u : units) prefix += inv.unit(u).text;
  return PrefixRange(state, prefix);
}

double BoostingFst::LookaheadWeight(StateId state, std::string_view prefix) const {
  auto [lo, hi] = PrefixRange(state, prefix);
  if (lo == hi) return 0.0;
  const auto& arcs = arcs_[state];
  double best = arcs[lo].weight;
  for (size_t i = lo + 1; i < hi; ++i) best = std::max(best, arcs[i].weight);
  return best;
}

void BoostingFst::Write(std::ostream& os) const {
  os << "#order=" << order_ << "\n";
  for (size_t s = 0; s < histories_.size(); ++s) {
    os << "state " << s << " "
       << (histories_[s].empty() ? std::string(kEpsilon) : Join(histories_[s], " ")) << "\n";
  }
  for (size_t s = 0; s < arcs_.size(); ++s) {
    for (const auto& arc : arcs_[s]) {
      os << "arc " << s << " " << arc.next << " " << arc.word << " "
         << fmt::format("{:.6f}", arc.weight) << "\n";
    }
  }
  for (size_t s = 0; s < backoff_.size(); ++s) {
    if (backoff_[s] != kNoState) os << "backoff " << s << " " << backoff_[s] << "\n";
  }
}

void BoostingFst::Write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write FST: " + path);
  Write(out);
}

BoostingFst BoostingFst::Read(std::istream& is, const SubwordInventory& inv) {
  BoostingFst fst;
  std::string line;
  size_t line_no = 0;
  bool have_order = false;
  auto fail = [&](const std::string& what) {
    throw Error("FST line " + std::to_string(line_no) + ": " + what);
  };
  auto state_ref = [&](const std::string& field) {
    StateId s = static_cast<StateId>(std::stol(field));
    if (s < 0 || static_cast<size_t>(s) >= fst.histories_.size()) fail("unknown state " + field);
    return s;
  };
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line.rfind("#order=", 0) == 0) {
      fst.order_ = std::stoi(line.substr(7));
      have_order = true;
      continue;
    }
    auto fields = SplitWhitespace(line);
    if (fields[0] == "state") {
      if (fields.size() < 3) fail("malformed state line");
      if (std::stoul(fields[1]) != fst.histories_.size()) fail("state ids must be dense");
      WordSeq history;
      if (!(fields.size() == 3 && fields[2] == kEpsilon)) {
        history.assign(fields.begin() + 2, fields.end());
      }
      fst.histories_.push_back(std::move(history));
      fst.arcs_.emplace_back();
      fst.backoff_.push_back(kNoState);
    } else if (fields[0] == "arc") {
      if (fields.size() != 5) fail("malformed arc line");
      StateId src = state_ref(fields[1]);
      FstArc arc;
      arc.next = state_ref(fields[2]);
      arc.word = fields[3];
      arc.weight = QuantizeBoost(std::stod(fields[4]));
      auto& arcs = fst.arcs_[src];
      if (!arcs.empty() && !(arcs.back().word < arc.word)) fail("arcs not in sorted order");
      arcs.push_back(std::move(arc));
    } else if (fields[0] == "backoff") {
      if (fields.size() != 3) fail("malformed backoff line");
      fst.backoff_[state_ref(fields[1])] = state_ref(fields[2]);
    } else {
      fail("unknown record '" + fields[0] + "'");
    }
  }
  if (!have_order) throw Error("FST: missing #order header");
  if (fst.histories_.empty() || !fst.histories_[0].empty()) {
    throw Error("FST: state 0 must be the empty history");
  }
  fst.Finish(inv);
  return fst;
}

BoostingFst BoostingFst::Read(const std::string& path, const SubwordInventory& inv) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read FST: " + path);
  return Read(in, inv);
}

FstCursor StartCursor(const BoostingFst& fst) { return FstCursor{fst.start(), {}, 0.0}; }

CursorStep CursorExtend(const BoostingFst& fst, const SubwordInventory& inv,
                        const FstCursor& cursor, int unit) {
  const auto& u = inv.unit(unit);
  CursorStep step{cursor, 0.0};
  step.cursor.pending += u.text;
  if (u.word_final) {
    auto [next, weight] = fst.Advance(cursor.state, step.cursor.pending);
    step.delta = weight - cursor.provisional;
    step.cursor.state = next;
    step.cursor.pending.clear();
    step.cursor.provisional = 0.0;
  } else {
    double lookahead = fst.LookaheadWeight(cursor.state, step.cursor.pending);
    step.delta = lookahead - cursor.provisional;
    step.cursor.provisional = lookahead;
  }
  return step;
}

CursorStep CursorFinalize(const BoostingFst& fst, const FstCursor& cursor) {
  CursorStep step{cursor, 0.0};
  if (!cursor.pending.empty()) {
    auto [next, weight] = fst.Advance(cursor.state, cursor.pending);
    step.delta = weight - cursor.provisional;
    step.cursor.state = next;
    step.cursor.pending.clear();
    step.cursor.provisional = 0.0;
  }
  auto [next, weight] = fst.Advance(step.cursor.state, kEos);
  step.delta += weight;
  step.cursor.state = next;
  return step;
}

}  // namespace biasfst
