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

#ifndef BIASFST_BOOST_FST_H_
#define BIASFST_BOOST_FST_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "biasfst/corpus.h"
#include "biasfst/llr_boost.h"

namespace biasfst {

using StateId = int32_t;
inline constexpr StateId kNoState = -1;

struct FstArc {
  std::string word;
  double weight = 0.0;
  StateId next = kNoState;
  // Subword segmentation of `word`; empty for <s> and </s>.
  std::vector<int> units;
};

// Word-level boosting automaton. States are the proper prefixes of boosted
// n-grams; state 0 is the empty history. Reading word w in state h follows
// the arc for w if there is one, otherwise zero-weight backoff arcs to the
// longest proper suffix state. An arc's weight is the score of the longest
// table n-gram that is a suffix of h + w (zero on pure context arcs).
class BoostingFst {
 public:
  StateId start() const { return start_; }
  static constexpr StateId root() { return 0; }
  int order() const { return order_; }
  size_t NumStates() const { return histories_.size(); }
  size_t NumArcs() const;

  const WordSeq& History(StateId s) const { return histories_.at(s); }
  std::span<const FstArc> Arcs(StateId s) const { return arcs_.at(s); }
  // kNoState for the root.
  StateId Backoff(StateId s) const { return backoff_.at(s); }
  // Largest and smallest arc weight in the automaton (0 when empty).
  double MaxWeight() const { return max_weight_; }
  double MinWeight() const { return min_weight_; }

  // Total transition: returns the next state and the boost for `word`.
  std::pair<StateId, double> Advance(StateId state, std::string_view word) const;

  // Half-open range of arc indices at `state` whose word begins with the
  // surface string `prefix` (binary search over the sorted arcs).
  std::pair<size_t, size_t> PrefixRange(StateId state, std::string_view prefix) const;
  std::pair<size_t, size_t> PrefixRange(StateId state, std::span<const int> units,
                                        const SubwordInventory& inv) const;
  // Max arc weight inside PrefixRange at this state only; 0 when empty.
  double LookaheadWeight(StateId state, std::string_view prefix) const;

  void Write(std::ostream& os) const;
  void Write(const std::string& path) const;
  static BoostingFst Read(std::istream& is, const SubwordInventory& inv);
  static BoostingFst Read(const std::string& path, const SubwordInventory& inv);

 private:
  friend BoostingFst BuildBoostingFst(const BoostTable&, const SubwordInventory&);
  void Finish(const SubwordInventory& inv);

  int order_ = 0;
  StateId start_ = 0;
  double max_weight_ = 0.0;
  double min_weight_ = 0.0;
  std::vector<WordSeq> histories_;
  std::vector<std::vector<FstArc>> arcs_;
  std::vector<StateId> backoff_;
};

BoostingFst BuildBoostingFst(const BoostTable& table, const SubwordInventory& inv);

// Per-hypothesis position in the automaton while a word is spelled out.
struct FstCursor {
  StateId state = 0;
  // Surface text of the word-internal units read so far.
  std::string pending;
  // Lookahead boost currently credited for `pending`.
  double provisional = 0.0;

  bool operator==(const FstCursor&) const = default;
};

struct CursorStep {
  FstCursor cursor;
  double delta = 0.0;
};

FstCursor StartCursor(const BoostingFst& fst);

// Consumes one subword unit. Word-final units resolve the word exactly and
// retract the provisional credit; word-internal units move the provisional
// credit to the lookahead weight of the longer prefix.
CursorStep CursorExtend(const BoostingFst& fst, const SubwordInventory& inv,
                        const FstCursor& cursor, int unit);

// End of utterance: resolves a pending partial word, then reads </s>.
CursorStep CursorFinalize(const BoostingFst& fst, const FstCursor& cursor);

}  // namespace biasfst

#endif  // BIASFST_BOOST_FST_H_
