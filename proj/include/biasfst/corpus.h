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

#ifndef BIASFST_CORPUS_H_
#define BIASFST_CORPUS_H_

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace biasfst {

inline constexpr std::string_view kBos = "<s>";
inline constexpr std::string_view kEos = "</s>";
inline constexpr std::string_view kUnk = "<unk>";

using Sentence = std::vector<std::string>;

// Whitespace-tokenized utterances. Sentence markers are not stored; the LM
// layer pads each sentence with <s> ... </s>.
struct Corpus {
  std::vector<Sentence> sentences;
  size_t skipped_lines = 0;

  size_t NumTokens() const;
};

Corpus LoadCorpus(const std::string& path, bool lowercase = true);
Corpus CorpusFromLines(std::span<const std::string> lines, bool lowercase = true);

// Splits a UTF-8 string into code points. Invalid bytes are kept as
// single-byte characters.
std::vector<std::string> SplitUtf8(std::string_view text);

struct SubwordUnit {
  std::string text;
  bool word_final = false;

  bool operator==(const SubwordUnit&) const = default;
};

// Subword units tagged word-internal or word-final. Every alphabet character
// exists in both forms, so any word over the alphabet is segmentable.
class SubwordInventory {
 public:
  SubwordInventory() = default;
  explicit SubwordInventory(std::vector<SubwordUnit> units);

  size_t size() const { return units_.size(); }
  const SubwordUnit& unit(int id) const { return units_.at(id); }
  const std::vector<SubwordUnit>& units() const { return units_; }

  // Returns -1 when absent.
  int Find(std::string_view text, bool word_final) const;
  bool HasCharacter(std::string_view ch) const;
  size_t max_unit_chars() const { return max_unit_chars_; }

  // LM token for a unit: the text itself when word-final, text + "@@"
  // otherwise.
  std::string Token(int id) const;

  void Write(std::ostream& os) const;
  void Write(const std::string& path) const;
  static SubwordInventory Read(std::istream& is);
  static SubwordInventory Read(const std::string& path);

  bool operator==(const SubwordInventory& other) const {
    return units_ == other.units_;
  }

 private:
  std::vector<SubwordUnit> units_;
  std::unordered_map<std::string, int> internal_;
  std::unordered_map<std::string, int> final_;
  size_t max_unit_chars_ = 0;
};

// Longest substring length considered for multi-character units.
inline constexpr size_t kMaxUnitChars = 8;

// All single characters (both tags) plus the most frequent multi-character
// substrings up to max_units. Ties break lexicographically.
SubwordInventory BuildSubwordInventory(const Corpus& corpus, size_t max_units);

// Greedy longest match, left to right; the last unit is word-final.
std::vector<int> SegmentWord(std::string_view word, const SubwordInventory& inv);

// Segments every word of a sentence and concatenates the unit ids.
std::vector<int> SegmentSentence(std::span<const std::string> words,
                                 const SubwordInventory& inv);

// Maps unit ids back to words. A trailing run of word-internal units is
// emitted as a final word when finalize_pending is set and dropped otherwise.
std::vector<std::string> UnitsToWords(std::span<const int> units,
                                      const SubwordInventory& inv,
                                      bool finalize_pending = true);

}  // namespace biasfst

#endif  // BIASFST_CORPUS_H_
