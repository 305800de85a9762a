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

#include "biasfst/corpus.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "biasfst/common.h"

namespace biasfst {

size_t Corpus::NumTokens() const {
  size_t n = 0;
  for (const auto& s : sentences) n += s.size();
  return n;
}

namespace {

std::string Lowercase(std::string_view text) {
  std::string out(text);
  for (auto& c : out) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(std::tolower(u));
  }
  return out;
}

void AddLine(std::string_view line, bool lowercase, Corpus* corpus) {
  Sentence sentence;
  for (auto& token : SplitWhitespace(line)) {
    if (token == kBos || token == kEos) continue;
    sentence.push_back(lowercase ? Lowercase(token) : std::move(token));
  }
  if (sentence.empty()) {
    ++corpus->skipped_lines;
  } else {
    corpus->sentences.push_back(std::move(sentence));
  }
}

}  // namespace

Corpus CorpusFromLines(std::span<const std::string> lines, bool lowercase) {
  Corpus corpus;
  for (const auto& line : lines) AddLine(line, lowercase, &corpus);
  if (corpus.sentences.empty()) throw Error("corpus has no non-blank lines");
  return corpus;
}

Corpus LoadCorpus(const std::string& path, bool lowercase) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read corpus file: " + path);
  Corpus corpus;
  std::string line;
  while (std::getline(in, line)) AddLine(line, lowercase, &corpus);
  if (corpus.sentences.empty()) {
    throw Error("corpus has no non-blank lines: " + path);
  }
  Log().info("loaded {}: {} sentences, {} skipped lines", path,
             corpus.sentences.size(), corpus.skipped_lines);
  return corpus;
}

std::vector<std::string> SplitUtf8(std::string_view text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    auto lead = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    if (lead >= 0xF0 && lead < 0xF8) {
      len = 4;
    } else if (lead >= 0xE0) {
      len = lead < 0xF0 ? 3 : 1;
    } else if (lead >= 0xC0) {
      len = 2;
    }
    if (i + len > text.size()) len = 1;
    for (size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    }
    out.emplace_back(text.substr(i, len));
    i += len;
  }
  return out;
}

SubwordInventory::SubwordInventory(std::vector<SubwordUnit> units)
    : units_(std::move(units)) {
  for (size_t id = 0; id < units_.size(); ++id) {
    const auto& u = units_[id];
    if (u.text.empty()) throw Error("subword inventory: empty unit");
    auto& index = u.word_final ? final_ : internal_;
    if (!index.emplace(u.text, static_cast<int>(id)).second) {
      throw Error("subword inventory: duplicate unit '" + u.text + "'");
    }
    max_unit_chars_ = std::max(max_unit_chars_, SplitUtf8(u.text).size());
  }
}

int SubwordInventory::Find(std::string_view text, bool word_final) const {
  const auto& index = word_final ? final_ : internal_;
  auto it = index.find(std::string(text));
  return it == index.end() ? -1 : it->second;
}

bool SubwordInventory::HasCharacter(std::string_view ch) const {
  return Find(ch, false) >= 0 && Find(ch, true) >= 0;
}

std::string SubwordInventory::Token(int id) const {
  const auto& u = unit(id);
  return u.word_final ? u.text : u.text + "@@";
}

void SubwordInventory::Write(std::ostream& os) const {
  for (size_t id = 0; id < units_.size(); ++id) {
    os << units_[id].text << '\t'
       << (units_[id].word_final ? "final" : "internal") << '\t' << id << '\n';
  }
}

void SubwordInventory::Write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write inventory: " + path);
  Write(out);
}

SubwordInventory SubwordInventory::Read(std::istream& is) {
  std::vector<SubwordUnit> units;
  std::string line;
  size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string text, tag, id_str;
    if (!std::getline(fields, text, '\t') || !std::getline(fields, tag, '\t') ||
        !std::getline(fields, id_str)) {
      throw Error("inventory line " + std::to_string(line_no) + ": expected 3 fields");
    }
    if (tag != "internal" && tag != "final") {
      throw Error("inventory line " + std::to_string(line_no) + ": bad tag '" + tag + "'");
    }
    if (std::stoul(id_str) != units.size()) {
      throw Error("inventory line " + std::to_string(line_no) + ": ids must be dense and ordered");
    }
    units.push_back({text, tag == "final"});
  }
  return SubwordInventory(std::move(units));
}

SubwordInventory SubwordInventory::Read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read inventory: " + path);
  return Read(in);
}

SubwordInventory BuildSubwordInventory(const Corpus& corpus, size_t max_units) {
  std::map<std::string, size_t> word_freq;
  for (const auto& s : corpus.sentences) {
    for (const auto& w : s) ++word_freq[w];
  }
  std::set<std::string> alphabet;
  // (text, word_final) -> weighted occurrence count
  std::map<std::pair<std::string, bool>, size_t> candidates;
  for (const auto& [word, freq] : word_freq) {
    auto chars = SplitUtf8(word);
    alphabet.insert(chars.begin(), chars.end());
    for (size_t i = 0; i < chars.size(); ++i) {
      std::string sub = chars[i];
      for (size_t len = 2; len <= kMaxUnitChars && i + len <= chars.size(); ++len) {
        sub += chars[i + len - 1];
        candidates[{sub, i + len == chars.size()}] += freq;
      }
    }
  }
  if (max_units < 2 * alphabet.size()) {
    throw Error("subword budget " + std::to_string(max_units) +
                " cannot hold the " + std::to_string(2 * alphabet.size()) +
                " character units");
  }
  std::vector<SubwordUnit> units;
  for (const auto& ch : alphabet) {
    units.push_back({ch, false});
    units.push_back({ch, true});
  }
  std::vector<std::tuple<size_t, std::string, bool>> ranked;
  ranked.reserve(candidates.size());
  for (const auto& [key, freq] : candidates) ranked.emplace_back(freq, key.first, key.second);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) > std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b)) return std::get<1>(a) < std::get<1>(b);
    return std::get<2>(a) < std::get<2>(b);
  });
  for (const auto& [freq, text, word_final] : ranked) {
    if (units.size() >= max_units) break;
    units.push_back({text, word_final});
  }
  return SubwordInventory(std::move(units));
}

std::vector<int> SegmentWord(std::string_view word, const SubwordInventory& inv) {
  if (word.empty()) throw Error("cannot segment an empty word");
  auto chars = SplitUtf8(word);
  std::vector<int> out;
  size_t i = 0;
  while (i < chars.size()) {
    int found = -1;
    size_t found_len = 0;
    size_t max_len = std::min(inv.max_unit_chars(), chars.size() - i);
    std::string sub;
    for (size_t len = 1; len <= max_len; ++len) {
      sub += chars[i + len - 1];
      int id = inv.Find(sub, i + len == chars.size());
      if (id >= 0) {
        found = id;
        found_len = len;
      }
    }
    if (found < 0) {
      throw Error("character '" + chars[i] + "' of word '" + std::string(word) +
                  "' is outside the subword alphabet");
    }
    out.push_back(found);
    i += found_len;
  }
  return out;
}

std::vector<int> SegmentSentence(std::span<const std::string> words,
                                 const SubwordInventory& inv) {
  std::vector<int> out;
  for (const auto& w : words) {
    auto units = SegmentWord(w, inv);
    out.insert(out.end(), units.begin(), units.end());
  }
  return out;
}

std::vector<std::string> UnitsToWords(std::span<const int> units,
                                      const SubwordInventory& inv,
                                      bool finalize_pending) {
  std::vector<std::string> words;
  std::string pending;
  for (int id : units) {
    const auto& u = inv.unit(id);
    pending += u.text;
    if (u.word_final) {
      words.push_back(std::move(pending));
      pending.clear();
    }
  }
  if (finalize_pending && !pending.empty()) words.push_back(std::move(pending));
  return words;
}

}  // namespace biasfst
