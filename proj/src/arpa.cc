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
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "biasfst/common.h"
#include "biasfst/ngram_lm.h"

namespace biasfst {

namespace {

constexpr double kLn10 = 2.302585092994045684;

std::string FormatLog10(double natural_log) {
  return fmt::format("{:.12g}", natural_log / kLn10);
}

double ParseNumber(const std::string& field, size_t line_no) {
  try {
    size_t used = 0;
    double v = std::stod(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw Error("ARPA line " + std::to_string(line_no) + ": bad number '" + field + "'");
  }
}

}  // namespace

void WriteArpa(const NGramModel& model, std::ostream& os) {
  os << "\\data\\\n";
  for (int k = 1; k <= model.order(); ++k) {
    os << "ngram " << k << "=" << model.Entries(k).size() << "\n";
  }
  for (int k = 1; k <= model.order(); ++k) {
    os << "\n\\" << k << "-grams:\n";
    std::vector<std::pair<std::vector<std::string>, NGramModel::Entry>> rows;
    for (const auto& [ngram, entry] : model.Entries(k)) {
      rows.emplace_back(model.vocab().Strings(ngram), entry);
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [words, entry] : rows) {
      os << FormatLog10(entry.log_prob) << '\t' << Join(words, " ");
      if (k < model.order()) os << '\t' << FormatLog10(entry.backoff);
      os << '\n';
    }
  }
  os << "\n\\end\\\n";
}

void WriteArpa(const NGramModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write ARPA file: " + path);
  WriteArpa(model, out);
  if (!out) throw Error("failed writing ARPA file: " + path);
}

NGramModel ReadArpa(std::istream& is) {
  std::string line;
  size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(is, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (SplitWhitespace(line).empty()) continue;
      return true;
    }
    return false;
  };

  bool found_data = false;
  while (next_line()) {
    if (line.rfind("\\data\\", 0) == 0) {
      found_data = true;
      break;
    }
  }
  if (!found_data) throw Error("ARPA: missing \\data\\ section");

  std::vector<size_t> declared;
  bool have_line = false;
  while ((have_line = next_line())) {
    if (line.rfind("ngram ", 0) != 0) break;
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error("ARPA line " + std::to_string(line_no) + ": malformed count line");
    }
    int k = static_cast<int>(ParseNumber(line.substr(6, eq - 6), line_no));
    double n = ParseNumber(line.substr(eq + 1), line_no);
    if (k != static_cast<int>(declared.size()) + 1) {
      throw Error("ARPA line " + std::to_string(line_no) + ": count lines out of order");
    }
    declared.push_back(static_cast<size_t>(n));
  }
  if (declared.empty()) throw Error("ARPA: no ngram count lines");
  const int order = static_cast<int>(declared.size());

  std::vector<std::vector<std::pair<std::vector<std::string>, NGramModel::Entry>>> sections(
      order);
  bool ended = false;
  int current = 0;
  while (have_line) {
    if (line.rfind("\\end\\", 0) == 0) {
      ended = true;
      break;
    }
    if (line[0] == '\\') {
      int k = 0;
      if (std::sscanf(line.c_str(), "\\%d-grams:", &k) != 1) {
        throw Error("ARPA line " + std::to_string(line_no) + ": unknown section '" + line + "'");
      }
      if (k < 1 || k > order) {
        throw Error("ARPA line " + std::to_string(line_no) + ": section order " +
                    std::to_string(k) + " exceeds header order " + std::to_string(order));
      }
      current = k;
    } else {
      if (current == 0) {
        throw Error("ARPA line " + std::to_string(line_no) + ": entry outside a section");
      }
      auto fields = SplitWhitespace(line);
      size_t expected = 1 + current;
      if (fields.size() != expected && fields.size() != expected + 1) {
        throw Error("ARPA line " + std::to_string(line_no) + ": expected " +
                    std::to_string(current) + " words");
      }
      NGramModel::Entry entry;
      entry.log_prob = ParseNumber(fields[0], line_no) * kLn10;
      if (fields.size() == expected + 1) {
        entry.backoff = ParseNumber(fields.back(), line_no) * kLn10;
      }
      std::vector<std::string> words(fields.begin() + 1, fields.begin() + expected);
      sections[current - 1].emplace_back(std::move(words), entry);
    }
    have_line = next_line();
  }
  if (!ended) throw Error("ARPA: missing \\end\\ marker");
  for (int k = 1; k <= order; ++k) {
    if (sections[k - 1].size() != declared[k - 1]) {
      throw Error("ARPA: header declares " + std::to_string(declared[k - 1]) + " " +
                  std::to_string(k) + "-grams but body has " +
                  std::to_string(sections[k - 1].size()));
    }
  }

  std::vector<std::string> unigrams;
  for (const auto& [words, entry] : sections[0]) unigrams.push_back(words[0]);
  std::sort(unigrams.begin(), unigrams.end());
  Vocabulary vocab;
  for (const auto& w : unigrams) vocab.Add(w);
  NGramModel model(order, vocab);
  for (const auto& section : sections) {
    for (const auto& [words, entry] : section) {
      model.SetEntry(words, entry.log_prob, entry.backoff);
    }
  }
  return model;
}

NGramModel ReadArpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read ARPA file: " + path);
  NGramModel model = ReadArpa(in);
  model.set_id(path);
  return model;
}

}  // namespace biasfst
