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

#ifndef BIASFST_TESTS_WORKED_EXAMPLE_H_
#define BIASFST_TESTS_WORKED_EXAMPLE_H_

#include <string>
#include <vector>

#include "biasfst/common.h"
#include "biasfst/ngram_lm.h"

namespace biasfst::testing {

// Reference per-token log-probabilities for two utterances, stored as
// explicit n-grams so lookups never back off. Every prefix and suffix that
// is not itself a scored token gets the same value in both models, so its
// log-ratio is 0.
struct WorkedToken {
  std::vector<std::string> ngram;
  double gen;
  double ood;
  double reference_llr;
};

inline const std::vector<WorkedToken>& WorkedExample1() {
  static const std::vector<WorkedToken> tokens = {
      {{"<s>", "tune"}, -8.12, -9.37, -1.24},
      {{"<s>", "tune", "into"}, -2.86, -5.55, -2.69},
      {{"<s>", "tune", "into", "the"}, -2.55, -2.74, -0.19},
      {{"tune", "into", "the", "freiberg"}, -15.64, -6.87, 8.77},
      {{"into", "the", "freiberg", "game"}, -7.38, -4.94, 2.45},
      {{"the", "freiberg", "game", "</s>"}, -1.63, -1.9, -0.27},
  };
  return tokens;
}

inline const std::vector<WorkedToken>& WorkedExample2() {
  static const std::vector<WorkedToken> tokens = {
      {{"<s>", "play"}, -2.32, -3.0, -0.69},
      {{"<s>", "play", "some"}, -4.0, -5.23, -1.23},
      {{"<s>", "play", "some", "music"}, -1.46, -3.79, -2.33},
      {{"play", "some", "music", "</s>"}, -0.32, -1.83, -1.5},
  };
  return tokens;
}

inline const std::vector<std::vector<std::string>>& WorkedSharedNGrams() {
  static const std::vector<std::vector<std::string>> shared = {
      {"<unk>"}, {"<s>"}, {"</s>"}, {"tune"}, {"into"}, {"the"}, {"freiberg"},
      {"game"}, {"play"}, {"some"}, {"music"},
      {"tune", "into"}, {"into", "the"}, {"the", "freiberg"}, {"freiberg", "game"},
      {"game", "</s>"}, {"play", "some"}, {"some", "music"}, {"music", "</s>"},
      {"tune", "into", "the"}, {"into", "the", "freiberg"}, {"the", "freiberg", "game"},
      {"freiberg", "game", "</s>"}, {"play", "some", "music"}, {"some", "music", "</s>"},
  };
  return shared;
}

inline NGramModel WorkedModel(bool ood) {
  NGramModel m(4, Vocabulary());
  for (const auto& ngram : WorkedSharedNGrams()) {
    m.SetEntry(ngram, -1.0 - static_cast<double>(ngram.size()));
  }
  for (const auto* example : {&WorkedExample1(), &WorkedExample2()}) {
    for (const auto& t : *example) m.SetEntry(t.ngram, ood ? t.ood : t.gen);
  }
  m.set_id(ood ? "worked-ood" : "worked-gen");
  return m;
}

inline std::vector<std::string> WorkedSentence1() {
  return {"tune", "into", "the", "freiberg", "game"};
}
inline std::vector<std::string> WorkedSentence2() { return {"play", "some", "music"}; }

}  // namespace biasfst::testing

#endif  // BIASFST_TESTS_WORKED_EXAMPLE_H_
