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

#ifndef BIASFST_SYNTH_H_
#define BIASFST_SYNTH_H_

#include <cstdint>
#include <string>
#include <vector>

#include "biasfst/corpus.h"
#include "biasfst/eval.h"

namespace biasfst {

struct SynthOptions {
  uint64_t seed = 1;
  size_t general_sentences = 5000;
  size_t ood_sentences = 500;
  size_t ood_test_utterances = 150;
  size_t control_test_utterances = 400;
};

struct SynthDomain {
  std::string name;
  Corpus corpus;
  Testset test;
  // Rare entity words injected by this domain's templates.
  std::vector<std::string> entities;
};

// Template-generated assistant requests: one general domain and three OOD
// domains (sports, grocery, fuel/payment) whose entity slots are filled with
// names that never occur in the general text.
struct SynthSuite {
  Corpus general;
  std::vector<SynthDomain> domains;
  Testset control;
};

SynthSuite GenerateSuite(const SynthOptions& options);

struct SuitePaths {
  std::string general_corpus;
  std::vector<std::string> ood_corpora;
  std::vector<std::string> ood_testsets;
  std::string control_testset;
  std::string config;
};

// Writes general.txt, ood_<domain>.txt, test_<domain>.tsv, control.tsv and a
// suite.cfg that points the pipeline at them.
SuitePaths WriteSuite(const SynthSuite& suite, const std::string& dir);

}  // namespace biasfst

#endif  // BIASFST_SYNTH_H_
