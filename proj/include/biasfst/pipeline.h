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

#ifndef BIASFST_PIPELINE_H_
#define BIASFST_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "biasfst/boost_fst.h"
#include "biasfst/corpus.h"
#include "biasfst/decoder.h"
#include "biasfst/eval.h"
#include "biasfst/llr_boost.h"
#include "biasfst/ngram_lm.h"

namespace biasfst {

struct PipelineConfig {
  std::string general_corpus;
  std::vector<std::string> ood_corpora;
  std::vector<std::string> ood_testsets;
  std::string control_testset;

  int order = 4;
  int discount_cutoff = 5;
  size_t subword_units = 512;
  int prior_order = 3;

  double threshold = 3.0;
  double lambda = 0.25;
  double alpha = 0.5;
  double word_reward = 0.0;

  double beta = 0.5;
  double epsilon = 1e-3;
  double jitter = 0.2;

  size_t beam = 8;
  size_t nbest = 8;
  uint64_t seed = 1;
  int jobs = 1;

  // Grid for the operating-point sweep. When both are non-empty the pipeline
  // decodes at the selected point instead of (threshold, lambda).
  std::vector<double> sweep_thresholds = {2.0, 3.0, 4.0, 5.0};
  std::vector<double> sweep_lambdas = {0.1, 0.25, 0.5};
  double max_control_degradation = 0.5;

  // Throws Error naming the first parameter out of range.
  void Validate() const;
};

struct TrainedModels {
  NGramModel gen{1, Vocabulary()};
  NGramModel ood{1, Vocabulary()};
  SubwordInventory inventory;
  NGramModel prior{1, Vocabulary()};
  // Second-pass model: equal mixture of gen and ood.
  NGramModel rescorer{1, Vocabulary()};
};

// Trains the general LM, the (equal-weight interpolated) OOD LM, the subword
// inventory over both corpora, the subword prior and the rescoring LM.
TrainedModels TrainModels(const PipelineConfig& config);

// Loads a testset and emits surrogate posteriors for every utterance. Each
// utterance gets its own seed derived from the config seed and its id.
EvalSet MakeEvalSet(const Testset& testset, bool control, const SubwordInventory& inv,
                    const NGramModel& prior, const PipelineConfig& config);
std::vector<EvalSet> MakeEvalSets(const PipelineConfig& config, const TrainedModels& models);

std::vector<SweepPoint> SweepGrid(const PipelineConfig& config);

struct SystemScores {
  std::string system;
  std::vector<std::string> testsets;
  std::vector<bool> control;
  std::vector<WerBreakdown> wer;
  std::vector<WerBreakdown> oracle;

  WerBreakdown OodWer() const;
  WerBreakdown OodOracle() const;
  WerBreakdown ControlWer() const;
};

struct PipelineResult {
  std::optional<SweepReport> sweep;
  SweepPoint operating_point;
  size_t boost_entries = 0;
  // baseline, fp (boosted first pass), sp (baseline + rescoring), fp+sp.
  std::vector<SystemScores> systems;

  const SystemScores& System(const std::string& name) const;
};

// Runs every stage and writes its artifacts to out_dir:
// gen.arpa, ood.arpa, rescore.arpa, prior.arpa, inventory.tsv, boost.tsv,
// boost.fst, nbest/<system>_<testset>.jsonl, sweep.csv, sweep.json,
// report.json.
PipelineResult RunPipeline(const PipelineConfig& config, const std::string& out_dir);

}  // namespace biasfst

#endif  // BIASFST_PIPELINE_H_
