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

#ifndef BIASFST_EVAL_H_
#define BIASFST_EVAL_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biasfst/corpus.h"
#include "biasfst/decoder.h"
#include "biasfst/ngram_lm.h"

namespace biasfst {

struct WerBreakdown {
  int64_t substitutions = 0;
  int64_t deletions = 0;
  int64_t insertions = 0;
  int64_t reference_words = 0;

  int64_t errors() const { return substitutions + deletions + insertions; }
  // (S + D + I) / N; 0 for an empty accumulator.
  double wer() const;
  WerBreakdown& operator+=(const WerBreakdown& other);
  bool operator==(const WerBreakdown&) const = default;
};

// Unit-cost Levenshtein alignment. On equal cost the backtrace prefers
// substitution (or match), then insertion, then deletion.
WerBreakdown ComputeWer(std::span<const std::string> reference,
                        std::span<const std::string> hypothesis);

// Lowest-error hypothesis of the list; ties go to the better-ranked one.
size_t OracleIndex(std::span<const std::string> reference, const NBestList& nbest);
WerBreakdown OracleWer(std::span<const std::string> reference, const NBestList& nbest);

// Relative WER reduction in percent; positive is an improvement.
double Werr(double baseline_wer, double new_wer);
// Same, but total on zero baselines: 0 when both are zero, -inf when only the
// baseline is.
double SafeWerr(double baseline_wer, double new_wer);

struct Testset {
  std::string name;
  std::vector<std::string> ids;
  std::vector<Sentence> references;

  size_t size() const { return ids.size(); }
};

// TSV `utterance_id \t reference`. References are lowercased.
Testset ReadTestset(const std::string& path, const std::string& name);
void WriteTestset(const Testset& testset, const std::string& path);

// Pooled 1-best WER of n-best lists against a testset (lists in testset order).
WerBreakdown CorpusWer(const Testset& testset, std::span<const NBestList> lists,
                       bool use_rescore = false);
WerBreakdown CorpusOracleWer(const Testset& testset, std::span<const NBestList> lists);

// A testset together with its surrogate posteriors.
struct EvalSet {
  Testset testset;
  bool control = false;
  std::vector<PosteriorSequence> posteriors;
};

// Decodes every utterance of a set in parallel; output is in testset order.
std::vector<NBestList> DecodeSet(const EvalSet& set, const SubwordInventory& inv,
                                 const BeamOptions& options, int jobs);

struct SweepPoint {
  double threshold = 0.0;
  double lambda = 0.0;
};

struct TestsetResult {
  std::string name;
  bool control = false;
  WerBreakdown baseline;
  WerBreakdown adapted;
  WerBreakdown baseline_oracle;
  WerBreakdown adapted_oracle;
  double werr = 0.0;
  double oracle_werr = 0.0;
};

struct SweepRow {
  SweepPoint point;
  size_t table_entries = 0;
  std::vector<TestsetResult> testsets;
  // Pooled over all OOD sets (the objective), and the plain mean of per-set
  // WERRs.
  double ood_micro_werr = 0.0;
  double ood_macro_werr = 0.0;
  double ood_oracle_werr = 0.0;
  double control_werr = 0.0;
  bool feasible = false;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::optional<size_t> selected;
  double max_control_degradation = 0.5;

  bool no_feasible_point() const { return !selected.has_value(); }
};

// Flags each row feasible when control WERR > -max_degradation and returns
// the feasible row with the largest pooled OOD WERR (first in grid order on
// ties).
std::optional<size_t> SelectOperatingPoint(std::vector<SweepRow>& rows, double max_degradation);

struct SweepInputs {
  const NGramModel* gen = nullptr;
  const NGramModel* ood = nullptr;
  const SubwordInventory* inv = nullptr;
  std::span<const EvalSet> sets;
  size_t beam = 8;
  size_t nbest = 8;
  int jobs = 1;
};

// For every grid point: builds the boost table at T, compiles the FST, decodes
// every set at lambda, and scores against the lambda = 0 baseline.
SweepReport RunSweep(const SweepInputs& inputs, std::span<const SweepPoint> grid,
                     double max_degradation = 0.5);

void WriteSweepCsv(const SweepReport& report, std::ostream& os);
void WriteSweepCsv(const SweepReport& report, const std::string& path);
void WriteSweepSummary(const SweepReport& report, std::ostream& os);
void WriteSweepSummary(const SweepReport& report, const std::string& path);

}  // namespace biasfst

#endif  // BIASFST_EVAL_H_
