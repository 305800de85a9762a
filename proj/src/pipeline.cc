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

#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "biasfst/common.h"
#include "biasfst/pipeline.h"
#include "biasfst/rescore.h"

namespace biasfst {

void PipelineConfig::Validate() const {
  auto fail = [](const std::string& what) { throw Error("invalid config: " + what); };
  if (general_corpus.empty()) fail("general-corpus is required");
  if (ood_corpora.empty()) fail("at least one ood-corpus is required");
  if (order < 1 || order > kMaxOrder) fail("order must be in 1..4");
  if (prior_order < 1 || prior_order > kMaxOrder) fail("prior-order must be in 1..4");
  if (discount_cutoff < 1) fail("discount-cutoff must be >= 1");
  if (subword_units == 0) fail("subword-units must be positive");
  if (std::isnan(threshold)) fail("threshold must be a number");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) fail("lambda must be finite and >= 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) fail("alpha must be finite and >= 0");
  if (!std::isfinite(word_reward)) fail("word-reward must be finite");
  if (!(beta >= 0.0 && beta < 1.0)) fail("beta must be in [0, 1)");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) fail("epsilon must be finite and >= 0");
  if (!(jitter >= 0.0 && jitter < 1.0)) fail("jitter must be in [0, 1)");
  if (beam < 1) fail("beam must be >= 1");
  if (nbest < 1 || nbest > beam) fail("nbest must be in 1..beam");
  if (jobs < 1) fail("jobs must be >= 1");
  for (double t : sweep_thresholds) {
    if (std::isnan(t)) fail("sweep thresholds must be numbers");
  }
  for (double l : sweep_lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l)) fail("sweep lambdas must be finite and >= 0");
  }
  if (!(max_control_degradation >= 0.0)) fail("max-control-degradation must be >= 0");
}

TrainedModels TrainModels(const PipelineConfig& config) {
  config.Validate();
  KatzOptions katz;
  katz.discount_cutoff = config.discount_cutoff;

  TrainedModels m;
  Corpus general = LoadCorpus(config.general_corpus);
  m.gen = EstimateKatz(CountNGrams(general, config.order), katz);
  m.gen.set_id(config.general_corpus);

  Corpus all = general;
  std::vector<NGramModel> oods;
  for (const auto& path : config.ood_corpora) {
    Corpus c = LoadCorpus(path);
    oods.push_back(EstimateKatz(CountNGrams(c, config.order), katz));
    oods.back().set_id(path);
    all.sentences.insert(all.sentences.end(), c.sentences.begin(), c.sentences.end());
  }
  m.ood = oods.size() == 1 ? std::move(oods[0]) : InterpolateEqual(oods);

  m.inventory = BuildSubwordInventory(all, config.subword_units);
  m.prior = TrainSubwordPrior(general, m.inventory, config.prior_order, katz);

  InterpolationComponent parts[] = {{&m.gen, 0.5}, {&m.ood, 0.5}};
  m.rescorer = Interpolate(parts);
  Log().info("trained models: gen {} entries, ood {} entries, {} subword units",
             m.gen.NumEntries(), m.ood.NumEntries(), m.inventory.size());
  return m;
}

EvalSet MakeEvalSet(const Testset& testset, bool control, const SubwordInventory& inv,
                    const NGramModel& prior, const PipelineConfig& config) {
  EvalSet set;
  set.testset = testset;
  set.control = control;
  set.posteriors.resize(testset.size());
  SurrogateChannel channel(inv, prior);
  ParallelFor(testset.size(), config.jobs, [&](size_t i) {
    SurrogateOptions o;
    o.beta = config.beta;
    o.epsilon = config.epsilon;
    o.jitter = config.jitter;
    o.seed = DeriveSeed(config.seed, testset.ids[i]);
    set.posteriors[i] = channel.Emit(testset.references[i], o, testset.ids[i]);
  });
  return set;
}

std::vector<EvalSet> MakeEvalSets(const PipelineConfig& config, const TrainedModels& models) {
  std::vector<EvalSet> sets;
  for (const auto& path : config.ood_testsets) {
    std::string name = std::filesystem::path(path).stem().string();
    sets.push_back(MakeEvalSet(ReadTestset(path, name), false, models.inventory, models.prior,
                               config));
  }
  if (!config.control_testset.empty()) {
    sets.push_back(MakeEvalSet(ReadTestset(config.control_testset, "control"), true,
                               models.inventory, models.prior, config));
  }
  return sets;
}

std::vector<SweepPoint> SweepGrid(const PipelineConfig& config) {
  std::vector<SweepPoint> grid;
  for (double t : config.sweep_thresholds) {
    for (double l : config.sweep_lambdas) grid.push_back({t, l});
  }
  return grid;
}

namespace {

WerBreakdown Pool(const SystemScores& s, const std::vector<WerBreakdown>& v, bool control) {
  WerBreakdown total;
  for (size_t i = 0; i < v.size(); ++i) {
    if (s.control[i] == control) total += v[i];
  }
  return total;
}

nlohmann::ordered_json WerJson(const WerBreakdown& w) {
  nlohmann::ordered_json j;
  j["wer"] = w.wer();
  j["substitutions"] = w.substitutions;
  j["deletions"] = w.deletions;
  j["insertions"] = w.insertions;
  j["reference_words"] = w.reference_words;
  return j;
}

}  // namespace

WerBreakdown SystemScores::OodWer() const { return Pool(*this, wer, false); }
WerBreakdown SystemScores::OodOracle() const { return Pool(*this, oracle, false); }
WerBreakdown SystemScores::ControlWer() const { return Pool(*this, wer, true); }

const SystemScores& PipelineResult::System(const std::string& name) const {
  for (const auto& s : systems) {
    if (s.system == name) return s;
  }
  throw Error("no system named " + name);
}

PipelineResult RunPipeline(const PipelineConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  config.Validate();
  fs::create_directories(out_dir);
  fs::path out(out_dir);

  TrainedModels models = TrainModels(config);
  WriteArpa(models.gen, (out / "gen.arpa").string());
  WriteArpa(models.ood, (out / "ood.arpa").string());
  WriteArpa(models.rescorer, (out / "rescore.arpa").string());
  WriteArpa(models.prior, (out / "prior.arpa").string());
  models.inventory.Write((out / "inventory.tsv").string());

  std::vector<EvalSet> sets = MakeEvalSets(config, models);
  PipelineResult result;
  result.operating_point = {config.threshold, config.lambda};

  auto grid = SweepGrid(config);
  bool has_ood = !config.ood_testsets.empty();
  if (!grid.empty() && has_ood) {
    SweepInputs in;
    in.gen = &models.gen;
    in.ood = &models.ood;
    in.inv = &models.inventory;
    in.sets = sets;
    in.beam = config.beam;
    in.nbest = config.nbest;
    in.jobs = config.jobs;
    result.sweep = RunSweep(in, grid, config.max_control_degradation);
    WriteSweepCsv(*result.sweep, (out / "sweep.csv").string());
    WriteSweepSummary(*result.sweep, (out / "sweep.json").string());
    if (result.sweep->selected) {
      result.operating_point = result.sweep->rows[*result.sweep->selected].point;
    } else {
      Log().warn("sweep found no feasible point; decoding at threshold={} lambda={}",
                 config.threshold, config.lambda);
    }
  }

  BoostTable table = BuildBoostTable(models.gen, models.ood, result.operating_point.threshold,
                                     config.jobs);
  result.boost_entries = table.entries.size();
  WriteBoostTable(table, (out / "boost.tsv").string());
  BoostingFst fst = BuildBoostingFst(table, models.inventory);
  fst.Write((out / "boost.fst").string());
  if (sets.empty()) return result;

  BeamOptions base;
  base.beam = config.beam;
  base.nbest = config.nbest;
  BeamOptions fused = base;
  fused.lambda = result.operating_point.lambda;
  fused.fst = &fst;

  NGramSentenceScorer scorer(models.rescorer);
  RescoreConfig rc;
  rc.alpha = config.alpha;
  rc.word_reward = config.word_reward;
  rc.scorer = &scorer;

  fs::create_directories(out / "nbest");
  const char* names[] = {"baseline", "fp", "sp", "fp+sp"};
  result.systems.resize(4);
  for (int k = 0; k < 4; ++k) result.systems[k].system = names[k];
  for (const auto& set : sets) {
    std::vector<std::vector<NBestList>> lists(4);
    lists[0] = DecodeSet(set, models.inventory, base, config.jobs);
    lists[1] = DecodeSet(set, models.inventory, fused, config.jobs);
    for (int k = 2; k < 4; ++k) {
      const auto& src = lists[k - 2];
      lists[k].resize(src.size());
      ParallelFor(src.size(), config.jobs, [&](size_t i) { lists[k][i] = RescoreNBest(src[i], rc); });
    }
    for (int k = 0; k < 4; ++k) {
      auto& s = result.systems[k];
      s.testsets.push_back(set.testset.name);
      s.control.push_back(set.control);
      s.wer.push_back(CorpusWer(set.testset, lists[k]));
      s.oracle.push_back(CorpusOracleWer(set.testset, lists[k]));
      std::string file = std::string(names[k]) + "_" + set.testset.name + ".jsonl";
      WriteNBest(lists[k], (out / "nbest" / file).string());
    }
  }

  nlohmann::ordered_json report;
  report["threshold"] = result.operating_point.threshold;
  report["lambda"] = result.operating_point.lambda;
  report["from_sweep"] = result.sweep && result.sweep->selected.has_value();
  report["boost_entries"] = result.boost_entries;
  report["alpha"] = config.alpha;
  report["word_reward"] = config.word_reward;
  report["beta"] = config.beta;
  report["seed"] = config.seed;
  const auto& baseline = result.systems[0];
  for (const auto& s : result.systems) {
    nlohmann::ordered_json j;
    j["ood"] = WerJson(s.OodWer());
    j["ood_oracle"] = WerJson(s.OodOracle());
    j["ood_werr"] = SafeWerr(baseline.OodWer().wer(), s.OodWer().wer());
    j["ood_oracle_werr"] = SafeWerr(baseline.OodOracle().wer(), s.OodOracle().wer());
    if (!config.control_testset.empty()) {
      j["control"] = WerJson(s.ControlWer());
      j["control_werr"] = SafeWerr(baseline.ControlWer().wer(), s.ControlWer().wer());
    }
    nlohmann::ordered_json per = nlohmann::ordered_json::object();
    for (size_t i = 0; i < s.testsets.size(); ++i) {
      per[s.testsets[i]] = {{"wer", s.wer[i].wer()}, {"oracle_wer", s.oracle[i].wer()}};
    }
    j["testsets"] = std::move(per);
    report["systems"][s.system] = std::move(j);
  }
  std::ofstream os(out / "report.json");
  if (!os) throw Error("cannot write report.json");
  os << report.dump(2) << '\n';
  return result;
}

}  // namespace biasfst
