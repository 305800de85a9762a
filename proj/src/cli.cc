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

#include "biasfst/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "biasfst/boost_fst.h"
#include "biasfst/common.h"
#include "biasfst/eval.h"
#include "biasfst/llr_boost.h"
#include "biasfst/ngram_lm.h"
#include "biasfst/pipeline.h"
#include "biasfst/rescore.h"
#include "biasfst/synth.h"

namespace biasfst {

namespace fs = std::filesystem;

namespace {

std::string Trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string Unquote(std::string s) {
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    return s.substr(1, s.size() - 2);
  }
  return s;
}

}  // namespace

std::map<std::string, std::vector<std::string>> ReadConfigFile(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read config file " + path);
  std::map<std::string, std::vector<std::string>> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw Error(fmt::format("{}:{}: expected `key = value`", path, lineno));
    }
    std::string key = Trim(t.substr(0, eq));
    std::string value = Trim(t.substr(eq + 1));
    if (key.empty()) throw Error(fmt::format("{}:{}: empty key", path, lineno));
    auto& values = out[key];
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
      std::string body = value.substr(1, value.size() - 2);
      size_t start = 0;
      while (start <= body.size()) {
        size_t comma = body.find(',', start);
        if (comma == std::string::npos) comma = body.size();
        std::string item = Unquote(Trim(body.substr(start, comma - start)));
        if (!item.empty()) values.push_back(item);
        start = comma + 1;
      }
    } else {
      values.push_back(Unquote(value));
    }
  }
  return out;
}

namespace {

struct Options {
  PipelineConfig pipeline;
  std::string config;
  std::string out_dir;
  std::string out;
  std::string corpus;
  int64_t prune_min_count = 1;
  size_t max_entries = 0;
  std::vector<std::string> lms;
  std::vector<double> weights;
  std::string gen_lm;
  std::string ood_lm;
  std::string boost;
  std::string inventory;
  std::string prior;
  std::string fst;
  std::string testset;
  std::string input;
  std::string baseline;
  std::string lm;
  bool use_rescore = false;
  SynthOptions synth;
};

void AddConfig(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config, "Flat key = value config file (flags override it)");
}

void AddCorpora(CLI::App* sub, Options& o) {
  auto& p = o.pipeline;
  sub->add_option("--general-corpus", p.general_corpus, "General-domain training text");
  sub->add_option("--ood-corpus", p.ood_corpora,
                  "Out-of-domain training text (repeatable; several are mixed equally)");
  sub->add_option("--order", p.order, "LM order")->capture_default_str();
  sub->add_option("--discount-cutoff", p.discount_cutoff, "Good-Turing discount cutoff")
      ->capture_default_str();
  sub->add_option("--subword-units", p.subword_units, "Subword inventory budget")
      ->capture_default_str();
  sub->add_option("--prior-order", p.prior_order, "Order of the subword prior")
      ->capture_default_str();
}

void AddChannel(CLI::App* sub, Options& o) {
  auto& p = o.pipeline;
  sub->add_option("--beta", p.beta, "Surrogate internal-LM bias")->capture_default_str();
  sub->add_option("--epsilon", p.epsilon, "Surrogate posterior floor")->capture_default_str();
  sub->add_option("--jitter", p.jitter, "Relative per-step jitter on beta")
      ->capture_default_str();
  sub->add_option("--seed", p.seed, "Random seed")->capture_default_str();
}

void AddSearch(CLI::App* sub, Options& o) {
  auto& p = o.pipeline;
  sub->add_option("--beam", p.beam, "Beam width")->capture_default_str();
  sub->add_option("--nbest", p.nbest, "N-best list size")->capture_default_str();
}

void AddJobs(CLI::App* sub, Options& o) {
  sub->add_option("--jobs", o.pipeline.jobs, "Worker threads")->capture_default_str();
}

void AddExperiment(CLI::App* sub, Options& o) {
  auto& p = o.pipeline;
  AddCorpora(sub, o);
  AddChannel(sub, o);
  AddSearch(sub, o);
  AddJobs(sub, o);
  sub->add_option("--ood-testset", p.ood_testsets, "OOD testset TSV (repeatable)");
  sub->add_option("--control-testset", p.control_testset, "Control testset TSV");
  sub->add_option("--threshold", p.threshold, "LLR clipping threshold T")
      ->capture_default_str();
  sub->add_option("--lambda", p.lambda, "Fusion weight")->capture_default_str();
  sub->add_option("--alpha", p.alpha, "Second-pass LM weight")->capture_default_str();
  sub->add_option("--word-reward", p.word_reward, "Second-pass per-word reward")
      ->capture_default_str();
  sub->add_option("--sweep-thresholds", p.sweep_thresholds, "Sweep grid over T")
      ->delimiter(',');
  sub->add_option("--sweep-lambdas", p.sweep_lambdas, "Sweep grid over lambda")
      ->delimiter(',');
  sub->add_option("--max-control-degradation", p.max_control_degradation,
                  "Allowed relative control WER degradation in percent")
      ->capture_default_str();
  sub->add_option("--out-dir", o.out_dir, "Output directory");
}

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(what);
}

void CmdTrainLm(Options& o) {
  auto& p = o.pipeline;
  KatzOptions katz;
  katz.discount_cutoff = p.discount_cutoff;
  if (!o.corpus.empty()) {
    Require(!o.out.empty(), "train-lm --corpus needs --out");
    if (p.order < 1 || p.order > kMaxOrder) throw Error("order must be in 1..4");
    Corpus c = LoadCorpus(o.corpus);
    CountTable counts = CountNGrams(c, p.order);
    NGramModel m = EstimateKatz(counts, katz);
    if (o.prune_min_count > 1 || o.max_entries > 0) {
      m = PruneModel(m, counts, {o.prune_min_count, o.max_entries});
    }
    WriteArpa(m, o.out);
    std::cout << fmt::format("wrote {} ({} entries)\n", o.out, m.NumEntries());
    return;
  }
  Require(!o.out_dir.empty(), "train-lm needs --corpus/--out or --out-dir");
  TrainedModels m = TrainModels(p);
  fs::create_directories(o.out_dir);
  fs::path out(o.out_dir);
  WriteArpa(m.gen, (out / "gen.arpa").string());
  WriteArpa(m.ood, (out / "ood.arpa").string());
  WriteArpa(m.rescorer, (out / "rescore.arpa").string());
  WriteArpa(m.prior, (out / "prior.arpa").string());
  m.inventory.Write((out / "inventory.tsv").string());
  std::cout << fmt::format("wrote models to {}\n", o.out_dir);
}

void CmdInterpolate(Options& o) {
  Require(!o.lms.empty(), "interpolate needs at least one --lm");
  Require(!o.out.empty(), "interpolate needs --out");
  std::vector<NGramModel> models;
  for (const auto& path : o.lms) models.push_back(ReadArpa(path));
  NGramModel mixed = [&] {
    if (o.weights.empty()) return InterpolateEqual(models);
    Require(o.weights.size() == models.size(), "one --weight per --lm is required");
    std::vector<InterpolationComponent> parts;
    for (size_t i = 0; i < models.size(); ++i) parts.push_back({&models[i], o.weights[i]});
    return Interpolate(parts);
  }();
  WriteArpa(mixed, o.out);
  std::cout << fmt::format("wrote {} ({} entries)\n", o.out, mixed.NumEntries());
}

void CmdBuildBoost(Options& o) {
  Require(!o.gen_lm.empty() && !o.ood_lm.empty(), "build-boost needs --gen-lm and --ood-lm");
  Require(!o.out.empty(), "build-boost needs --out");
  NGramModel gen = ReadArpa(o.gen_lm);
  NGramModel ood = ReadArpa(o.ood_lm);
  BoostTable table = BuildBoostTable(gen, ood, o.pipeline.threshold, o.pipeline.jobs);
  WriteBoostTable(table, o.out);
  std::cout << fmt::format("wrote {} ({} entries)\n", o.out, table.entries.size());
}

void CmdBuildFst(Options& o) {
  Require(!o.boost.empty() && !o.inventory.empty(), "build-fst needs --boost and --inventory");
  Require(!o.out.empty(), "build-fst needs --out");
  SubwordInventory inv = SubwordInventory::Read(o.inventory);
  BoostingFst fst = BuildBoostingFst(ReadBoostTable(o.boost), inv);
  fst.Write(o.out);
  std::cout << fmt::format("wrote {} ({} states, {} arcs)\n", o.out, fst.NumStates(),
                           fst.NumArcs());
}

void CmdSynthSuite(Options& o) {
  Require(!o.out_dir.empty(), "synth-suite needs --out-dir");
  o.synth.seed = o.pipeline.seed;
  SuitePaths paths = WriteSuite(GenerateSuite(o.synth), o.out_dir);
  std::cout << fmt::format("wrote suite to {} (config {})\n", o.out_dir, paths.config);
}

void CmdDecode(Options& o) {
  Require(!o.testset.empty() && !o.inventory.empty() && !o.prior.empty(),
          "decode needs --testset, --inventory and --prior");
  Require(!o.out.empty(), "decode needs --out");
  auto& p = o.pipeline;
  if (p.nbest < 1 || p.nbest > p.beam) throw Error("nbest must be in 1..beam");
  SubwordInventory inv = SubwordInventory::Read(o.inventory);
  NGramModel prior = ReadArpa(o.prior);
  Testset t = ReadTestset(o.testset, fs::path(o.testset).stem().string());
  EvalSet set = MakeEvalSet(t, false, inv, prior, p);
  BeamOptions opts;
  opts.beam = p.beam;
  opts.nbest = p.nbest;
  opts.lambda = p.lambda;
  BoostingFst fst;
  if (!o.fst.empty()) {
    fst = BoostingFst::Read(o.fst, inv);
    opts.fst = &fst;
  }
  auto lists = DecodeSet(set, inv, opts, p.jobs);
  WriteNBest(lists, o.out);
  WerBreakdown w = CorpusWer(t, lists);
  std::cout << fmt::format("decoded {} utterances, WER {:.4f}\n", lists.size(), w.wer());
}

void CmdRescore(Options& o) {
  Require(!o.input.empty() && !o.out.empty(), "rescore needs --input and --out");
  auto lists = ReadNBest(o.input);
  std::optional<NGramModel> lm;
  std::optional<NGramSentenceScorer> scorer;
  RescoreConfig rc;
  rc.alpha = o.pipeline.alpha;
  rc.word_reward = o.pipeline.word_reward;
  if (!o.lm.empty()) {
    lm.emplace(ReadArpa(o.lm));
    scorer.emplace(*lm);
    rc.scorer = &*scorer;
  }
  std::vector<NBestList> out(lists.size());
  ParallelFor(lists.size(), o.pipeline.jobs, [&](size_t i) { out[i] = RescoreNBest(lists[i], rc); });
  WriteNBest(out, o.out);
  std::cout << fmt::format("rescored {} lists\n", out.size());
}

void CmdEvaluate(Options& o) {
  Require(!o.testset.empty() && !o.input.empty(), "evaluate needs --testset and --input");
  Testset t = ReadTestset(o.testset, fs::path(o.testset).stem().string());
  auto lists = ReadNBest(o.input);
  WerBreakdown w = CorpusWer(t, lists, o.use_rescore);
  WerBreakdown oracle = CorpusOracleWer(t, lists);
  nlohmann::ordered_json j;
  j["testset"] = t.name;
  j["wer"] = w.wer();
  j["substitutions"] = w.substitutions;
  j["deletions"] = w.deletions;
  j["insertions"] = w.insertions;
  j["reference_words"] = w.reference_words;
  j["oracle_wer"] = oracle.wer();
  std::string line = fmt::format("{}: WER {:.4f} (S={} D={} I={} N={}) oracle WER {:.4f}",
                                 t.name, w.wer(), w.substitutions, w.deletions, w.insertions,
                                 w.reference_words, oracle.wer());
  if (!o.baseline.empty()) {
    auto base = ReadNBest(o.baseline);
    WerBreakdown b = CorpusWer(t, base);
    WerBreakdown bo = CorpusOracleWer(t, base);
    j["baseline_wer"] = b.wer();
    j["werr"] = SafeWerr(b.wer(), w.wer());
    j["oracle_werr"] = SafeWerr(bo.wer(), oracle.wer());
    line += fmt::format(", WERR {:.2f}% vs baseline {:.4f}", SafeWerr(b.wer(), w.wer()), b.wer());
  }
  std::cout << line << '\n';
  if (!o.out.empty()) {
    std::ofstream os(o.out);
    if (!os) throw Error("cannot write " + o.out);
    os << j.dump(2) << '\n';
  }
}

void CmdSweep(Options& o) {
  Require(!o.out_dir.empty(), "sweep needs --out-dir");
  auto& p = o.pipeline;
  p.Validate();
  Require(!p.ood_testsets.empty(), "sweep needs at least one --ood-testset");
  auto grid = SweepGrid(p);
  Require(!grid.empty(), "sweep grid is empty");
  TrainedModels models = TrainModels(p);
  auto sets = MakeEvalSets(p, models);
  SweepInputs in;
  in.gen = &models.gen;
  in.ood = &models.ood;
  in.inv = &models.inventory;
  in.sets = sets;
  in.beam = p.beam;
  in.nbest = p.nbest;
  in.jobs = p.jobs;
  SweepReport report = RunSweep(in, grid, p.max_control_degradation);
  fs::create_directories(o.out_dir);
  WriteSweepCsv(report, (fs::path(o.out_dir) / "sweep.csv").string());
  WriteSweepSummary(report, (fs::path(o.out_dir) / "sweep.json").string());
  if (report.selected) {
    const auto& row = report.rows[*report.selected];
    std::cout << fmt::format("selected T={:g} lambda={:g}: OOD WERR {:.2f}%, control WERR {:.2f}%\n",
                             row.point.threshold, row.point.lambda, row.ood_micro_werr,
                             row.control_werr);
  } else {
    std::cout << "no grid point satisfies the control constraint\n";
  }
}

void CmdPipeline(Options& o) {
  Require(!o.out_dir.empty(), "pipeline needs --out-dir");
  PipelineResult r = RunPipeline(o.pipeline, o.out_dir);
  std::cout << fmt::format("operating point T={:g} lambda={:g}, {} boost entries\n",
                           r.operating_point.threshold, r.operating_point.lambda,
                           r.boost_entries);
  if (r.systems.empty()) return;
  const auto& base = r.System("baseline");
  for (const auto& s : r.systems) {
    std::cout << fmt::format("  {:<9} OOD WER {:.4f} (WERR {:+.2f}%), oracle {:.4f}", s.system,
                             s.OodWer().wer(), SafeWerr(base.OodWer().wer(), s.OodWer().wer()),
                             s.OodOracle().wer());
    if (!o.pipeline.control_testset.empty()) {
      std::cout << fmt::format(", control WER {:.4f}", s.ControlWer().wer());
    }
    std::cout << '\n';
  }
}

// Applies config-file values to every option of `sub` that the command line
// left unset, by appending them as flags and reparsing.
std::vector<std::string> MergeConfig(CLI::App& app, const std::vector<std::string>& args) {
  CLI::App* sub = nullptr;
  for (auto* s : app.get_subcommands()) sub = s;
  if (!sub) return args;
  auto* config_opt = sub->get_option_no_throw("--config");
  if (!config_opt || config_opt->count() == 0) return args;
  std::string path = config_opt->as<std::string>();
  auto values = ReadConfigFile(path);

  std::set<std::string> known;
  for (auto* s : app.get_subcommands({})) {
    for (auto* opt : s->get_options()) {
      for (const auto& name : opt->get_lnames()) known.insert(name);
    }
  }
  for (const auto& [key, _] : values) {
    if (key == "config" || !known.count(key)) {
      throw Error(fmt::format("{}: unknown config key `{}`", path, key));
    }
  }
  std::vector<std::string> merged = args;
  for (const auto& [key, vals] : values) {
    auto* opt = sub->get_option_no_throw("--" + key);
    if (!opt || opt->count() > 0) continue;
    for (const auto& v : vals) merged.push_back("--" + key + "=" + v);
  }
  return merged;
}

}  // namespace

int RunCli(const std::vector<std::string>& args) {
  Options o;
  CLI::App app("Likelihood-ratio n-gram boosting for shallow-fusion decoding", "biasfst");
  app.require_subcommand(1);
  app.set_version_flag("--version", "biasfst 0.1.0");

  auto* train = app.add_subcommand("train-lm", "Train Katz backoff LMs");
  AddConfig(train, o);
  AddCorpora(train, o);
  train->add_option("--corpus", o.corpus, "Single corpus to train (with --out)");
  train->add_option("--out", o.out, "ARPA output for --corpus");
  train->add_option("--prune-min-count", o.prune_min_count,
                    "Drop highest-order n-grams seen fewer times");
  train->add_option("--max-entries", o.max_entries, "Entry budget after pruning");
  train->add_option("--out-dir", o.out_dir, "Output directory for the full model set");

  auto* interp = app.add_subcommand("interpolate", "Linearly interpolate ARPA models");
  AddConfig(interp, o);
  interp->add_option("--lm", o.lms, "Component ARPA file (repeatable)");
  interp->add_option("--weight", o.weights, "Component weight (repeatable; default equal)");
  interp->add_option("--out", o.out, "ARPA output");

  auto* boost = app.add_subcommand("build-boost", "Build the LLR boost table");
  AddConfig(boost, o);
  boost->add_option("--gen-lm", o.gen_lm, "General-domain ARPA");
  boost->add_option("--ood-lm", o.ood_lm, "Out-of-domain ARPA");
  boost->add_option("--threshold", o.pipeline.threshold, "Clipping threshold T")
      ->capture_default_str();
  boost->add_option("--out", o.out, "Boost table TSV output");
  AddJobs(boost, o);

  auto* fst = app.add_subcommand("build-fst", "Compile a boost table into a boosting FST");
  AddConfig(fst, o);
  fst->add_option("--boost", o.boost, "Boost table TSV");
  fst->add_option("--inventory", o.inventory, "Subword inventory TSV");
  fst->add_option("--out", o.out, "FST text output");

  auto* synth = app.add_subcommand("synth-suite", "Generate the seeded synthetic suite");
  AddConfig(synth, o);
  synth->add_option("--out-dir", o.out_dir, "Output directory");
  synth->add_option("--seed", o.pipeline.seed, "Random seed")->capture_default_str();
  synth->add_option("--general-sentences", o.synth.general_sentences)->capture_default_str();
  synth->add_option("--ood-sentences", o.synth.ood_sentences)->capture_default_str();
  synth->add_option("--ood-test-utterances", o.synth.ood_test_utterances)
      ->capture_default_str();
  synth->add_option("--control-test-utterances", o.synth.control_test_utterances)
      ->capture_default_str();

  auto* decode = app.add_subcommand("decode", "Decode a testset through the surrogate channel");
  AddConfig(decode, o);
  decode->add_option("--testset", o.testset, "Testset TSV");
  decode->add_option("--inventory", o.inventory, "Subword inventory TSV");
  decode->add_option("--prior", o.prior, "Subword prior ARPA");
  decode->add_option("--fst", o.fst, "Boosting FST (omit for baseline decoding)");
  decode->add_option("--lambda", o.pipeline.lambda, "Fusion weight")->capture_default_str();
  decode->add_option("--out", o.out, "N-best JSON-lines output");
  AddChannel(decode, o);
  AddSearch(decode, o);
  AddJobs(decode, o);

  auto* rescore = app.add_subcommand("rescore", "Second-pass n-best rescoring");
  AddConfig(rescore, o);
  rescore->add_option("--input", o.input, "N-best JSON-lines input");
  rescore->add_option("--lm", o.lm, "Rescoring ARPA");
  rescore->add_option("--alpha", o.pipeline.alpha, "LM weight")->capture_default_str();
  rescore->add_option("--word-reward", o.pipeline.word_reward, "Per-word reward")
      ->capture_default_str();
  rescore->add_option("--out", o.out, "N-best JSON-lines output");
  AddJobs(rescore, o);

  auto* eval = app.add_subcommand("evaluate", "Score n-best lists against a testset");
  AddConfig(eval, o);
  eval->add_option("--testset", o.testset, "Testset TSV");
  eval->add_option("--input", o.input, "N-best JSON-lines");
  eval->add_option("--baseline", o.baseline, "Baseline n-best for WERR");
  eval->add_flag("--use-rescore", o.use_rescore, "Rank by rescore_total");
  eval->add_option("--out", o.out, "JSON report output");

  auto* sweep = app.add_subcommand("sweep", "Sweep (T, lambda) and select an operating point");
  AddConfig(sweep, o);
  AddExperiment(sweep, o);

  auto* pipeline = app.add_subcommand("pipeline", "Run every stage end to end");
  AddConfig(pipeline, o);
  AddExperiment(pipeline, o);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
    std::vector<std::string> merged = MergeConfig(app, args);
    if (merged.size() != args.size()) {
      app.clear();
      o = Options();
      std::vector<std::string> rev2(merged.rbegin(), merged.rend());
      app.parse(rev2);
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "biasfst: error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (*train) CmdTrainLm(o);
    else if (*interp) CmdInterpolate(o);
    else if (*boost) CmdBuildBoost(o);
    else if (*fst) CmdBuildFst(o);
    else if (*synth) CmdSynthSuite(o);
    else if (*decode) CmdDecode(o);
    else if (*rescore) CmdRescore(o);
    else if (*eval) CmdEvaluate(o);
    else if (*sweep) CmdSweep(o);
    else if (*pipeline) CmdPipeline(o);
  } catch (const std::exception& e) {
    std::cerr << "biasfst: error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int RunCli(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return RunCli(args);
}

}  // namespace biasfst
