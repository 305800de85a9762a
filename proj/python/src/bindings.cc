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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "biasfst/boost_fst.h"
#include "biasfst/cli.h"
#include "biasfst/common.h"
#include "biasfst/corpus.h"
#include "biasfst/decoder.h"
#include "biasfst/eval.h"
#include "biasfst/llr_boost.h"
#include "biasfst/ngram_lm.h"

namespace py = pybind11;

namespace biasfst {
namespace {

std::vector<WordSeq> Sentences(const std::vector<std::string>& lines) {
  std::vector<WordSeq> out;
  for (const auto& l : lines) out.push_back(SplitWhitespace(l));
  return out;
}

NGramModel TrainLm(const std::vector<std::string>& lines, int order, int discount_cutoff) {
  Corpus c = CorpusFromLines(lines);
  return EstimateKatz(CountNGrams(c, order), KatzOptions{discount_cutoff});
}

NGramModel InterpolateModels(const std::vector<const NGramModel*>& models,
                             std::vector<double> weights) {
  if (models.empty()) throw Error("interpolate needs at least one model");
  if (weights.empty()) weights.assign(models.size(), 1.0 / static_cast<double>(models.size()));
  if (weights.size() != models.size()) throw Error("one weight per model is required");
  std::vector<InterpolationComponent> parts;
  for (size_t i = 0; i < models.size(); ++i) parts.push_back({models[i], weights[i]});
  return Interpolate(parts);
}

py::dict Breakdown(const WerBreakdown& b) {
  py::dict d;
  d["substitutions"] = b.substitutions;
  d["deletions"] = b.deletions;
  d["insertions"] = b.insertions;
  d["reference_words"] = b.reference_words;
  d["errors"] = b.errors();
  d["wer"] = b.wer();
  return d;
}

// Word-level walk through the automaton, closing with </s>.
double FstSentenceBoost(const BoostingFst& fst, const WordSeq& words) {
  StateId s = fst.start();
  double total = 0.0;
  for (const auto& w : words) {
    auto [next, weight] = fst.Advance(s, w);
    total += weight;
    s = next;
  }
  return total + fst.Advance(s, kEos).second;
}

}  // namespace
}  // namespace biasfst

PYBIND11_MODULE(_core, m) {
  using namespace biasfst;
  m.doc() = "Likelihood-ratio n-gram boosting for shallow-fusion decoding";
  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<NGramModel>(m, "LanguageModel")
      .def_property_readonly("order", &NGramModel::order)
      .def_property_readonly("id", &NGramModel::id)
      .def("num_entries", &NGramModel::NumEntries)
      .def(
          "log_prob",
          [](const NGramModel& lm, const std::string& word, const WordSeq& history) {
            return lm.LogProb(word, history);
          },
          py::arg("word"), py::arg("history") = WordSeq{},
          "Natural-log p(word | history).")
      .def(
          "sentence_log_prob",
          [](const NGramModel& lm, const std::string& text) {
            return lm.SentenceLogProb(SplitWhitespace(text));
          },
          py::arg("sentence"), "Natural-log probability of <s> sentence </s>.")
      .def("write_arpa", [](const NGramModel& lm, const std::string& path) { WriteArpa(lm, path); },
           py::arg("path"));

  m.def("train_lm", &TrainLm, py::arg("lines"), py::arg("order") = 4,
        py::arg("discount_cutoff") = 5, "Katz backoff LM from whitespace-tokenized lines.");
  m.def("read_arpa", [](const std::string& path) { return ReadArpa(path); }, py::arg("path"));
  m.def("interpolate", &InterpolateModels, py::arg("models"),
        py::arg("weights") = std::vector<double>{},
        "Linear mixture; equal weights when none are given.");
  m.def(
      "llr_score",
      [](const NGramModel& gen, const NGramModel& ood, const std::string& ngram) {
        return LlrScore(gen, ood, SplitWhitespace(ngram));
      },
      py::arg("gen"), py::arg("ood"), py::arg("ngram"));

  py::class_<BoostTable>(m, "BoostTable")
      .def_readonly("threshold", &BoostTable::threshold)
      .def_property_readonly("entries",
                             [](const BoostTable& t) {
                               std::map<std::string, double> out;
                               for (const auto& [g, s] : t.entries) out[Join(g, " ")] = s;
                               return out;
                             })
      .def("__len__", [](const BoostTable& t) { return t.entries.size(); })
      .def(
          "sentence_boost",
          [](const BoostTable& t, const std::string& text) {
            return SentenceBoostOracle(t, SplitWhitespace(text));
          },
          py::arg("sentence"))
      .def("write", [](const BoostTable& t, const std::string& path) { WriteBoostTable(t, path); },
           py::arg("path"));
  m.def("build_boost_table", &BuildBoostTable, py::arg("gen"), py::arg("ood"),
        py::arg("threshold"), py::arg("jobs") = 1);
  m.def("read_boost_table", [](const std::string& path) { return ReadBoostTable(path); },
        py::arg("path"));

  py::class_<SubwordInventory>(m, "SubwordInventory")
      .def("__len__", &SubwordInventory::size)
      .def("token", &SubwordInventory::Token, py::arg("unit"))
      .def(
          "segment",
          [](const SubwordInventory& inv, const std::string& text) {
            return SegmentSentence(SplitWhitespace(text), inv);
          },
          py::arg("text"))
      .def(
          "units_to_words",
          [](const SubwordInventory& inv, const std::vector<int>& units) {
            return UnitsToWords(units, inv, true);
          },
          py::arg("units"))
      .def("write", py::overload_cast<const std::string&>(&SubwordInventory::Write, py::const_),
           py::arg("path"));
  m.def(
      "build_inventory",
      [](const std::vector<std::string>& lines, size_t max_units) {
        return BuildSubwordInventory(CorpusFromLines(lines), max_units);
      },
      py::arg("lines"), py::arg("max_units"));

  py::class_<BoostingFst>(m, "BoostingFst")
      .def_property_readonly("num_states", &BoostingFst::NumStates)
      .def_property_readonly("num_arcs", &BoostingFst::NumArcs)
      .def_property_readonly("max_weight", &BoostingFst::MaxWeight)
      .def(
          "sentence_boost",
          [](const BoostingFst& fst, const std::string& text) {
            return FstSentenceBoost(fst, SplitWhitespace(text));
          },
          py::arg("sentence"))
      .def("write", py::overload_cast<const std::string&>(&BoostingFst::Write, py::const_),
           py::arg("path"));
  m.def("build_fst", &BuildBoostingFst, py::arg("table"), py::arg("inventory"));

  m.def(
      "compute_wer",
      [](const std::string& ref, const std::string& hyp) {
        return Breakdown(ComputeWer(SplitWhitespace(ref), SplitWhitespace(hyp)));
      },
      py::arg("reference"), py::arg("hypothesis"));
  m.def(
      "oracle_wer",
      [](const std::string& ref, const std::vector<std::string>& hyps) {
        NBestList list;
        for (const auto& words : Sentences(hyps)) {
          Hypothesis h;
          h.words = words;
          list.hyps.push_back(std::move(h));
        }
        return Breakdown(OracleWer(SplitWhitespace(ref), list));
      },
      py::arg("reference"), py::arg("hypotheses"));
  m.def("werr", &Werr, py::arg("baseline_wer"), py::arg("new_wer"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        py::gil_scoped_release release;
        return RunCli(args);
      },
      py::arg("args"), "Runs the biasfst tool in-process; returns the exit status.");
}
