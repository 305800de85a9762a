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
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "json.hpp"

#include "biasfst/boost_fst.h"
#include "biasfst/common.h"
#include "biasfst/eval.h"
#include "biasfst/llr_boost.h"

namespace biasfst {

std::vector<NBestList> DecodeSet(const EvalSet& set, const SubwordInventory& inv,
                                 const BeamOptions& options, int jobs) {
  std::vector<NBestList> out(set.posteriors.size());
  ParallelFor(out.size(), jobs, [&](size_t i) {
    out[i] = BeamSearch(set.posteriors[i], inv, options);
  });
  return out;
}

std::optional<size_t> SelectOperatingPoint(std::vector<SweepRow>& rows, double max_degradation) {
  std::optional<size_t> best;
  for (size_t i = 0; i < rows.size(); ++i) {
    rows[i].feasible = rows[i].control_werr > -max_degradation;
    if (!rows[i].feasible) continue;
    if (!best || rows[i].ood_micro_werr > rows[*best].ood_micro_werr) best = i;
  }
  return best;
}

namespace {

struct SetScores {
  WerBreakdown wer;
  WerBreakdown oracle;
};

SetScores Score(const EvalSet& set, std::span<const NBestList> lists) {
  return {CorpusWer(set.testset, lists), CorpusOracleWer(set.testset, lists)};
}

}  // namespace

SweepReport RunSweep(const SweepInputs& in, std::span<const SweepPoint> grid,
                     double max_degradation) {
  if (grid.empty()) throw Error("sweep grid is empty");
  if (in.sets.empty()) throw Error("sweep needs at least one testset");
  if (!in.gen || !in.ood || !in.inv) throw Error("sweep inputs are incomplete");
  bool has_control = false, has_ood = false;
  for (const auto& s : in.sets) (s.control ? has_control : has_ood) = true;
  if (!has_ood) throw Error("sweep needs at least one OOD testset");
  if (!has_control) Log().warn("sweep without a control testset: every point is feasible");

  BeamOptions base;
  base.beam = in.beam;
  base.nbest = in.nbest;
  std::vector<SetScores> baseline;
  for (const auto& s : in.sets) {
    auto lists = DecodeSet(s, *in.inv, base, in.jobs);
    baseline.push_back(Score(s, lists));
  }

  SweepReport report;
  report.max_control_degradation = max_degradation;
  std::map<double, std::pair<size_t, BoostingFst>> fsts;
  for (const auto& point : grid) {
    if (std::isnan(point.threshold)) throw Error("sweep threshold is NaN");
    auto it = fsts.find(point.threshold);
    if (it == fsts.end()) {
      BoostTable table = BuildBoostTable(*in.gen, *in.ood, point.threshold, in.jobs);
      size_t n = table.entries.size();
      it = fsts.emplace(point.threshold, std::make_pair(n, BuildBoostingFst(table, *in.inv))).first;
    }
    BeamOptions opts = base;
    opts.lambda = point.lambda;
    opts.fst = &it->second.second;

    SweepRow row;
    row.point = point;
    row.table_entries = it->second.first;
    WerBreakdown ood_base, ood_new, ood_base_oracle, ood_new_oracle;
    double macro = 0.0;
    size_t num_ood = 0;
    for (size_t k = 0; k < in.sets.size(); ++k) {
      const auto& s = in.sets[k];
      auto lists = DecodeSet(s, *in.inv, opts, in.jobs);
      SetScores adapted = Score(s, lists);
      TestsetResult r;
      r.name = s.testset.name;
      r.control = s.control;
      r.baseline = baseline[k].wer;
      r.adapted = adapted.wer;
      r.baseline_oracle = baseline[k].oracle;
      r.adapted_oracle = adapted.oracle;
      r.werr = SafeWerr(r.baseline.wer(), r.adapted.wer());
      r.oracle_werr = SafeWerr(r.baseline_oracle.wer(), r.adapted_oracle.wer());
      if (s.control) {
        row.control_werr = r.werr;
      } else {
        ood_base += r.baseline;
        ood_new += r.adapted;
        ood_base_oracle += r.baseline_oracle;
        ood_new_oracle += r.adapted_oracle;
        macro += r.werr;
        ++num_ood;
      }
      row.testsets.push_back(std::move(r));
    }
    row.ood_micro_werr = SafeWerr(ood_base.wer(), ood_new.wer());
    row.ood_macro_werr = macro / static_cast<double>(num_ood);
    row.ood_oracle_werr = SafeWerr(ood_base_oracle.wer(), ood_new_oracle.wer());
    Log().info("sweep T={} lambda={}: {} entries, OOD WERR {:.2f}%, control WERR {:.2f}%",
               point.threshold, point.lambda, row.table_entries, row.ood_micro_werr,
               row.control_werr);
    report.rows.push_back(std::move(row));
  }
  report.selected = SelectOperatingPoint(report.rows, max_degradation);
  if (!report.selected) Log().warn("no sweep point satisfies the control constraint");
  return report;
}

void WriteSweepCsv(const SweepReport& report, std::ostream& os) {
  os << "T,lambda,testset,baseline_wer,new_wer,werr,baseline_oracle_wer,new_oracle_wer,"
        "oracle_werr\n";
  for (const auto& row : report.rows) {
    WerBreakdown b, n, bo, no;
    for (const auto& r : row.testsets) {
      os << fmt::format("{:g},{:g},{},{:.6f},{:.6f},{:.4f},{:.6f},{:.6f},{:.4f}\n",
                        row.point.threshold, row.point.lambda, r.name, r.baseline.wer(),
                        r.adapted.wer(), r.werr, r.baseline_oracle.wer(), r.adapted_oracle.wer(),
                        r.oracle_werr);
      if (r.control) continue;
      b += r.baseline;
      n += r.adapted;
      bo += r.baseline_oracle;
      no += r.adapted_oracle;
    }
    os << fmt::format("{:g},{:g},all_ood,{:.6f},{:.6f},{:.4f},{:.6f},{:.6f},{:.4f}\n",
                      row.point.threshold, row.point.lambda, b.wer(), n.wer(),
                      row.ood_micro_werr, bo.wer(), no.wer(), row.ood_oracle_werr);
  }
}

void WriteSweepCsv(const SweepReport& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  WriteSweepCsv(report, os);
}

namespace {

nlohmann::ordered_json Num(double v) {
  if (std::isfinite(v)) return v;
  return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

nlohmann::ordered_json RowJson(const SweepRow& row) {
  nlohmann::ordered_json j;
  j["threshold"] = Num(row.point.threshold);
  j["lambda"] = Num(row.point.lambda);
  j["table_entries"] = row.table_entries;
  j["ood_micro_werr"] = Num(row.ood_micro_werr);
  j["ood_macro_werr"] = Num(row.ood_macro_werr);
  j["ood_oracle_werr"] = Num(row.ood_oracle_werr);
  j["control_werr"] = Num(row.control_werr);
  j["feasible"] = row.feasible;
  return j;
}

}  // namespace

void WriteSweepSummary(const SweepReport& report, std::ostream& os) {
  nlohmann::ordered_json j;
  j["max_control_degradation"] = report.max_control_degradation;
  j["no_feasible_point"] = report.no_feasible_point();
  j["selected"] = report.selected ? RowJson(report.rows[*report.selected])
                                  : nlohmann::ordered_json(nullptr);
  nlohmann::ordered_json grid = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) grid.push_back(RowJson(row));
  j["grid"] = std::move(grid);
  os << j.dump(2) << '\n';
}

void WriteSweepSummary(const SweepReport& report, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  WriteSweepSummary(report, os);
}

}  // namespace biasfst
