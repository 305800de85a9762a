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
#include <limits>
#include <string>

#include "json.hpp"

#include "biasfst/common.h"
#include "biasfst/decoder.h"

namespace biasfst {

using nlohmann::ordered_json;

namespace {

// JSON has no infinities; -inf scores (zero-floor channels) travel as null.
ordered_json Score(double v) {
  if (std::isfinite(v)) return v;
  if (v < 0) return nullptr;
  throw Error("cannot serialize a non-finite score");
}

double ParseScore(const ordered_json& j) {
  if (j.is_null()) return -std::numeric_limits<double>::infinity();
  return j.get<double>();
}

}  // namespace

void WriteNBest(std::span<const NBestList> lists, std::ostream& os) {
  for (const auto& list : lists) {
    ordered_json hyps = ordered_json::array();
    for (const auto& h : list.hyps) {
      ordered_json j;
      j["words"] = h.words;
      j["tokens"] = h.tokens;
      j["model_score"] = Score(h.model_score);
      j["fusion_score"] = Score(h.fusion_score);
      j["total"] = Score(h.total);
      if (h.rescore_total) j["rescore_total"] = Score(*h.rescore_total);
      hyps.push_back(std::move(j));
    }
    ordered_json line;
    line["utterance_id"] = list.utterance_id;
    line["hypotheses"] = std::move(hyps);
    os << line.dump() << '\n';
  }
}

void WriteNBest(std::span<const NBestList> lists, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write n-best file " + path);
  WriteNBest(lists, os);
  if (!os) throw Error("write failed for " + path);
}

std::vector<NBestList> ReadNBest(std::istream& is) {
  std::vector<NBestList> out;
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto j = ordered_json::parse(line);
      NBestList list;
      list.utterance_id = j.at("utterance_id").get<std::string>();
      for (const auto& jh : j.at("hypotheses")) {
        Hypothesis h;
        h.words = jh.at("words").get<std::vector<std::string>>();
        if (jh.contains("tokens")) h.tokens = jh.at("tokens").get<std::vector<int>>();
        h.model_score = ParseScore(jh.at("model_score"));
        h.fusion_score = ParseScore(jh.at("fusion_score"));
        h.total = ParseScore(jh.at("total"));
        if (jh.contains("rescore_total")) h.rescore_total = ParseScore(jh.at("rescore_total"));
        list.hyps.push_back(std::move(h));
      }
      out.push_back(std::move(list));
    } catch (const nlohmann::json::exception& e) {
      throw Error("n-best line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::vector<NBestList> ReadNBest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot read n-best file " + path);
  return ReadNBest(is);
}

}  // namespace biasfst
