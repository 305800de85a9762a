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
#include <functional>
#include <numeric>
#include <queue>
#include <set>

#include "biasfst/common.h"
#include "biasfst/decoder.h"

namespace biasfst {

bool RanksBefore(const Hypothesis& a, const Hypothesis& b) {
  if (a.total != b.total) return a.total > b.total;
  return a.tokens < b.tokens;
}

namespace {

struct Node {
  std::vector<int> tokens;
  double model = 0.0;
  double fusion = 0.0;
  double total = 0.0;
  FstCursor cursor;
};

struct Candidate {
  size_t parent;
  int unit;
  double model;
  double fusion;
  double total;
  FstCursor cursor;
};

}  // namespace

NBestList BeamSearch(const PosteriorSequence& posteriors, const SubwordInventory& inv,
                     const BeamOptions& options) {
  if (posteriors.steps.empty()) throw Error("beam search over an empty posterior sequence");
  if (options.beam < 1) throw Error("beam width must be >= 1");
  if (options.nbest < 1 || options.nbest > options.beam) {
    throw Error("n-best size must be in 1..beam");
  }
  if (!(options.lambda >= 0.0)) throw Error("fusion weight must be >= 0");
  if (posteriors.num_units() != inv.size()) {
    throw Error("posterior width does not match the subword inventory");
  }
  const bool fuse = options.fst != nullptr && options.lambda != 0.0;
  const double lambda = options.lambda;
  // A cursor step moves the fusion score by an arc or lookahead weight minus
  // a retracted provisional credit, both within [min(0, lo), max(0, hi)].
  const double max_gain =
      fuse ? std::max(0.0, options.fst->MaxWeight()) - std::min(0.0, options.fst->MinWeight())
           : 0.0;
  const size_t num_steps = posteriors.steps.size();
  const size_t num_units = inv.size();

  std::vector<Node> beam(1);
  if (fuse) beam[0].cursor = StartCursor(*options.fst);

  std::vector<int> order(num_units);
  for (size_t t = 0; t < num_steps; ++t) {
    const auto& logq = posteriors.steps[t];
    const bool last = t + 1 == num_steps;
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return logq[a] > logq[b]; });
    // Upper bound on lambda * delta for one expansion (plus finalization on
    // the last step), used to stop scanning a parent's units early.
    const double slack = fuse ? lambda * max_gain * (last ? 3.0 : 1.0) + 1e-9 : 0.0;

    std::vector<Candidate> candidates;
    std::priority_queue<double, std::vector<double>, std::greater<double>> kept;
    for (size_t p = 0; p < beam.size(); ++p) {
      const Node& parent = beam[p];
      for (int u : order) {
        double model = parent.model + logq[u];
        if (kept.size() == options.beam &&
            model + lambda * parent.fusion + slack < kept.top()) {
          break;
        }
        Candidate c{p, u, model, parent.fusion, 0.0, {}};
        if (fuse) {
          CursorStep step = CursorExtend(*options.fst, inv, parent.cursor, u);
          c.fusion += step.delta;
          c.cursor = std::move(step.cursor);
          if (last) {
            CursorStep fin = CursorFinalize(*options.fst, c.cursor);
            c.fusion += fin.delta;
            c.cursor = std::move(fin.cursor);
          }
        }
        c.total = c.model + lambda * c.fusion;
        if (kept.size() < options.beam) {
          kept.push(c.total);
        } else if (c.total > kept.top()) {
          kept.pop();
          kept.push(c.total);
        }
        candidates.push_back(std::move(c));
      }
    }

    auto better = [&](const Candidate& a, const Candidate& b) {
      if (a.total != b.total) return a.total > b.total;
      if (a.parent != b.parent) {
        const auto& ta = beam[a.parent].tokens;
        const auto& tb = beam[b.parent].tokens;
        if (ta != tb) return ta < tb;
      }
      return a.unit < b.unit;
    };
    size_t keep = std::min(options.beam, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end(), better);

    std::vector<Node> next;
    next.reserve(keep);
    for (size_t i = 0; i < keep; ++i) {
      auto& c = candidates[i];
      Node n;
      n.tokens.reserve(t + 1);
      n.tokens = beam[c.parent].tokens;
      n.tokens.push_back(c.unit);
      n.model = c.model;
      n.fusion = c.fusion;
      n.total = c.total;
      n.cursor = std::move(c.cursor);
      next.push_back(std::move(n));
    }
    beam = std::move(next);
  }

  NBestList out;
  out.utterance_id = posteriors.utterance_id;
  std::set<std::vector<std::string>> seen;
  for (auto& node : beam) {
    if (out.hyps.size() >= options.nbest) break;
    auto words = UnitsToWords(node.tokens, inv, true);
    if (!seen.insert(words).second) continue;
    Hypothesis h;
    h.tokens = std::move(node.tokens);
    h.model_score = node.model;
    h.fusion_score = node.fusion;
    h.total = node.total;
    h.cursor = std::move(node.cursor);
    h.words = std::move(words);
    out.hyps.push_back(std::move(h));
  }
  return out;
}

}  // namespace biasfst
