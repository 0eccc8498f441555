// Copyright 2026 The feinduce Authors.
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

#include "feinduce/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "feinduce/errors.hpp"

namespace feinduce {
namespace {

// Joint and marginal counts of two integer labelings.
struct Contingency {
  std::unordered_map<std::uint64_t, std::size_t> cells;
  std::unordered_map<int, std::size_t> predicted;
  std::unordered_map<int, std::size_t> gold;
  std::size_t n = 0;
};

std::uint64_t CellKey(int p, int g) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p)) << 32) |
         static_cast<std::uint32_t>(g);
}

int CellPredicted(std::uint64_t key) { return static_cast<int>(key >> 32); }
int CellGold(std::uint64_t key) {
  return static_cast<int>(key & 0xffffffffULL);
}

Contingency Count(std::span<const int> predicted, std::span<const int> gold) {
  if (predicted.size() != gold.size())
    throw DataError("predicted and gold labelings differ in size");
  if (predicted.empty()) throw DataError("cannot evaluate an empty set");
  Contingency c;
  c.n = predicted.size();
  for (std::size_t i = 0; i < c.n; ++i) {
    ++c.cells[CellKey(predicted[i], gold[i])];
    ++c.predicted[predicted[i]];
    ++c.gold[gold[i]];
  }
  return c;
}

// Sum over clusters of one side of the largest overlap with the other.
double MajorityOverlap(const Contingency &c, bool by_predicted) {
  std::unordered_map<int, std::size_t> best;
  for (const auto &[key, count] : c.cells) {
    const int side = by_predicted ? CellPredicted(key) : CellGold(key);
    std::size_t &b = best[side];
    b = std::max(b, count);
  }
  std::size_t total = 0;
  for (const auto &[side, count] : best) total += count;
  return static_cast<double>(total) / static_cast<double>(c.n);
}

double BCubed(const Contingency &c, bool precision) {
  double total = 0;
  for (const auto &[key, count] : c.cells) {
    const std::size_t denom = precision ? c.predicted.at(CellPredicted(key))
                                        : c.gold.at(CellGold(key));
    total += static_cast<double>(count) * static_cast<double>(count) /
             static_cast<double>(denom);
  }
  return total / static_cast<double>(c.n);
}

}  // namespace

GoldLabeling GoldLabeling::FromDataset(const Dataset &dataset) {
  GoldLabeling gold;
  for (const ArgumentInstance &inst : dataset.instances())
    gold.labels[inst.instance_id] = {inst.frame, inst.fe_label};
  return gold;
}

double HarmonicMean(double a, double b) {
  return a + b == 0 ? 0.0 : 2.0 * a * b / (a + b);
}

double Purity(std::span<const int> predicted, std::span<const int> gold) {
  return MajorityOverlap(Count(predicted, gold), true);
}

double InversePurity(std::span<const int> predicted,
                     std::span<const int> gold) {
  return MajorityOverlap(Count(predicted, gold), false);
}

double BCubedPrecision(std::span<const int> predicted,
                       std::span<const int> gold) {
  return BCubed(Count(predicted, gold), true);
}

double BCubedRecall(std::span<const int> predicted,
                    std::span<const int> gold) {
  return BCubed(Count(predicted, gold), false);
}

EvalReport Evaluate(std::span<const int> predicted,
                    std::span<const int> gold) {
  const Contingency c = Count(predicted, gold);
  EvalReport r;
  r.n_clusters = c.predicted.size();
  r.pu = MajorityOverlap(c, true);
  r.ipu = MajorityOverlap(c, false);
  r.pif = HarmonicMean(r.pu, r.ipu);
  r.bcp = BCubed(c, true);
  r.bcr = BCubed(c, false);
  r.bcf = HarmonicMean(r.bcp, r.bcr);
  return r;
}

EncodedLabels EncodeLabels(const FEClustering &predicted,
                           const GoldLabeling &gold) {
  if (predicted.entries.size() != gold.labels.size())
    throw DataError("clustering covers " +
                    std::to_string(predicted.entries.size()) +
                    " instances but gold has " +
                    std::to_string(gold.labels.size()));
  std::map<FELabel, int> pred_ids;
  std::map<std::pair<std::string, std::string>, int> gold_ids;
  std::unordered_map<std::string, char> seen;
  EncodedLabels out;
  for (const auto &e : predicted.entries) {
    auto it = gold.labels.find(e.instance_id);
    if (it == gold.labels.end())
      throw DataError("instance \"" + e.instance_id + "\" has no gold label");
    if (!seen.emplace(e.instance_id, 1).second)
      throw DataError("instance \"" + e.instance_id +
                      "\" appears twice in the clustering");
    out.predicted.push_back(
        pred_ids.emplace(e.label, static_cast<int>(pred_ids.size())).first->second);
    out.gold.push_back(
        gold_ids.emplace(it->second, static_cast<int>(gold_ids.size())).first->second);
  }
  return out;
}

double Purity(const FEClustering &predicted, const GoldLabeling &gold) {
  const EncodedLabels e = EncodeLabels(predicted, gold);
  return Purity(e.predicted, e.gold);
}

double InversePurity(const FEClustering &predicted, const GoldLabeling &gold) {
  const EncodedLabels e = EncodeLabels(predicted, gold);
  return InversePurity(e.predicted, e.gold);
}

double BCubedPrecision(const FEClustering &predicted,
                       const GoldLabeling &gold) {
  const EncodedLabels e = EncodeLabels(predicted, gold);
  return BCubedPrecision(e.predicted, e.gold);
}

double BCubedRecall(const FEClustering &predicted, const GoldLabeling &gold) {
  const EncodedLabels e = EncodeLabels(predicted, gold);
  return BCubedRecall(e.predicted, e.gold);
}

EvalReport Evaluate(const FEClustering &predicted, const GoldLabeling &gold) {
  const EncodedLabels e = EncodeLabels(predicted, gold);
  return Evaluate(e.predicted, e.gold);
}

RankingRecallResult ComputeRankingRecall(const Matrix &embeddings,
                                         std::span<const int> classes,
                                         std::span<const std::string> ids) {
  const std::size_t n = static_cast<std::size_t>(embeddings.rows());
  if (classes.size() != n || ids.size() != n)
    throw DataError("ranking recall inputs differ in length");
  const Vector norms = embeddings.rowwise().norm();
  if (n > 0 && (norms.array() <= 0).any())
    throw NumericalError("zero embedding in ranking recall");
  const Matrix unit = norms.asDiagonal().inverse() * embeddings;

  std::unordered_map<int, std::size_t> class_size;
  for (int c : classes) ++class_size[c];

  RankingRecallResult result;
  double total = 0;
  std::vector<std::size_t> others;
  others.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    const std::size_t k = class_size[classes[q]] - 1;
    if (k == 0) {
      ++result.skipped;
      continue;
    }
    const Vector sims = unit * unit.row(q).transpose();
    others.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != q) others.push_back(j);
    std::partial_sort(others.begin(), others.begin() + k, others.end(),
                      [&](std::size_t a, std::size_t b) {
                        if (sims[a] != sims[b]) return sims[a] > sims[b];
                        return ids[a] < ids[b];
                      });
    std::size_t hits = 0;
    for (std::size_t r = 0; r < k; ++r)
      if (classes[others[r]] == classes[q]) ++hits;
    total += static_cast<double>(hits) / static_cast<double>(k);
    ++result.queries;
  }
  result.score =
      result.queries == 0 ? 0.0 : total / static_cast<double>(result.queries);
  return result;
}

std::vector<int> FrameElementClasses(const Dataset &dataset) {
  std::map<std::pair<std::string, std::string>, int> ids;
  std::vector<int> out;
  out.reserve(dataset.size());
  for (const ArgumentInstance &inst : dataset.instances())
    out.push_back(ids.emplace(std::make_pair(inst.frame, inst.fe_label),
                              static_cast<int>(ids.size()))
                      .first->second);
  return out;
}

double RankingRecall(const Dataset &dataset, const MetricHead &head) {
  std::vector<std::string> ids;
  ids.reserve(dataset.size());
  for (const ArgumentInstance &inst : dataset.instances())
    ids.push_back(inst.instance_id);
  const std::vector<int> classes = FrameElementClasses(dataset);
  return ComputeRankingRecall(head.Embed(dataset), classes, ids).score;
}

std::string EvalTsvHeader() {
  return "method\tmodel\t#C\tPu\tiPu\tPiF\tBcP\tBcR\tBcF";
}

std::string EvalTsvRow(const std::string &method, const std::string &model,
                       double n_clusters, const EvalReport &report) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%lld\t%.1f\t%.1f\t%.1f\t%.1f\t%.1f\t%.1f",
                static_cast<long long>(std::llround(n_clusters)),
                100 * report.pu, 100 * report.ipu, 100 * report.pif,
                100 * report.bcp, 100 * report.bcr, 100 * report.bcf);
  return method + "\t" + model + "\t" + buf;
}

}  // namespace feinduce
