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

// Clustering metrics (purity family and B-cubed family) and the
// ranking-recall score used for model selection.

#ifndef FEINDUCE_EVALUATION_HPP_
#define FEINDUCE_EVALUATION_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "feinduce/clustering.hpp"
#include "feinduce/corpus.hpp"
#include "feinduce/metric_head.hpp"

namespace feinduce {

// Gold (frame, fe_label) per instance id.
struct GoldLabeling {
  std::map<std::string, std::pair<std::string, std::string>> labels;

  static GoldLabeling FromDataset(const Dataset &dataset);
};

struct EvalReport {
  std::size_t n_clusters = 0;
  double pu = 0;
  double ipu = 0;
  double pif = 0;
  double bcp = 0;
  double bcr = 0;
  double bcf = 0;
};

// 2ab / (a + b), and 0 when a + b == 0.
double HarmonicMean(double a, double b);

// Metrics over integer-coded labelings; predicted[i] and gold[i] label the
// same instance. All throw DataError on empty or mismatched input.
double Purity(std::span<const int> predicted, std::span<const int> gold);
double InversePurity(std::span<const int> predicted, std::span<const int> gold);
double BCubedPrecision(std::span<const int> predicted,
                       std::span<const int> gold);
double BCubedRecall(std::span<const int> predicted, std::span<const int> gold);
EvalReport Evaluate(std::span<const int> predicted, std::span<const int> gold);

// Integer codes for a clustering and its gold labels, aligned by instance.
// Throws DataError when the instance sets differ.
struct EncodedLabels {
  std::vector<int> predicted;
  std::vector<int> gold;
};
EncodedLabels EncodeLabels(const FEClustering &predicted,
                           const GoldLabeling &gold);

double Purity(const FEClustering &predicted, const GoldLabeling &gold);
double InversePurity(const FEClustering &predicted, const GoldLabeling &gold);
double BCubedPrecision(const FEClustering &predicted, const GoldLabeling &gold);
double BCubedRecall(const FEClustering &predicted, const GoldLabeling &gold);
EvalReport Evaluate(const FEClustering &predicted, const GoldLabeling &gold);

struct RankingRecallResult {
  double score = 0;
  std::size_t queries = 0;
  std::size_t skipped = 0;  // queries without a same-class peer
};

// For each query: rank the other rows by cosine similarity (descending,
// ties by id ascending), take the top k where k is the number of
// same-class peers, and score the fraction of peers retrieved. Returns the
// mean over queries that have at least one peer.
RankingRecallResult ComputeRankingRecall(const Matrix &embeddings,
                                         std::span<const int> classes,
                                         std::span<const std::string> ids);

// Ranking recall of `head` embeddings with (frame, fe_label) classes.
double RankingRecall(const Dataset &dataset, const MetricHead &head);

// Class id per instance for (frame, fe_label) pairs, first-appearance order.
std::vector<int> FrameElementClasses(const Dataset &dataset);

// "method\tmodel\t#C\tPu\tiPu\tPiF\tBcP\tBcR\tBcF"
std::string EvalTsvHeader();
// Scores as percentages with one decimal; #C rounded to an integer.
std::string EvalTsvRow(const std::string &method, const std::string &model,
                       double n_clusters, const EvalReport &report);

}  // namespace feinduce

#endif  // FEINDUCE_EVALUATION_HPP_
