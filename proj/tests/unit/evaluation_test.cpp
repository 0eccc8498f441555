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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "doctest.h"
#include "feinduce/errors.hpp"
#include "feinduce/evaluation.hpp"
#include "fixtures.hpp"
#include "metric_checks.hpp"
#include "oracles/oracles.hpp"

namespace feinduce {
namespace {

using Labels = std::vector<int>;

TEST_CASE("purity examples") {
  CHECK(Purity(Labels{0, 0, 1}, Labels{5, 5, 6}) == 1.0);
  CHECK(Purity(Labels{0, 0, 0, 0}, Labels{1, 1, 1, 2}) == 0.75);
  CHECK(Purity(Labels{0, 1, 2, 3}, Labels{1, 1, 1, 2}) == 1.0);
  CHECK(InversePurity(Labels{0, 0, 0, 0}, Labels{1, 1, 1, 2}) == 1.0);
}

TEST_CASE("bcubed examples") {
  const Labels gold = {0, 0, 0, 1, 1, 1};
  const Labels pred = {0, 0, 1, 2, 3, 3};
  // Clusters {a,a | b} and {a | b,b}: written with one id per cluster.
  const Labels pred2 = {0, 0, 1, 0, 1, 1};
  CHECK(BCubedPrecision(pred2, gold) == doctest::Approx(5.0 / 9).epsilon(1e-15));
  CHECK(BCubedRecall(pred2, gold) == doctest::Approx(5.0 / 9).epsilon(1e-15));
  // Singletons: precision 1, recall mean 1/|L(i)|.
  const Labels single = {0, 1, 2, 3, 4, 5};
  CHECK(BCubedPrecision(single, gold) == 1.0);
  CHECK(BCubedRecall(single, gold) == doctest::Approx(1.0 / 3));
  CHECK(BCubedPrecision(pred, pred) == 1.0);
}

TEST_CASE("harmonic means") {
  CHECK(HarmonicMean(0.8, 0.6) == doctest::Approx(0.685714285714).epsilon(1e-10));
  CHECK(HarmonicMean(0, 0.7) == 0);
  CHECK(HarmonicMean(0, 0) == 0);
  const EvalReport r = Evaluate(Labels{1, 1, 2}, Labels{3, 3, 4});
  CHECK(r.pu == 1);
  CHECK(r.pif == 1);
  CHECK(r.bcf == 1);
  CHECK(r.n_clusters == 2);
}

TEST_CASE("empty instance sets are rejected") {
  CHECK_THROWS_AS(Purity(Labels{}, Labels{}), DataError);
  CHECK_THROWS_AS(BCubedRecall(Labels{1}, Labels{}), DataError);
}

TEST_CASE("metrics agree with brute force") {
  CHECK(testing::MaxMetricDifference(1000, 12, 1) < 1e-12);
  CHECK(testing::MaxMetricDifference(200, 60, 2) < 1e-12);
}

TEST_CASE("inverse purity is purity with roles exchanged") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 300; ++t) {
    const auto l = testing::DrawLabeling(rng, 12);
    CHECK(InversePurity(l.predicted, l.gold) == Purity(l.gold, l.predicted));
  }
}

TEST_CASE("metric ranges and cluster id permutation") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 300; ++t) {
    const auto l = testing::DrawLabeling(rng, 20);
    const EvalReport r = Evaluate(l.predicted, l.gold);
    for (double v : {r.pu, r.ipu, r.pif, r.bcp, r.bcr, r.bcf}) {
      CHECK(v >= 0);
      CHECK(v <= 1);
    }
    CHECK(r.pif <= std::max(r.pu, r.ipu) + 1e-15);
    CHECK(r.bcf <= std::max(r.bcp, r.bcr) + 1e-15);
    Labels permuted = l.predicted;
    for (int &p : permuted) p = 1000 - 3 * p;
    const EvalReport q = Evaluate(permuted, l.gold);
    CHECK(std::abs(q.pu - r.pu) < 1e-12);
    CHECK(std::abs(q.ipu - r.ipu) < 1e-12);
    CHECK(std::abs(q.bcp - r.bcp) < 1e-12);
    CHECK(std::abs(q.bcr - r.bcr) < 1e-12);
  }
}

TEST_CASE("refinement moves precision up and recall down") {
  std::mt19937_64 rng(6);
  for (int chain = 0; chain < 50; ++chain) {
    auto l = testing::DrawLabeling(rng, 20);
    std::fill(l.predicted.begin(), l.predicted.end(), 0);
    int next = 1;
    EvalReport previous = Evaluate(l.predicted, l.gold);
    for (int step = 0; step < 10; ++step) {
      // Split a random cluster by moving a random subset of it.
      const int victim = l.predicted[rng() % l.predicted.size()];
      for (int &p : l.predicted)
        if (p == victim && rng() % 2) p = next;
      ++next;
      const EvalReport r = Evaluate(l.predicted, l.gold);
      CHECK(r.pu >= previous.pu - 1e-15);
      CHECK(r.bcp >= previous.bcp - 1e-15);
      CHECK(r.ipu <= previous.ipu + 1e-15);
      CHECK(r.bcr <= previous.bcr + 1e-15);
      previous = r;
    }
  }
}

TEST_CASE("clusterings evaluate against gold frame elements") {
  const Dataset d = testing::GivingExamples();
  const GoldLabeling gold = GoldLabeling::FromDataset(d);
  FEClustering perfect;
  for (const auto &inst : d.instances())
    perfect.entries.push_back({inst.instance_id, {inst.frame, inst.fe_label[0]}});
  const EvalReport r = Evaluate(perfect, gold);
  CHECK(r.bcf == 1.0);
  CHECK(r.n_clusters == 3);
  CHECK(EvalTsvRow("intra", "triplet", 3, r) == "intra\ttriplet\t3\t100.0\t100.0\t100.0\t100.0\t100.0\t100.0");
  CHECK(EvalTsvHeader() == "method\tmodel\t#C\tPu\tiPu\tPiF\tBcP\tBcR\tBcF");
  perfect.entries.pop_back();
  CHECK_THROWS_AS(Evaluate(perfect, gold), DataError);
}

TEST_CASE("ranking recall examples") {
  Matrix emb(4, 2);
  emb << 1, 0, 0.9, 0.1, 0, 1, 0.1, 0.9;
  const std::vector<int> classes = {0, 0, 1, 1};
  const std::vector<std::string> ids = {"a", "b", "c", "d"};
  const RankingRecallResult r = ComputeRankingRecall(emb, classes, ids);
  CHECK(r.score == 1.0);
  CHECK(r.queries == 4);

  SynthConfig config;
  config.noise_scale = 0;
  CHECK(RankingRecall(GenerateSynthetic(config, 2), MetricHead::Identity(32)) == 1.0);
}

TEST_CASE("ranking recall skips queries without peers") {
  Matrix emb(3, 2);
  emb << 1, 0, 0, 1, 1, 1;
  const RankingRecallResult r =
      ComputeRankingRecall(emb, std::vector<int>{0, 0, 1}, std::vector<std::string>{"a", "b", "c"});
  CHECK(r.skipped == 1);
  CHECK(r.queries == 2);
}

TEST_CASE("ranking recall agrees with brute force") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int t = 0; t < 50; ++t) {
    const int n = 20, dim = 2 + static_cast<int>(rng() % 4);
    std::vector<std::vector<double>> raw(n, std::vector<double>(dim));
    Matrix emb(n, dim);
    std::vector<int> classes;
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) {
      // Odd trials repeat earlier rows verbatim, creating exact ties.
      if (t % 2 && i >= 4) raw[i] = raw[rng() % 4];
      else
        for (double &x : raw[i]) x = normal(rng);
      for (int d = 0; d < dim; ++d) emb(i, d) = raw[i][d];
      classes.push_back(i % 2);
      ids.push_back("id" + std::to_string((i * 7) % n));
    }
    const double expected = oracle::RankingRecall(raw, classes, ids);
    CHECK(ComputeRankingRecall(emb, classes, ids).score == doctest::Approx(expected).epsilon(1e-15));
  }
}

}  // namespace
}  // namespace feinduce
