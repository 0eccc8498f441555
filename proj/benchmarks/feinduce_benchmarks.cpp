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

#include <random>

#include <benchmark/benchmark.h>

#include "feinduce/clustering.hpp"
#include "feinduce/corpus.hpp"
#include "feinduce/evaluation.hpp"
#include "feinduce/training.hpp"

namespace feinduce {
namespace {

Matrix RandomPoints(Eigen::Index n, Eigen::Index dim) {
  std::mt19937_64 rng(n);
  std::normal_distribution<double> normal;
  Matrix m(n, dim);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  return m;
}

void BM_GroupAverageCluster(benchmark::State &state) {
  const Matrix points = RandomPoints(state.range(0), 32);
  for (auto _ : state)
    benchmark::DoNotOptimize(GroupAverageCluster(points, ClusterCount{3}));
  state.SetComplexityN(state.range(0));
  state.counters["distance_bytes"] =
      static_cast<double>(LinkageMemoryBytes(static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_GroupAverageCluster)->RangeMultiplier(2)->Range(256, 4096)->Complexity()->Unit(benchmark::kMillisecond);

void BM_RankingRecall(benchmark::State &state) {
  SynthConfig config;
  config.n_frames = static_cast<std::size_t>(state.range(0));
  const Dataset d = GenerateSynthetic(config, 1);
  const MetricHead head = MetricHead::Identity(config.dim);
  for (auto _ : state) benchmark::DoNotOptimize(RankingRecall(d, head));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(d.size()));
}
BENCHMARK(BM_RankingRecall)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State &state) {
  const Dataset all = GenerateSynthetic(SynthConfig{}, 2);
  const FoldSplit split = SplitFolds(all, 3, 2);
  const Dataset train = split.Fold(all, 0), dev = split.Fold(all, 1);
  TrainConfig config;
  config.loss = state.range(0) ? LossKind::kArcFace : LossKind::kTriplet;
  config.margins = {TrainConfig::DefaultMargins(config.loss)[1]};
  config.epochs = 1;
  for (auto _ : state) benchmark::DoNotOptimize(Train(train, dev, config));
  state.SetLabel(LossKindName(config.loss));
}
BENCHMARK(BM_TrainEpoch)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace feinduce

BENCHMARK_MAIN();
