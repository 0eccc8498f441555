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

#include "feinduce/training.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "feinduce/errors.hpp"
#include "feinduce/evaluation.hpp"

namespace feinduce {

const char *LossKindName(LossKind loss) {
  return loss == LossKind::kTriplet ? "triplet" : "arcface";
}

std::vector<double> TrainConfig::DefaultMargins(LossKind loss) {
  if (loss == LossKind::kTriplet) return {0.1, 0.2, 0.5, 1.0};
  return {0.01, 0.02, 0.05, 0.1};
}

std::vector<double> TrainConfig::MarginGrid() const {
  return margins.empty() ? DefaultMargins(loss) : margins;
}

void TrainConfig::Validate() const {
  if (batch_size < 2) throw DataError("batch_size must be at least 2");
  if (epochs < 1) throw DataError("epochs must be at least 1");
  if (!(learning_rate > 0)) throw DataError("learning rate must be positive");
  if (!(weight_decay >= 0)) throw DataError("weight decay must be >= 0");
  if (!(init_noise >= 0)) throw DataError("init noise must be >= 0");
  if (loss == LossKind::kArcFace && !(scale > 0))
    throw DataError("ArcFace scale must be positive");
  const std::vector<double> grid = DefaultMargins(loss);
  for (double m : MarginGrid()) {
    if (!(m >= 0)) throw DataError("margins must be >= 0");
    if (loss == LossKind::kArcFace && !(m < std::numbers::pi / 2))
      throw DataError("ArcFace margin must be below pi/2");
    if (std::find(grid.begin(), grid.end(), m) == grid.end())
      warn("margin " + std::to_string(m) + " is outside the default " +
           LossKindName(loss) + " grid");
  }
}

namespace {

std::string ClassLabel(const ArgumentInstance &inst) {
  return inst.frame + "/" + inst.fe_label;
}

std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = a * 0x9e3779b97f4a7c15ULL + b + 0x632be59bd9b4e019ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// (space, class) per training instance, or space == npos when the
// instance cannot be classified (its frame has a single FE).
struct ArcFaceTarget {
  std::size_t space = std::string::npos;
  std::size_t cls = 0;
};

std::vector<ArcFaceTarget> ArcFaceTargets(const Dataset &train,
                                          const ArcFaceHead &arcface,
                                          TrainMode mode) {
  std::vector<ArcFaceTarget> out(train.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const ArgumentInstance &inst = train[i];
    std::size_t space = 0;
    std::string label = ClassLabel(inst);
    if (mode == TrainMode::kIntraFrame) {
      space = arcface.SpaceIndex(inst.frame);
      label = inst.fe_label;
    }
    if (arcface.spaces[space].size() < 2) continue;
    out[i] = {space, *arcface.spaces[space].IndexOf(label)};
  }
  return out;
}

// Parameters of one training run, viewed as optimizer blocks.
struct RunParams {
  MetricHead head;
  std::optional<ArcFaceHead> arcface;
  Matrix grad_weight;
  Vector grad_bias;
  std::vector<Matrix> grad_spaces;

  std::vector<std::size_t> BlockSizes() const {
    std::vector<std::size_t> sizes = {
        static_cast<std::size_t>(head.weight.size()),
        static_cast<std::size_t>(head.bias.size())};
    if (arcface)
      for (const LabelSpace &ls : arcface->spaces)
        sizes.push_back(static_cast<std::size_t>(ls.weights.size()));
    return sizes;
  }

  void ZeroGrad() {
    grad_weight.setZero(head.weight.rows(), head.weight.cols());
    grad_bias.setZero(head.bias.size());
    if (arcface) {
      grad_spaces.resize(arcface->spaces.size());
      for (std::size_t s = 0; s < arcface->spaces.size(); ++s)
        grad_spaces[s].setZero(arcface->spaces[s].weights.rows(),
                               arcface->spaces[s].weights.cols());
    }
  }

  void ScaleGrad(double factor) {
    grad_weight *= factor;
    grad_bias *= factor;
    for (Matrix &g : grad_spaces) g *= factor;
  }

  std::vector<ParamBlock> Blocks() {
    std::vector<ParamBlock> blocks;
    blocks.push_back({{head.weight.data(), std::size_t(head.weight.size())},
                      {grad_weight.data(), std::size_t(grad_weight.size())}});
    blocks.push_back({{head.bias.data(), std::size_t(head.bias.size())},
                      {grad_bias.data(), std::size_t(grad_bias.size())}});
    if (arcface)
      for (std::size_t s = 0; s < arcface->spaces.size(); ++s) {
        Matrix &w = arcface->spaces[s].weights;
        blocks.push_back({{w.data(), std::size_t(w.size())},
                          {grad_spaces[s].data(),
                           std::size_t(grad_spaces[s].size())}});
      }
    return blocks;
  }
};

bool Better(const SelectionEntry &candidate, const SelectionEntry &best) {
  if (candidate.score != best.score) return candidate.score > best.score;
  if (candidate.epoch != best.epoch) return candidate.epoch < best.epoch;
  return candidate.margin < best.margin;
}

}  // namespace

ArcFaceHead InitArcFaceHead(const Dataset &train, TrainMode mode) {
  const std::size_t dim = train.embedding_dim();
  ArcFaceHead head;
  std::map<std::string, std::size_t> space_of;
  std::vector<std::vector<Vector>> sums;
  for (const ArgumentInstance &inst : train.instances()) {
    const std::string space_name =
        mode == TrainMode::kCrossFrame ? "all" : inst.frame;
    const std::string label =
        mode == TrainMode::kCrossFrame ? ClassLabel(inst) : inst.fe_label;
    auto [it, added] = space_of.emplace(space_name, head.spaces.size());
    if (added) {
      head.spaces.push_back({space_name, {}, Matrix()});
      sums.emplace_back();
    }
    LabelSpace &ls = head.spaces[it->second];
    std::vector<Vector> &space_sums = sums[it->second];
    std::optional<std::size_t> cls = ls.IndexOf(label);
    if (!cls) {
      cls = ls.labels.size();
      ls.labels.push_back(label);
      space_sums.push_back(Vector::Zero(dim));
    }
    space_sums[*cls] += ToVector(inst.embedding);
  }
  for (std::size_t s = 0; s < head.spaces.size(); ++s) {
    LabelSpace &ls = head.spaces[s];
    ls.weights.resize(ls.size(), dim);
    for (std::size_t c = 0; c < ls.size(); ++c) {
      Vector row = sums[s][c];
      if (row.norm() == 0) row = Vector::Unit(dim, c % dim);
      ls.weights.row(c) = row.normalized().transpose();
    }
  }
  return head;
}

TrainedModel Train(const Dataset &train, const Dataset &dev,
                   const TrainConfig &config) {
  config.Validate();
  if (train.empty()) throw DataError("empty training set");
  if (dev.empty()) throw DataError("empty development set");
  if (train.embedding_dim() != dev.embedding_dim())
    throw DataError("training and development embeddings differ in dimension");

  const std::size_t dim = train.embedding_dim();
  std::vector<Vector> inputs;
  inputs.reserve(train.size());
  for (const ArgumentInstance &inst : train.instances())
    inputs.push_back(ToVector(inst.embedding));

  TrainedModel result;
  result.config = config;
  bool have_best = false;

  const std::vector<double> grid = config.MarginGrid();
  for (double margin : grid) {
    RunParams run;
    run.head = MetricHead::PerturbedIdentity(dim, config.init_noise,
                                             config.seed);
    std::vector<ArcFaceTarget> targets;
    if (config.loss == LossKind::kArcFace) {
      run.arcface = InitArcFaceHead(train, config.mode);
      targets = ArcFaceTargets(train, *run.arcface, config.mode);
    }
    OptimizerState state(AdamWOptions{.weight_decay = config.weight_decay},
                         run.BlockSizes());
    std::size_t skipped_anchors = 0, skipped_arcface = 0;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
      std::mt19937_64 rng(MixSeed(config.seed, static_cast<std::uint64_t>(epoch)));
      // Work items: triplets or instance indices.
      std::vector<Triplet> triplets;
      std::vector<std::size_t> items;
      if (config.loss == LossKind::kTriplet) {
        SampledTriplets sampled =
            SampleTriplets(train, config.mode, epoch, config.seed);
        skipped_anchors += sampled.skipped_anchors;
        triplets = std::move(sampled.triplets);
        std::shuffle(triplets.begin(), triplets.end(), rng);
      } else {
        for (std::size_t i = 0; i < train.size(); ++i)
          if (targets[i].space != std::string::npos) items.push_back(i);
          else ++skipped_arcface;
        std::shuffle(items.begin(), items.end(), rng);
      }
      const std::size_t n_items =
          config.loss == LossKind::kTriplet ? triplets.size() : items.size();
      const std::size_t batch = static_cast<std::size_t>(config.batch_size);

      for (std::size_t start = 0; start < n_items; start += batch) {
        const std::size_t end = std::min(n_items, start + batch);
        run.ZeroGrad();
        for (std::size_t k = start; k < end; ++k) {
          if (config.loss == LossKind::kTriplet) {
            const Triplet &t = triplets[k];
            const HeadActivation a = ForwardWithCache(run.head, inputs[t.anchor]);
            const HeadActivation p = ForwardWithCache(run.head, inputs[t.positive]);
            const HeadActivation n = ForwardWithCache(run.head, inputs[t.negative]);
            const TripletGradient g =
                TripletLossGradient(a.output, p.output, n.output, margin);
            if (!g.active()) continue;
            AccumulateHeadGradient(a, g.anchor, &run.grad_weight, &run.grad_bias);
            AccumulateHeadGradient(p, g.positive, &run.grad_weight, &run.grad_bias);
            AccumulateHeadGradient(n, g.negative, &run.grad_weight, &run.grad_bias);
          } else {
            const std::size_t i = items[k];
            const HeadActivation y = ForwardWithCache(run.head, inputs[i]);
            const ArcFaceGradient g =
                ArcFaceLossGradient(*run.arcface, y.output, targets[i].space,
                                    targets[i].cls, margin, config.scale);
            if (g.skipped) {
              ++skipped_arcface;
              continue;
            }
            AccumulateHeadGradient(y, g.embedding, &run.grad_weight, &run.grad_bias);
            run.grad_spaces[targets[i].space] += g.weights;
          }
        }
        run.ScaleGrad(1.0 / static_cast<double>(end - start));
        std::vector<ParamBlock> blocks = run.Blocks();
        AdamWStep(state, blocks, config.learning_rate);
      }

      SelectionEntry entry{margin, epoch, RankingRecall(dev, run.head)};
      result.selection_report.push_back(entry);
      if (!have_best || Better(entry, result.selected)) {
        have_best = true;
        result.selected = entry;
        result.head = run.head;
        result.arcface = run.arcface;
      }
    }
    result.skipped_anchors += skipped_anchors;
    result.skipped_arcface += skipped_arcface;
  }
  return result;
}

}  // namespace feinduce
