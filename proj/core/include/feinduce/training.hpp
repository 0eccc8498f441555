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

// Metric-head training with dev-set model selection over margins and
// epochs, plus the model file container.

#ifndef FEINDUCE_TRAINING_HPP_
#define FEINDUCE_TRAINING_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "feinduce/adamw.hpp"
#include "feinduce/corpus.hpp"
#include "feinduce/losses.hpp"
#include "feinduce/metric_head.hpp"
#include "feinduce/sampling.hpp"

namespace feinduce {

enum class LossKind { kTriplet, kArcFace };

const char *LossKindName(LossKind loss);

struct TrainConfig {
  LossKind loss = LossKind::kTriplet;
  TrainMode mode = TrainMode::kIntraFrame;
  std::vector<double> margins;  // empty means DefaultMargins(loss)
  double scale = 16.0;
  int batch_size = 16;
  int epochs = 10;
  double learning_rate = 1e-3;
  double weight_decay = 0.01;
  double init_noise = 0.01;
  std::uint64_t seed = 0;

  static std::vector<double> DefaultMargins(LossKind loss);

  std::vector<double> MarginGrid() const;

  // Throws DataError on an invalid field.
  void Validate() const;
};

struct SelectionEntry {
  double margin = 0;
  int epoch = 0;
  double score = 0;

  bool operator==(const SelectionEntry &) const = default;
};

struct TrainedModel {
  MetricHead head;
  std::optional<ArcFaceHead> arcface;
  TrainConfig config;
  std::vector<SelectionEntry> selection_report;
  SelectionEntry selected;
  std::size_t skipped_anchors = 0;
  std::size_t skipped_arcface = 0;
};

// Builds the label spaces for ArcFace training: one space of all
// (frame, FE) pairs for cross-frame mode, one space per frame otherwise.
// Each weight row starts at the normalized mean embedding of its class.
ArcFaceHead InitArcFaceHead(const Dataset &train, TrainMode mode);

// For each margin in the grid: re-initialize the head from the seed, run
// `epochs` epochs of minibatch AdamW, and score a snapshot on `dev` with
// ranking recall after every epoch. Returns the best snapshot (ties go to
// the smaller epoch, then the smaller margin). Both datasets must be
// l2-normalized.
TrainedModel Train(const Dataset &train, const Dataset &dev,
                   const TrainConfig &config);

void WriteModel(const TrainedModel &model, std::ostream &out);
TrainedModel ReadModel(std::istream &in);
void SaveModel(const TrainedModel &model, const std::filesystem::path &path);
TrainedModel LoadModel(const std::filesystem::path &path);

}  // namespace feinduce

#endif  // FEINDUCE_TRAINING_HPP_
