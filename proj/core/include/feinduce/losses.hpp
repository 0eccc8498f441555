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

// Margin losses over head embeddings with analytic gradients.

#ifndef FEINDUCE_LOSSES_HPP_
#define FEINDUCE_LOSSES_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "feinduce/metric_head.hpp"

namespace feinduce {

// max(D(a, p) - D(a, n) + margin, 0) with D the squared Euclidean distance.
double TripletLoss(const Vector &anchor, const Vector &positive,
                   const Vector &negative, double margin);

struct TripletGradient {
  double loss = 0;
  Vector anchor;
  Vector positive;
  Vector negative;

  bool active() const { return loss > 0; }
};

// All three gradients are zero when the loss is inactive.
TripletGradient TripletLossGradient(const Vector &anchor,
                                    const Vector &positive,
                                    const Vector &negative, double margin);

// Classes of one classification problem. `weights` holds one raw row per
// class; rows are l2-normalized whenever the loss uses them.
struct LabelSpace {
  std::string name;
  std::vector<std::string> labels;
  Matrix weights;

  std::size_t size() const { return labels.size(); }
  std::optional<std::size_t> IndexOf(const std::string &label) const;
};

// Cross-frame training uses one space over all (frame, FE) pairs;
// intra-frame training uses one space per frame named after the frame.
struct ArcFaceHead {
  std::vector<LabelSpace> spaces;

  // Throws DataError for an unknown name.
  std::size_t SpaceIndex(const std::string &name) const;
};

// -log softmax_i over logits s*cos(theta_i + m) for the target and
// s*cos(theta_j) for the rest, theta_j = acos(clamp(w_j . y)).
// `embedding` must be unit norm. Throws DataError for an out-of-range
// space or class.
double ArcFaceLoss(const ArcFaceHead &head, const Vector &embedding,
                   std::size_t space, std::size_t class_index, double margin,
                   double scale);

struct ArcFaceGradient {
  double loss = 0;
  Vector embedding;  // dL/dy
  Matrix weights;    // dL/d(raw weight rows) of the space
  // Set when the target cosine is within 1e-7 of +-1; acos is not
  // differentiable there and all gradients are zero.
  bool skipped = false;
};

ArcFaceGradient ArcFaceLossGradient(const ArcFaceHead &head,
                                    const Vector &embedding,
                                    std::size_t space, std::size_t class_index,
                                    double margin, double scale);

}  // namespace feinduce

#endif  // FEINDUCE_LOSSES_HPP_
