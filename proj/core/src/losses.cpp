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

#include "feinduce/losses.hpp"

#include <algorithm>
#include <cmath>

#include "feinduce/errors.hpp"

namespace feinduce {
namespace {

void CheckSameSize(const Vector &a, const Vector &b, const Vector &c) {
  if (a.size() != b.size() || a.size() != c.size())
    throw DataError("triplet embeddings differ in dimension");
}

// Target cosines this close to +-1 make acos non-differentiable.
constexpr double kArcFaceEdge = 1e-7;

struct ArcFaceForward {
  Vector cosines;      // clamped w_j . y
  Vector row_norms;    // |v_j|
  Vector logits;
  Vector probabilities;
  double loss = 0;
};

const LabelSpace &CheckedSpace(const ArcFaceHead &head, std::size_t space,
                               std::size_t class_index,
                               const Vector &embedding) {
  if (space >= head.spaces.size())
    throw DataError("label space " + std::to_string(space) +
                    " out of range");
  const LabelSpace &ls = head.spaces[space];
  if (class_index >= ls.size() ||
      static_cast<std::size_t>(ls.weights.rows()) != ls.size())
    throw DataError("class " + std::to_string(class_index) +
                    " out of range for space \"" + ls.name + "\"");
  if (ls.weights.cols() != embedding.size())
    throw DataError("class weights and embedding differ in dimension");
  return ls;
}

ArcFaceForward ArcFaceForwardPass(const LabelSpace &ls,
                                  const Vector &embedding,
                                  std::size_t class_index, double margin,
                                  double scale) {
  ArcFaceForward fw;
  fw.row_norms = ls.weights.rowwise().norm();
  if ((fw.row_norms.array() <= 0).any())
    throw NumericalError("ArcFace class weight row with zero norm");
  fw.cosines = (ls.weights * embedding).cwiseQuotient(fw.row_norms);
  fw.cosines = fw.cosines.cwiseMax(-1.0).cwiseMin(1.0);

  fw.logits = scale * fw.cosines;
  const double c = fw.cosines[class_index];
  const double sin_theta = std::sqrt(std::max(0.0, 1.0 - c * c));
  fw.logits[class_index] =
      scale * (c * std::cos(margin) - sin_theta * std::sin(margin));

  const double top = fw.logits.maxCoeff();
  fw.probabilities = (fw.logits.array() - top).exp();
  const double total = fw.probabilities.sum();
  fw.probabilities /= total;
  fw.loss = top + std::log(total) - fw.logits[class_index];
  fw.loss = std::max(0.0, fw.loss);
  return fw;
}

}  // namespace

double TripletLoss(const Vector &anchor, const Vector &positive,
                   const Vector &negative, double margin) {
  CheckSameSize(anchor, positive, negative);
  const double d_pos = (anchor - positive).squaredNorm();
  const double d_neg = (anchor - negative).squaredNorm();
  return std::max(d_pos - d_neg + margin, 0.0);
}

TripletGradient TripletLossGradient(const Vector &anchor,
                                    const Vector &positive,
                                    const Vector &negative, double margin) {
  TripletGradient g;
  g.loss = TripletLoss(anchor, positive, negative, margin);
  const Eigen::Index d = anchor.size();
  if (!g.active()) {
    g.anchor = g.positive = g.negative = Vector::Zero(d);
    return g;
  }
  const Vector to_pos = anchor - positive;
  const Vector to_neg = anchor - negative;
  g.anchor = 2.0 * to_pos - 2.0 * to_neg;
  g.positive = -2.0 * to_pos;
  g.negative = 2.0 * to_neg;
  return g;
}

std::optional<std::size_t> LabelSpace::IndexOf(const std::string &label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

std::size_t ArcFaceHead::SpaceIndex(const std::string &name) const {
  for (std::size_t i = 0; i < spaces.size(); ++i)
    if (spaces[i].name == name) return i;
  throw DataError("unknown label space \"" + name + "\"");
}

double ArcFaceLoss(const ArcFaceHead &head, const Vector &embedding,
                   std::size_t space, std::size_t class_index, double margin,
                   double scale) {
  const LabelSpace &ls = CheckedSpace(head, space, class_index, embedding);
  return ArcFaceForwardPass(ls, embedding, class_index, margin, scale).loss;
}

ArcFaceGradient ArcFaceLossGradient(const ArcFaceHead &head,
                                    const Vector &embedding,
                                    std::size_t space, std::size_t class_index,
                                    double margin, double scale) {
  const LabelSpace &ls = CheckedSpace(head, space, class_index, embedding);
  const ArcFaceForward fw =
      ArcFaceForwardPass(ls, embedding, class_index, margin, scale);

  ArcFaceGradient g;
  g.loss = fw.loss;
  g.embedding = Vector::Zero(embedding.size());
  g.weights = Matrix::Zero(ls.weights.rows(), ls.weights.cols());
  const double c = fw.cosines[class_index];
  if (std::abs(c) >= 1.0 - kArcFaceEdge) {
    g.skipped = true;
    return g;
  }

  // dL/dcos_j; the target logit is s*cos(acos(c) + m).
  Vector grad_cos = scale * fw.probabilities;
  const double dtarget_dc =
      scale * (std::cos(margin) + std::sin(margin) * c / std::sqrt(1 - c * c));
  grad_cos[class_index] = (fw.probabilities[class_index] - 1.0) * dtarget_dc;

  for (Eigen::Index j = 0; j < ls.weights.rows(); ++j) {
    const Vector w = ls.weights.row(j).transpose() / fw.row_norms[j];
    g.embedding += grad_cos[j] * w;
    g.weights.row(j) = (grad_cos[j] / fw.row_norms[j]) *
                       (embedding - fw.cosines[j] * w).transpose();
  }
  return g;
}

}  // namespace feinduce
