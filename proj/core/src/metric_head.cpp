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

#include "feinduce/metric_head.hpp"

#include <random>

#include "feinduce/errors.hpp"

namespace feinduce {

MetricHead MetricHead::Identity(std::size_t dim) {
  return {Matrix::Identity(dim, dim), Vector::Zero(dim)};
}

MetricHead MetricHead::PerturbedIdentity(std::size_t dim, double sigma,
                                         std::uint64_t seed) {
  MetricHead head = Identity(dim);
  if (sigma == 0) return head;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  for (Eigen::Index j = 0; j < head.weight.cols(); ++j)
    for (Eigen::Index i = 0; i < head.weight.rows(); ++i)
      head.weight(i, j) += normal(rng);
  return head;
}

HeadActivation ForwardWithCache(const MetricHead &head, const Vector &x) {
  if (static_cast<std::size_t>(x.size()) != head.input_dim())
    throw DataError("head expects " + std::to_string(head.input_dim()) +
                    "-dim input, got " + std::to_string(x.size()));
  HeadActivation act;
  act.input = x;
  Vector u = head.weight * x + head.bias;
  act.pre_norm = u.norm();
  if (!(act.pre_norm > 0) || !std::isfinite(act.pre_norm))
    throw NumericalError("head output has zero or non-finite norm");
  act.output = u / act.pre_norm;
  return act;
}

Vector MetricHead::Forward(const Vector &x) const {
  return ForwardWithCache(*this, x).output;
}

Matrix MetricHead::Embed(const Dataset &dataset) const {
  Matrix out(dataset.size(), output_dim());
  for (std::size_t i = 0; i < dataset.size(); ++i)
    out.row(i) = Forward(ToVector(dataset[i].embedding)).transpose();
  return out;
}

Vector NormalizeBackward(const Vector &output, double pre_norm,
                         const Vector &grad_output) {
  return (grad_output - output * output.dot(grad_output)) / pre_norm;
}

void AccumulateHeadGradient(const HeadActivation &activation,
                            const Vector &grad_output, Matrix *grad_weight,
                            Vector *grad_bias) {
  const Vector grad_pre =
      NormalizeBackward(activation.output, activation.pre_norm, grad_output);
  grad_weight->noalias() += grad_pre * activation.input.transpose();
  *grad_bias += grad_pre;
}

Vector ToVector(const std::vector<float> &values) {
  Vector v(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  return v;
}

}  // namespace feinduce
