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

#ifndef FEINDUCE_METRIC_HEAD_HPP_
#define FEINDUCE_METRIC_HEAD_HPP_

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "feinduce/corpus.hpp"

namespace feinduce {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Affine projection followed by l2 normalization: y = (Wx + b) / |Wx + b|.
// `weight` is stored d_out x d_in.
struct MetricHead {
  Matrix weight;
  Vector bias;

  static MetricHead Identity(std::size_t dim);

  // Identity plus N(0, sigma^2) entries, zero bias. sigma = 0 gives
  // exactly the identity head.
  static MetricHead PerturbedIdentity(std::size_t dim, double sigma,
                                      std::uint64_t seed);

  std::size_t input_dim() const { return static_cast<std::size_t>(weight.cols()); }
  std::size_t output_dim() const { return static_cast<std::size_t>(weight.rows()); }

  // Throws NumericalError when Wx + b is the zero vector and DataError on a
  // dimension mismatch.
  Vector Forward(const Vector &x) const;

  // Embeds every instance; row i of the result is Forward(instance i).
  Matrix Embed(const Dataset &dataset) const;
};

// Intermediate values kept from a forward pass for backpropagation.
struct HeadActivation {
  Vector input;
  Vector output;      // unit norm
  double pre_norm = 0;  // |Wx + b|
};

HeadActivation ForwardWithCache(const MetricHead &head, const Vector &x);

// Gradient through y = u / |u|: (I - y y^T) g / |u|.
Vector NormalizeBackward(const Vector &output, double pre_norm,
                         const Vector &grad_output);

// Accumulates dL/dW and dL/db for one sample given dL/dy.
void AccumulateHeadGradient(const HeadActivation &activation,
                            const Vector &grad_output, Matrix *grad_weight,
                            Vector *grad_bias);

Vector ToVector(const std::vector<float> &values);

}  // namespace feinduce

#endif  // FEINDUCE_METRIC_HEAD_HPP_
