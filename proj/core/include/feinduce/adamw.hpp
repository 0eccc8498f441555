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

#ifndef FEINDUCE_ADAMW_HPP_
#define FEINDUCE_ADAMW_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "feinduce/metric_head.hpp"

namespace feinduce {

struct AdamWOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double weight_decay = 0.01;
};

// A parameter tensor viewed as a flat array together with its gradient.
struct ParamBlock {
  std::span<double> value;
  std::span<const double> grad;
};

// Moment estimates for a fixed list of parameter blocks.
class OptimizerState {
 public:
  OptimizerState(const AdamWOptions &options,
                 const std::vector<std::size_t> &block_sizes);

  const AdamWOptions &options() const { return options_; }
  long step() const { return step_; }
  const std::vector<Vector> &first_moments() const { return first_; }
  const std::vector<Vector> &second_moments() const { return second_; }

 private:
  friend void AdamWStep(OptimizerState &, std::span<const ParamBlock>,
                        double);

  AdamWOptions options_;
  long step_ = 0;
  std::vector<Vector> first_;
  std::vector<Vector> second_;
};

// One decoupled-weight-decay Adam update:
//   p <- p - lr * wd * p
//   p <- p - lr * m_hat / (sqrt(v_hat) + eps)
// Throws NumericalError, leaving parameters and state untouched, if any
// gradient entry is non-finite; DataError on a block shape mismatch.
void AdamWStep(OptimizerState &state, std::span<const ParamBlock> params,
               double learning_rate);

}  // namespace feinduce

#endif  // FEINDUCE_ADAMW_HPP_
