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

#include "feinduce/adamw.hpp"

#include <cmath>

#include "feinduce/errors.hpp"

namespace feinduce {

OptimizerState::OptimizerState(const AdamWOptions &options,
                               const std::vector<std::size_t> &block_sizes)
    : options_(options) {
  for (std::size_t size : block_sizes) {
    first_.push_back(Vector::Zero(size));
    second_.push_back(Vector::Zero(size));
  }
}

void AdamWStep(OptimizerState &state, std::span<const ParamBlock> params,
               double learning_rate) {
  if (params.size() != state.first_.size())
    throw DataError("optimizer has " + std::to_string(state.first_.size()) +
                    " parameter blocks, got " + std::to_string(params.size()));
  for (std::size_t b = 0; b < params.size(); ++b) {
    const ParamBlock &block = params[b];
    if (block.value.size() != block.grad.size() ||
        block.value.size() != static_cast<std::size_t>(state.first_[b].size()))
      throw DataError("parameter block " + std::to_string(b) +
                      " does not match its optimizer state");
    for (double g : block.grad)
      if (!std::isfinite(g))
        throw NumericalError("non-finite gradient in parameter block " +
                             std::to_string(b) + " at step " +
                             std::to_string(state.step_ + 1));
  }

  const AdamWOptions &opt = state.options_;
  ++state.step_;
  const double bias1 = 1.0 - std::pow(opt.beta1, state.step_);
  const double bias2 = 1.0 - std::pow(opt.beta2, state.step_);
  const double decay = 1.0 - learning_rate * opt.weight_decay;
  for (std::size_t b = 0; b < params.size(); ++b) {
    Vector &m = state.first_[b];
    Vector &v = state.second_[b];
    const ParamBlock &block = params[b];
    for (std::size_t i = 0; i < block.value.size(); ++i) {
      const double g = block.grad[i];
      m[i] = opt.beta1 * m[i] + (1.0 - opt.beta1) * g;
      v[i] = opt.beta2 * v[i] + (1.0 - opt.beta2) * g * g;
      const double m_hat = m[i] / bias1;
      const double v_hat = v[i] / bias2;
      double &p = block.value[i];
      p *= decay;
      p -= learning_rate * m_hat / (std::sqrt(v_hat) + opt.epsilon);
    }
  }
}

}  // namespace feinduce
