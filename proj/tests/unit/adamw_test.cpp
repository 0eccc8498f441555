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

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "feinduce/adamw.hpp"
#include "feinduce/errors.hpp"

namespace feinduce {
namespace {

TEST_CASE("zero gradients without decay leave parameters alone") {
  AdamWOptions options;
  options.weight_decay = 0;
  OptimizerState state(options, {3});
  std::vector<double> p = {1, -2, 3}, g = {0, 0, 0};
  const std::vector<ParamBlock> blocks = {{p, g}};
  for (int i = 0; i < 5; ++i) AdamWStep(state, blocks, 0.1);
  CHECK(p == std::vector<double>{1, -2, 3});
  CHECK(state.step() == 5);
}

TEST_CASE("first step is a unit update against the gradient") {
  AdamWOptions options;
  options.weight_decay = 0;
  OptimizerState state(options, {1});
  std::vector<double> p = {0}, g = {1};
  AdamWStep(state, std::vector<ParamBlock>{{p, g}}, 0.1);
  CHECK(p[0] == doctest::Approx(-0.1).epsilon(1e-6));
}

TEST_CASE("decay is decoupled from the gradient") {
  OptimizerState state(AdamWOptions{}, {2});
  std::vector<double> p = {2, -4}, g = {0, 0};
  AdamWStep(state, std::vector<ParamBlock>{{p, g}}, 0.5);
  CHECK(p[0] == doctest::Approx(2 * (1 - 0.5 * 0.01)));
  AdamWStep(state, std::vector<ParamBlock>{{p, g}}, 0.5);
  CHECK(p[1] == doctest::Approx(-4 * std::pow(1 - 0.5 * 0.01, 2)));
}

TEST_CASE("moments keep the parameter shapes") {
  OptimizerState state(AdamWOptions{}, {4, 2});
  CHECK(state.first_moments().size() == 2);
  CHECK(state.first_moments()[0].size() == 4);
  CHECK(state.second_moments()[1].size() == 2);
  CHECK(state.step() == 0);
}

TEST_CASE("non-finite gradients abort before any update") {
  OptimizerState state(AdamWOptions{}, {1, 1});
  std::vector<double> a = {1}, b = {1};
  std::vector<double> ga = {0.5}, gb = {std::numeric_limits<double>::quiet_NaN()};
  CHECK_THROWS_AS(AdamWStep(state, std::vector<ParamBlock>{{a, ga}, {b, gb}}, 0.1),
                  NumericalError);
  CHECK(a[0] == 1);
  CHECK(state.step() == 0);
}

TEST_CASE("mismatched shapes are rejected") {
  OptimizerState state(AdamWOptions{}, {2});
  std::vector<double> p = {1}, g = {1};
  CHECK_THROWS(AdamWStep(state, std::vector<ParamBlock>{{p, g}}, 0.1));
}

}  // namespace
}  // namespace feinduce
