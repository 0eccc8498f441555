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

#ifndef FEINDUCE_SAMPLING_HPP_
#define FEINDUCE_SAMPLING_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "feinduce/corpus.hpp"

namespace feinduce {

enum class TrainMode { kCrossFrame, kIntraFrame };

const char *TrainModeName(TrainMode mode);

// Positions into the sampled dataset.
struct Triplet {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;

  bool operator==(const Triplet &) const = default;
};

struct SampledTriplets {
  std::vector<Triplet> triplets;  // in anchor order
  std::size_t skipped_anchors = 0;
};

// One triplet per eligible anchor. Positives are uniform over the anchor's
// (frame, FE) group minus the anchor. Negatives are uniform over instances
// with a different (frame, FE) pair (cross-frame) or a different FE of the
// same frame (intra-frame). Anchors in singleton groups or with an empty
// negative pool are skipped and counted. Deterministic in (seed, epoch).
SampledTriplets SampleTriplets(const Dataset &dataset, TrainMode mode,
                               int epoch, std::uint64_t seed);

}  // namespace feinduce

#endif  // FEINDUCE_SAMPLING_HPP_
