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

#include <map>
#include <set>
#include <utility>

#include "doctest.h"
#include "feinduce/sampling.hpp"
#include "fixtures.hpp"

namespace feinduce {
namespace {

using Key = std::pair<std::string, std::string>;

Key KeyOf(const ArgumentInstance &inst) { return {inst.frame, inst.fe_label}; }

TEST_CASE("one triplet per anchor") {
  const Dataset d = testing::RandomDataset(2, 2, 3, 4, 1);
  for (TrainMode mode : {TrainMode::kCrossFrame, TrainMode::kIntraFrame}) {
    const SampledTriplets s = SampleTriplets(d, mode, 0, 0);
    CHECK(s.triplets.size() == 12);
    CHECK(s.skipped_anchors == 0);
    std::set<std::size_t> anchors;
    for (const Triplet &t : s.triplets) anchors.insert(t.anchor);
    CHECK(anchors.size() == 12);
  }
}

TEST_CASE("triplets respect the mode constraints") {
  const Dataset d = testing::RandomDataset(4, 3, 5, 4, 2);
  for (int epoch = 0; epoch < 5; ++epoch) {
    for (const Triplet &t : SampleTriplets(d, TrainMode::kIntraFrame, epoch, 3).triplets) {
      CHECK(t.anchor != t.positive);
      CHECK(KeyOf(d[t.anchor]) == KeyOf(d[t.positive]));
      CHECK(d[t.negative].frame == d[t.anchor].frame);
      CHECK(d[t.negative].fe_label != d[t.anchor].fe_label);
    }
    bool other_frame = false;
    for (const Triplet &t : SampleTriplets(d, TrainMode::kCrossFrame, epoch, 3).triplets) {
      CHECK(t.anchor != t.positive);
      CHECK(KeyOf(d[t.anchor]) == KeyOf(d[t.positive]));
      CHECK(KeyOf(d[t.negative]) != KeyOf(d[t.anchor]));
      other_frame |= d[t.negative].frame != d[t.anchor].frame;
    }
    CHECK(other_frame);
  }
}

TEST_CASE("sampling is deterministic in seed and epoch") {
  const Dataset d = testing::RandomDataset(3, 3, 4, 4, 5);
  const auto a = SampleTriplets(d, TrainMode::kCrossFrame, 2, 9).triplets;
  CHECK(a == SampleTriplets(d, TrainMode::kCrossFrame, 2, 9).triplets);
  CHECK(a != SampleTriplets(d, TrainMode::kCrossFrame, 3, 9).triplets);
  CHECK(a != SampleTriplets(d, TrainMode::kCrossFrame, 2, 10).triplets);
}

TEST_CASE("anchors without negatives or positives are skipped") {
  // One frame with a single FE: no intra-frame negatives exist.
  const Dataset single = testing::RandomDataset(1, 1, 4, 4, 1);
  const SampledTriplets intra = SampleTriplets(single, TrainMode::kIntraFrame, 0, 0);
  CHECK(intra.triplets.empty());
  CHECK(intra.skipped_anchors == 4);
  // A singleton FE cannot anchor.
  const Dataset lonely = testing::RandomDataset(2, 2, 1, 4, 1);
  CHECK(SampleTriplets(lonely, TrainMode::kCrossFrame, 0, 0).triplets.empty());
}

TEST_CASE("positives cover the whole group over epochs") {
  const Dataset d = testing::RandomDataset(1, 2, 4, 4, 8);
  std::map<std::size_t, std::set<std::size_t>> seen;
  for (int epoch = 0; epoch < 200; ++epoch)
    for (const Triplet &t : SampleTriplets(d, TrainMode::kIntraFrame, epoch, 1).triplets)
      seen[t.anchor].insert(t.positive);
  for (const auto &[anchor, positives] : seen) CHECK(positives.size() == 3);
}

}  // namespace
}  // namespace feinduce
