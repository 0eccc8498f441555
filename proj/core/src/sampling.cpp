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

#include "feinduce/sampling.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <utility>

namespace feinduce {

const char *TrainModeName(TrainMode mode) {
  return mode == TrainMode::kCrossFrame ? "cross" : "intra";
}

namespace {

std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// A contiguous run [begin, begin + size) of the grouped order.
struct Span {
  std::size_t begin = 0;
  std::size_t size = 0;
};

// Uniform draw from span `outer` with span `inner` (nested inside it)
// removed. Requires outer.size > inner.size.
std::size_t DrawExcluding(const std::vector<std::size_t> &order, Span outer,
                          Span inner, std::mt19937_64 &rng) {
  std::uniform_int_distribution<std::size_t> pick(
      0, outer.size - inner.size - 1);
  std::size_t r = outer.begin + pick(rng);
  if (r >= inner.begin) r += inner.size;
  return order[r];
}

}  // namespace

SampledTriplets SampleTriplets(const Dataset &dataset, TrainMode mode,
                               int epoch, std::uint64_t seed) {
  // Order instances so that frames are contiguous and, within a frame,
  // each (frame, FE) group is contiguous.
  std::map<std::string, std::size_t> frame_rank;
  std::map<std::pair<std::string, std::string>, std::size_t> group_rank;
  for (const ArgumentInstance &inst : dataset.instances()) {
    frame_rank.emplace(inst.frame, frame_rank.size());
    group_rank.emplace(std::make_pair(inst.frame, inst.fe_label),
                       group_rank.size());
  }
  const std::size_t n = dataset.size();
  std::vector<std::size_t> group_of(n), frame_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    frame_of[i] = frame_rank.at(dataset[i].frame);
    group_of[i] = group_rank.at({dataset[i].frame, dataset[i].fe_label});
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (frame_of[a] != frame_of[b])
                       return frame_of[a] < frame_of[b];
                     return group_of[a] < group_of[b];
                   });
  std::vector<Span> group_span(group_rank.size()), frame_span(frame_rank.size());
  for (std::size_t r = 0; r < n; ++r) {
    Span &g = group_span[group_of[order[r]]];
    if (g.size++ == 0) g.begin = r;
    Span &f = frame_span[frame_of[order[r]]];
    if (f.size++ == 0) f.begin = r;
  }
  // Position of each instance inside the grouped order.
  std::vector<std::size_t> rank_of(n);
  for (std::size_t r = 0; r < n; ++r) rank_of[order[r]] = r;

  std::mt19937_64 rng(SplitMix64(seed ^ SplitMix64(static_cast<std::uint64_t>(epoch))));
  SampledTriplets out;
  for (std::size_t a = 0; a < n; ++a) {
    const Span group = group_span[group_of[a]];
    const Span pool = mode == TrainMode::kCrossFrame ? Span{0, n}
                                                     : frame_span[frame_of[a]];
    if (group.size < 2 || pool.size <= group.size) {
      ++out.skipped_anchors;
      continue;
    }
    const std::size_t positive =
        DrawExcluding(order, group, Span{rank_of[a], 1}, rng);
    const std::size_t negative = DrawExcluding(order, pool, group, rng);
    out.triplets.push_back({a, positive, negative});
  }
  return out;
}

}  // namespace feinduce
